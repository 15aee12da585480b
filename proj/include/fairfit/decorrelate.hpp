#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace fairfit {

// OLS coefficients of each predictor column on [1, S]. Row 0 is the
// intercept; rows 1..q correspond to the sensitive columns. Needed at
// prediction time to rebuild U for new observations.
struct AuxiliaryModel {
  Eigen::MatrixXd B;  // (q+1) x p
  std::vector<std::string> sensitive_names;
  std::vector<std::string> predictor_names;
};

// U = X - [1,S]·B with B the minimum-norm least-squares solution; U has
// zero column means and S'U = 0 up to roundoff.
void decorrelate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                 const std::vector<std::string>& sensitive_names,
                 const std::vector<std::string>& predictor_names,
                 Eigen::MatrixXd& U, AuxiliaryModel& aux);

Eigen::MatrixXd apply_aux(const AuxiliaryModel& aux, const Eigen::MatrixXd& S_new,
                          const Eigen::MatrixXd& X_new,
                          const std::vector<std::string>& sensitive_names,
                          const std::vector<std::string>& predictor_names);

}  // namespace fairfit
