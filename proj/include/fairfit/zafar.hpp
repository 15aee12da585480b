#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fairfit/frrm.hpp"

namespace fairfit {

// Zafar-style models: least-squares / logistic fits on raw X under
// per-attribute bounds on |corr(X beta, S_k)| (zlm / zlrm, bound r in [0,1])
// or |cov(X beta, S_k)| (zlm-orig / zlrm-orig, bound c >= 0). S enters only
// through the constraints; prediction never needs it.
//
// The returned FairModel stores the coefficients over [1, X] in (intercept,
// beta), the per-attribute achieved |corr| / |cov| in attr_measure and the
// KKT multipliers of the active constraints in multipliers.

FairModel fit_zlm(const Response& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                  const std::vector<std::string>& predictor_names,
                  const std::vector<std::string>& sensitive_names, double r);

FairModel fit_zlrm(const Response& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                   const std::vector<std::string>& predictor_names,
                   const std::vector<std::string>& sensitive_names, double r);

FairModel fit_zlm_orig(const Response& y, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& S,
                       const std::vector<std::string>& predictor_names,
                       const std::vector<std::string>& sensitive_names, double c);

FairModel fit_zlrm_orig(const Response& y, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& S,
                        const std::vector<std::string>& predictor_names,
                        const std::vector<std::string>& sensitive_names, double c);

}  // namespace fairfit
