#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fairfit/dataset.hpp"

namespace fairfit {

enum class FamilyKind { gaussian, binomial, poisson, multinomial };

std::string to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);

struct Family {
  FamilyKind kind = FamilyKind::gaussian;
  int K = 1;  // class count; 1 except multinomial

  bool is_classification() const {
    return kind == FamilyKind::binomial || kind == FamilyKind::multinomial;
  }
  // columns of the fitted / linear-predictor matrices
  int nclasses() const { return kind == FamilyKind::multinomial ? K : 1; }

  static Family gaussian() { return {FamilyKind::gaussian, 1}; }
  static Family binomial() { return {FamilyKind::binomial, 1}; }
  static Family poisson() { return {FamilyKind::poisson, 1}; }
  static Family multinomial(int K) { return {FamilyKind::multinomial, K}; }
};

// Response in the shape the fitters consume. For factor responses the codes
// and level labels are kept for class predictions and confusion matrices.
struct Response {
  Eigen::VectorXd values;      // gaussian/poisson: y; binomial: second level = 1
  Eigen::MatrixXd indicators;  // classification: n x K one-hot
  std::vector<int> codes;      // classification: class index per row
  std::vector<std::string> levels;

  Eigen::Index n() const { return values.size(); }
  Response subset(const std::vector<std::size_t>& rows) const;
};

// Validates family/response compatibility and builds the numeric response.
Response make_response(const Column& col, const Family& fam);
Response numeric_response(const Eigen::VectorXd& y);

// Family deviance at fitted means mu (n x 1, or n x K probabilities).
double deviance(const Family& fam, const Response& y, const Eigen::MatrixXd& mu);
// Per-observation deviance contributions (each >= 0, summing to deviance).
Eigen::VectorXd deviance_contributions(const Family& fam, const Response& y,
                                       const Eigen::MatrixXd& mu);
double loglik_at(const Family& fam, const Response& y, const Eigen::MatrixXd& mu);

// Inverse link, applied element-wise (multinomial: row-wise softmax).
Eigen::MatrixXd linkinv(const Family& fam, const Eigen::MatrixXd& eta);

}  // namespace fairfit
