#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "fairfit/dataset.hpp"
#include "fairfit/decorrelate.hpp"
#include "fairfit/fairness.hpp"
#include "fairfit/glm.hpp"

namespace fairfit {

enum class Method { frrm, fgrrm, zlm, zlrm, zlm_orig, zlrm_orig };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

// A fitted fair model. For FRRM/FGRRM the coefficients live on (S, U) with
// U = X - [1,S]B; the auxiliary model is always kept internally so predict()
// can rebuild U, save_auxiliary only controls whether it is user-visible.
struct FairModel {
  Method method = Method::frrm;
  Family family;
  CoefficientSet coef;
  double lambda_alpha = 0;
  double lambda_beta = 0;
  double r_bound = 1;
  double achieved_value = 0;
  std::string definition_name;
  FairnessRecord constraint_record;
  FitStats stats;
  AuxiliaryModel aux;
  bool save_auxiliary = false;
  bool bound_not_attained = false;
  std::vector<std::string> warnings;

  std::vector<std::string> predictor_names;  // design columns of X
  std::vector<std::string> sensitive_names;  // design columns of S
  // dataset-level schema, filled when fitted through fit_model
  std::vector<VariableSpec> predictor_specs;
  std::vector<VariableSpec> sensitive_specs;
  VariableSpec response_spec;
  std::string call;  // echoed by summary()

  // zafar models only: achieved per-attribute |corr| / |cov| and the KKT
  // multipliers of the 2q one-sided constraints
  Eigen::VectorXd attr_measure;
  Eigen::VectorXd multipliers;

  Response train_y;        // training response (diagnostics, refits)
  Eigen::MatrixXd train_U; // decorrelated predictors, kept iff save_auxiliary
};

struct FrrmOptions {
  double unfairness = 1.0;
  double lambda_beta = 0.0;
  bool save_auxiliary = false;
  FairnessDefinition definition{"sp-komiyama", sp_komiyama, true};
};

constexpr double kLambdaMax = 1e12;

struct LambdaSolve {
  double lambda = 0;
  double value = 0;
  bool attained = true;
  int probes = 0;
};

// Finds lambda with g(lambda) = r for a non-increasing g with g(0) > r.
// Brackets by doubling from lambda = 1, then safeguarded secant/bisection;
// stops at |g - r| <= 1e-4 or bracket width <= 1e-8 (1 + lambda). A rise of
// more than 1e-6 between bracket probes reports the definition as
// non-monotone; g(lambda_max) > r + 1e-4 returns attained = false.
LambdaSolve solve_lambda(const std::function<double(double)>& g, double r,
                         double lambda_max, double g_at_zero,
                         const std::string& definition_name);

FairModel fit_fgrrm(const Family& family, const Response& y, const Eigen::MatrixXd& X,
                    const Eigen::MatrixXd& S, const std::vector<std::string>& predictor_names,
                    const std::vector<std::string>& sensitive_names, const FrrmOptions& opts);

// gaussian-family specialization of fit_fgrrm
FairModel fit_frrm(const Response& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                   const std::vector<std::string>& predictor_names,
                   const std::vector<std::string>& sensitive_names, const FrrmOptions& opts);

}  // namespace fairfit
