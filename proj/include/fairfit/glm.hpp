#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fairfit/errors.hpp"
#include "fairfit/family.hpp"

namespace fairfit {

// Coefficients laid out one column per class (a single column except for
// multinomial, which uses the symmetric all-K parameterization).
struct CoefficientSet {
  Eigen::VectorXd intercept;  // length nclasses
  Eigen::MatrixXd alpha;      // q x nclasses (sensitive block)
  Eigen::MatrixXd beta;       // p x nclasses (decorrelated predictors)

  Eigen::Index q() const { return alpha.rows(); }
  Eigen::Index p() const { return beta.rows(); }
  Eigen::Index nclasses() const { return intercept.size(); }
  static CoefficientSet zeros(Eigen::Index q, Eigen::Index p, Eigen::Index K);
};

struct FitStats {
  double deviance = 0;
  double null_deviance = 0;
  double loglik = 0;
  int df = 0;
  Eigen::MatrixXd fitted;  // n x nclasses, mean scale
  Eigen::MatrixXd linear;  // n x nclasses, linear predictors (offset included)
  Eigen::VectorXd deviance_residuals;
  int iterations = 0;
  bool separation = false;
  std::vector<double> objective_trace;  // penalized objective per iteration
  std::vector<std::string> warnings;
};

struct PenalizedFit {
  CoefficientSet coef;
  FitStats stats;
};

// IRLS blew max_iter; carries the last iterate and the objective trace.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& msg, CoefficientSet last_iterate,
                   std::vector<double> trace_in)
      : NumericError(msg), last(std::move(last_iterate)), trace(std::move(trace_in)) {}
  CoefficientSet last;
  std::vector<double> trace;
};

// Minimizes deviance(alpha, beta) + la*||alpha||^2 + lb*||beta||^2 with the
// intercept(s) unpenalized. Gaussian solves the ridge system in closed form
// on centered data; other families run penalized IRLS (multinomial cycles
// per-class partial Newton steps). `offset` (n x nclasses) is added to the
// linear predictor and is not part of the coefficients; `warm` seeds IRLS.
PenalizedFit fit_penalized(const Family& fam, const Response& y,
                           const Eigen::MatrixXd& S, const Eigen::MatrixXd& U,
                           double lambda_alpha, double lambda_beta,
                           const Eigen::MatrixXd* offset = nullptr,
                           const CoefficientSet* warm = nullptr);

// Penalized objective at arbitrary coefficients (used by gradient checks
// and the deviance-ratio constraint components).
double penalized_objective(const Family& fam, const Response& y,
                           const Eigen::MatrixXd& S, const Eigen::MatrixXd& U,
                           const CoefficientSet& coef, double lambda_alpha,
                           double lambda_beta, const Eigen::MatrixXd* offset = nullptr);

Eigen::MatrixXd linear_predictor(const Eigen::MatrixXd& S, const Eigen::MatrixXd& U,
                                 const CoefficientSet& coef,
                                 const Eigen::MatrixXd* offset = nullptr);

// Assembles fit statistics from linear predictors (fitted means clamped to
// the family's valid range); df is supplied by the caller.
FitStats stats_at(const Family& fam, const Response& y, const Eigen::MatrixXd& eta,
                  int df);

double aic(const FitStats& stats);
double bic(const FitStats& stats, Eigen::Index n);

}  // namespace fairfit
