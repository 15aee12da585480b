#include "fairfit/frrm.hpp"

#include <cmath>

#include "fairfit/errors.hpp"

namespace fairfit {

std::string to_string(Method m) {
  switch (m) {
    case Method::frrm: return "frrm";
    case Method::fgrrm: return "fgrrm";
    case Method::zlm: return "zlm";
    case Method::zlrm: return "zlrm";
    case Method::zlm_orig: return "zlm-orig";
    case Method::zlrm_orig: return "zlrm-orig";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "frrm") return Method::frrm;
  if (name == "fgrrm") return Method::fgrrm;
  if (name == "zlm") return Method::zlm;
  if (name == "zlrm") return Method::zlrm;
  if (name == "zlm-orig") return Method::zlm_orig;
  if (name == "zlrm-orig") return Method::zlrm_orig;
  throw SchemaError("unknown estimator '" + name + "'");
}

LambdaSolve solve_lambda(const std::function<double(double)>& g, double r,
                         double lambda_max, double g_at_zero,
                         const std::string& definition_name) {
  constexpr double kValueTol = 1e-4;
  constexpr double kMonotoneSlack = 1e-6;

  auto non_monotone = [&](double prev, double next) {
    if (next > prev + kMonotoneSlack)
      throw NumericError("fairness definition '" + definition_name +
                         "' does not decrease with the ridge penalty; the unfairness "
                         "bound cannot be calibrated against a non-monotone definition");
  };

  LambdaSolve out;
  double lo = 0, g_lo = g_at_zero;
  double hi = 1;
  double g_hi = g(hi);
  ++out.probes;
  non_monotone(g_lo, g_hi);

  // double until the root is crossed; r = 0 legitimately runs to the cap
  while (g_hi > r) {
    if (hi >= lambda_max) return {lambda_max, g_hi, false, out.probes};
    lo = hi;
    g_lo = g_hi;
    hi = std::min(hi * 2, lambda_max);
    g_hi = g(hi);
    ++out.probes;
    non_monotone(g_lo, g_hi);
  }
  if (std::abs(g_hi - r) <= kValueTol) return {hi, g_hi, true, out.probes};

  // refine inside [lo, hi] with g(lo) > r >= g(hi): safeguarded secant
  while (hi - lo > 1e-8 * (1 + hi)) {
    double mid;
    if (g_lo > g_hi) {
      mid = lo + (g_lo - r) * (hi - lo) / (g_lo - g_hi);
      const double w = hi - lo;
      mid = std::clamp(mid, lo + 0.25 * w, hi - 0.25 * w);
    } else {
      mid = lo + 0.5 * (hi - lo);
    }
    double gm = g(mid);
    ++out.probes;
    if (std::abs(gm - r) <= kValueTol) return {mid, gm, true, out.probes};
    if (gm > r) {
      lo = mid;
      g_lo = gm;
    } else {
      hi = mid;
      g_hi = gm;
    }
  }
  // bracket collapsed without hitting the value tolerance: return the
  // feasible endpoint so achieved <= r still holds
  return {hi, g_hi, true, out.probes};
}

namespace {

FairModel fit_calibrated(Method method, const Family& family, const Response& y,
                         const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                         const std::vector<std::string>& predictor_names,
                         const std::vector<std::string>& sensitive_names,
                         const FrrmOptions& opts) {
  if (!(opts.unfairness >= 0 && opts.unfairness <= 1))
    throw SchemaError("unfairness must lie in [0, 1], got " + std::to_string(opts.unfairness));
  if (!(opts.lambda_beta >= 0) || !std::isfinite(opts.lambda_beta))
    throw SchemaError("lambda must be finite and non-negative");
  if (X.rows() != S.rows() || X.rows() != y.n())
    throw SchemaError("response, predictors and sensitive attributes disagree on rows");

  const double r = opts.unfairness;

  Eigen::MatrixXd U;
  AuxiliaryModel aux;
  decorrelate(X, S, sensitive_names, predictor_names, U, aux);

  // reference fit at lambda_alpha = 0: both g(0) and the normalizer that
  // definitions like if-berk require
  PenalizedFit ref = fit_penalized(family, y, S, U, 0.0, opts.lambda_beta);

  auto input_for = [&](const PenalizedFit& fit) {
    return FairnessInput{family, y,        S,         U,
                         fit.coef, fit.stats, ref.coef, ref.stats};
  };

  FairModel m;
  m.method = method;
  m.family = family;
  m.lambda_beta = opts.lambda_beta;
  m.r_bound = r;
  m.definition_name = opts.definition.name;
  m.aux = aux;
  m.save_auxiliary = opts.save_auxiliary;
  m.predictor_names = predictor_names;
  m.sensitive_names = sensitive_names;
  m.train_y = y;
  if (opts.save_auxiliary) m.train_U = U;

  double g0 = evaluate(opts.definition, input_for(ref), nullptr, &m.warnings);
  if (g0 <= r) {
    m.coef = ref.coef;
    m.stats = ref.stats;
    m.lambda_alpha = 0;
    m.achieved_value = evaluate(opts.definition, input_for(ref), &m.constraint_record,
                                &m.warnings);
    return m;
  }

  PenalizedFit last = ref;
  auto g = [&](double lambda) {
    last = fit_penalized(family, y, S, U, lambda, opts.lambda_beta, nullptr, &last.coef);
    return evaluate(opts.definition, input_for(last), nullptr, &m.warnings);
  };

  LambdaSolve sol = solve_lambda(g, r, kLambdaMax, g0, opts.definition.name);

  PenalizedFit final_fit =
      fit_penalized(family, y, S, U, sol.lambda, opts.lambda_beta, nullptr, &last.coef);
  m.coef = final_fit.coef;
  m.stats = final_fit.stats;
  m.lambda_alpha = sol.lambda;
  m.achieved_value =
      evaluate(opts.definition, input_for(final_fit), &m.constraint_record, &m.warnings);
  if (!sol.attained) {
    m.bound_not_attained = true;
    m.warnings.push_back("unfairness bound " + std::to_string(r) +
                         " not attained at the penalty cap; achieved " +
                         std::to_string(m.achieved_value));
  }
  return m;
}

}  // namespace

FairModel fit_fgrrm(const Family& family, const Response& y, const Eigen::MatrixXd& X,
                    const Eigen::MatrixXd& S, const std::vector<std::string>& predictor_names,
                    const std::vector<std::string>& sensitive_names, const FrrmOptions& opts) {
  return fit_calibrated(Method::fgrrm, family, y, X, S, predictor_names, sensitive_names,
                        opts);
}

FairModel fit_frrm(const Response& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                   const std::vector<std::string>& predictor_names,
                   const std::vector<std::string>& sensitive_names, const FrrmOptions& opts) {
  return fit_calibrated(Method::frrm, Family::gaussian(), y, X, S, predictor_names,
                        sensitive_names, opts);
}

}  // namespace fairfit
