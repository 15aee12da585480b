#include "fairfit/glm.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

namespace fairfit {

namespace {

constexpr double kProbClamp = 1e-10;
constexpr double kWeightFloor = 1e-10;
constexpr int kMaxIter = 100;
constexpr int kMaxHalvings = 30;
constexpr double kRelTol = 1e-8;

Eigen::MatrixXd clamped_mu(const Family& fam, const Eigen::MatrixXd& eta) {
  Eigen::MatrixXd mu = linkinv(fam, eta);
  switch (fam.kind) {
    case FamilyKind::gaussian:
      break;
    case FamilyKind::binomial:
    case FamilyKind::multinomial:
      mu = mu.array().max(kProbClamp).min(1 - kProbClamp).matrix();
      break;
    case FamilyKind::poisson:
      mu = mu.array().max(kProbClamp).matrix();
      break;
  }
  return mu;
}

// min over (c0, a, b) of sum_i w_i (z_i - c0 - s_i'a - u_i'b)^2 + la||a||^2 + lb||b||^2,
// solved as a stacked least-squares problem; minimum-norm under rank deficiency.
Eigen::VectorXd weighted_ridge(const Eigen::VectorXd& sqrtw, const Eigen::VectorXd& z,
                               const Eigen::MatrixXd& S, const Eigen::MatrixXd& U,
                               double la, double lb) {
  const Eigen::Index n = z.size(), q = S.cols(), p = U.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + q + p, 1 + q + p);
  A.col(0).head(n) = sqrtw;
  if (q) A.block(0, 1, n, q) = S.array().colwise() * sqrtw.array();
  if (p) A.block(0, 1 + q, n, p) = U.array().colwise() * sqrtw.array();
  const double sla = std::sqrt(la), slb = std::sqrt(lb);
  for (Eigen::Index j = 0; j < q; ++j) A(n + j, 1 + j) = sla;
  for (Eigen::Index j = 0; j < p; ++j) A(n + q + j, 1 + q + j) = slb;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + q + p);
  b.head(n) = sqrtw.cwiseProduct(z);
  return A.completeOrthogonalDecomposition().solve(b);
}

double null_deviance_of(const Family& fam, const Response& y) {
  const Eigen::Index n = y.n();
  switch (fam.kind) {
    case FamilyKind::gaussian: {
      double m = y.values.mean();
      return (y.values.array() - m).square().sum();
    }
    case FamilyKind::binomial: {
      double pbar = std::clamp(y.values.mean(), kProbClamp, 1 - kProbClamp);
      Eigen::MatrixXd mu = Eigen::MatrixXd::Constant(n, 1, pbar);
      return deviance(fam, y, mu);
    }
    case FamilyKind::poisson: {
      double m = std::max(y.values.mean(), kProbClamp);
      Eigen::MatrixXd mu = Eigen::MatrixXd::Constant(n, 1, m);
      return deviance(fam, y, mu);
    }
    case FamilyKind::multinomial: {
      Eigen::RowVectorXd prop = y.indicators.colwise().mean();
      prop = prop.array().max(kProbClamp).min(1 - kProbClamp);
      Eigen::MatrixXd mu = prop.replicate(n, 1);
      return deviance(fam, y, mu);
    }
  }
  return 0;
}

int df_of(const Family& fam, Eigen::Index q, Eigen::Index p) {
  const int per_class = static_cast<int>(1 + q + p);
  switch (fam.kind) {
    case FamilyKind::gaussian: return per_class + 1;  // + variance
    case FamilyKind::binomial:
    case FamilyKind::poisson: return per_class;
    case FamilyKind::multinomial: return fam.K * per_class;
  }
  return per_class;
}

Eigen::VectorXd residuals_of(const Family& fam, const Response& y,
                             const Eigen::MatrixXd& mu) {
  Eigen::VectorXd d = deviance_contributions(fam, y, mu);
  Eigen::VectorXd r(d.size());
  if (fam.kind == FamilyKind::gaussian) {
    r = y.values - mu.col(0);
  } else if (fam.kind == FamilyKind::multinomial) {
    r = d.cwiseSqrt();  // no natural sign for a K-class outcome
  } else {
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      double sgn = y.values(i) > mu(i, 0) ? 1.0 : (y.values(i) < mu(i, 0) ? -1.0 : 0.0);
      r(i) = sgn * std::sqrt(d(i));
    }
  }
  return r;
}

FitStats make_stats(const Family& fam, const Response& y, const Eigen::MatrixXd& S,
                    const Eigen::MatrixXd& U, const CoefficientSet& coef,
                    const Eigen::MatrixXd* offset, double la, double lb,
                    int iterations, std::vector<double> trace) {
  FitStats st = stats_at(fam, y, linear_predictor(S, U, coef, offset),
                         df_of(fam, S.cols(), U.cols()));
  st.iterations = iterations;
  st.objective_trace = std::move(trace);
  if (fam.is_classification() && la == 0 && lb == 0) {
    double lo = st.fitted.minCoeff(), hi = st.fitted.maxCoeff();
    if (lo <= 2 * kProbClamp || hi >= 1 - 2 * kProbClamp) {
      st.separation = true;
      st.warnings.push_back("possible separation: fitted probabilities pinned at bounds");
    }
  }
  return st;
}

PenalizedFit fit_gaussian(const Response& y, const Eigen::MatrixXd& S,
                          const Eigen::MatrixXd& U, double la, double lb,
                          const Eigen::MatrixXd* offset) {
  const Eigen::Index n = y.n(), q = S.cols(), p = U.cols();
  Eigen::VectorXd yv = y.values;
  if (offset) yv -= offset->col(0);
  const double ybar = yv.mean();
  Eigen::RowVectorXd smean = q ? Eigen::RowVectorXd(S.colwise().mean())
                               : Eigen::RowVectorXd(0);
  Eigen::RowVectorXd umean = p ? Eigen::RowVectorXd(U.colwise().mean())
                               : Eigen::RowVectorXd(0);

  CoefficientSet coef = CoefficientSet::zeros(q, p, 1);
  if (q + p > 0) {
    // centered ridge: the unpenalized intercept decouples after centering
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + q + p, q + p);
    if (q) A.block(0, 0, n, q) = S.rowwise() - smean;
    if (p) A.block(0, q, n, p) = U.rowwise() - umean;
    const double sla = std::sqrt(la), slb = std::sqrt(lb);
    for (Eigen::Index j = 0; j < q; ++j) A(n + j, j) = sla;
    for (Eigen::Index j = 0; j < p; ++j) A(n + q + j, q + j) = slb;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + q + p);
    b.head(n) = yv.array() - ybar;
    Eigen::VectorXd theta = A.completeOrthogonalDecomposition().solve(b);
    coef.alpha.col(0) = theta.head(q);
    coef.beta.col(0) = theta.tail(p);
  }
  coef.intercept(0) = ybar;
  if (q) coef.intercept(0) -= smean * coef.alpha.col(0);
  if (p) coef.intercept(0) -= umean * coef.beta.col(0);

  PenalizedFit fit;
  fit.coef = coef;
  double obj = 0;
  {
    Eigen::MatrixXd eta = linear_predictor(S, U, coef, offset);
    obj = deviance(Family::gaussian(), y, eta) + la * coef.alpha.squaredNorm() +
          lb * coef.beta.squaredNorm();
  }
  fit.stats = make_stats(Family::gaussian(), y, S, U, coef, offset, la, lb, 1, {obj});
  return fit;
}

CoefficientSet blend(const CoefficientSet& base, const Eigen::VectorXd& prop,
                     Eigen::Index k, double t) {
  const Eigen::Index q = base.q(), p = base.p();
  CoefficientSet c = base;
  c.intercept(k) = (1 - t) * base.intercept(k) + t * prop(0);
  if (q) c.alpha.col(k) = (1 - t) * base.alpha.col(k) + t * prop.segment(1, q);
  if (p) c.beta.col(k) = (1 - t) * base.beta.col(k) + t * prop.segment(1 + q, p);
  return c;
}

void working_response(const Family& fam, const Response& y, const Eigen::MatrixXd& eta,
                      const Eigen::MatrixXd& mu, Eigen::Index k, Eigen::VectorXd& w,
                      Eigen::VectorXd& z) {
  const Eigen::Index n = y.n();
  w.resize(n);
  z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double m = mu(i, k);
    double yi = fam.kind == FamilyKind::multinomial ? y.indicators(i, k) : y.values(i);
    double wi = fam.kind == FamilyKind::poisson ? m : m * (1 - m);
    wi = std::max(wi, kWeightFloor);
    w(i) = wi;
    z(i) = eta(i, k) + (yi - m) / wi;
  }
}

PenalizedFit fit_irls(const Family& fam, const Response& y, const Eigen::MatrixXd& S,
                      const Eigen::MatrixXd& U, double la, double lb,
                      const Eigen::MatrixXd* offset, const CoefficientSet* warm) {
  const Eigen::Index n = y.n(), q = S.cols(), p = U.cols();
  const Eigen::Index K = fam.nclasses();

  CoefficientSet coef = CoefficientSet::zeros(q, p, K);
  if (warm && warm->q() == q && warm->p() == p && warm->nclasses() == K) {
    coef = *warm;
  } else if (!offset) {
    switch (fam.kind) {
      case FamilyKind::binomial: {
        double pbar = std::clamp(y.values.mean(), kProbClamp, 1 - kProbClamp);
        coef.intercept(0) = std::log(pbar / (1 - pbar));
        break;
      }
      case FamilyKind::poisson:
        coef.intercept(0) = std::log(std::max(y.values.mean(), kProbClamp));
        break;
      case FamilyKind::multinomial:
        for (Eigen::Index k = 0; k < K; ++k) {
          double prk = std::max(y.indicators.col(k).mean(), kProbClamp);
          coef.intercept(k) = std::log(prk);
        }
        coef.intercept.array() -= coef.intercept.mean();
        break;
      default:
        break;
    }
  }

  auto objective = [&](const CoefficientSet& c) {
    Eigen::MatrixXd eta = linear_predictor(S, U, c, offset);
    return deviance(fam, y, clamped_mu(fam, eta)) + la * c.alpha.squaredNorm() +
           lb * c.beta.squaredNorm();
  };

  double f = objective(coef);
  std::vector<double> trace{f};
  bool converged = false;
  int iter = 0;
  Eigen::VectorXd w, z;

  for (iter = 1; iter <= kMaxIter; ++iter) {
    const double f_before = f;
    bool any_progress = false;

    for (Eigen::Index k = 0; k < K; ++k) {
      Eigen::MatrixXd eta = linear_predictor(S, U, coef, offset);
      Eigen::MatrixXd mu = clamped_mu(fam, eta);
      working_response(fam, y, eta, mu, k, w, z);
      if (offset) z -= offset->col(k);
      Eigen::VectorXd prop = weighted_ridge(w.cwiseSqrt(), z, S, U, la, lb);

      // safeguard: the Newton step may overshoot, halve until the penalized
      // objective does not increase
      double t = 1.0;
      CoefficientSet cand = blend(coef, prop, k, t);
      double f_new = objective(cand);
      int h = 0;
      while (f_new > f + 1e-12 * (1 + std::abs(f)) && h < kMaxHalvings) {
        t /= 2;
        cand = blend(coef, prop, k, t);
        f_new = objective(cand);
        ++h;
      }
      if (f_new <= f + 1e-12 * (1 + std::abs(f))) {
        if (f - f_new > 1e-15 * (1 + std::abs(f))) any_progress = true;
        coef = cand;
        f = f_new;
      }
    }
    trace.push_back(f);

    const double rel = std::abs(f_before - f) / (0.1 + std::abs(f));
    if (rel < kRelTol || !any_progress) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "IRLS did not converge within " << kMaxIter
        << " iterations; penalized objective trace tail:";
    for (std::size_t i = trace.size() >= 5 ? trace.size() - 5 : 0; i < trace.size(); ++i)
      msg << " " << trace[i];
    throw ConvergenceError(msg.str(), coef, trace);
  }

  if (fam.kind == FamilyKind::multinomial) {
    // softmax is invariant to per-row constant shifts across classes; pick
    // the zero-sum representative (a no-op for penalized rows at the optimum)
    coef.intercept.array() -= coef.intercept.mean();
    for (Eigen::Index j = 0; j < q; ++j) coef.alpha.row(j).array() -= coef.alpha.row(j).mean();
    for (Eigen::Index j = 0; j < p; ++j) coef.beta.row(j).array() -= coef.beta.row(j).mean();
  }

  PenalizedFit fit;
  fit.coef = coef;
  fit.stats = make_stats(fam, y, S, U, coef, offset, la, lb, iter, std::move(trace));
  return fit;
}

}  // namespace

CoefficientSet CoefficientSet::zeros(Eigen::Index q, Eigen::Index p, Eigen::Index K) {
  CoefficientSet c;
  c.intercept = Eigen::VectorXd::Zero(K);
  c.alpha = Eigen::MatrixXd::Zero(q, K);
  c.beta = Eigen::MatrixXd::Zero(p, K);
  return c;
}

Eigen::MatrixXd linear_predictor(const Eigen::MatrixXd& S, const Eigen::MatrixXd& U,
                                 const CoefficientSet& coef, const Eigen::MatrixXd* offset) {
  const Eigen::Index n = S.rows() ? S.rows() : U.rows();
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, coef.nclasses());
  eta.rowwise() += coef.intercept.transpose();
  if (coef.q()) eta.noalias() += S * coef.alpha;
  if (coef.p()) eta.noalias() += U * coef.beta;
  if (offset) eta += *offset;
  return eta;
}

double penalized_objective(const Family& fam, const Response& y, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& U, const CoefficientSet& coef,
                           double lambda_alpha, double lambda_beta,
                           const Eigen::MatrixXd* offset) {
  Eigen::MatrixXd eta = linear_predictor(S, U, coef, offset);
  return deviance(fam, y, clamped_mu(fam, eta)) + lambda_alpha * coef.alpha.squaredNorm() +
         lambda_beta * coef.beta.squaredNorm();
}

PenalizedFit fit_penalized(const Family& fam, const Response& y, const Eigen::MatrixXd& S,
                           const Eigen::MatrixXd& U, double lambda_alpha, double lambda_beta,
                           const Eigen::MatrixXd* offset, const CoefficientSet* warm) {
  const Eigen::Index n = y.n();
  if ((S.cols() && S.rows() != n) || (U.cols() && U.rows() != n))
    throw SchemaError("fit_penalized: design and response row counts disagree");
  if (!(lambda_alpha >= 0) || !(lambda_beta >= 0) || !std::isfinite(lambda_alpha) ||
      !std::isfinite(lambda_beta))
    throw SchemaError("fit_penalized: penalties must be finite and non-negative");
  if (fam.kind == FamilyKind::gaussian)
    return fit_gaussian(y, S, U, lambda_alpha, lambda_beta, offset);
  return fit_irls(fam, y, S, U, lambda_alpha, lambda_beta, offset, warm);
}

double aic(const FitStats& stats) { return -2 * stats.loglik + 2.0 * stats.df; }

double bic(const FitStats& stats, Eigen::Index n) {
  return -2 * stats.loglik + std::log(static_cast<double>(n)) * stats.df;
}

}  // namespace fairfit
