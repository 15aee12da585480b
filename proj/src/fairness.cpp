#include "fairfit/fairness.hpp"

#include <Eigen/QR>
#include <cmath>

#include "fairfit/errors.hpp"

namespace fairfit {

namespace {

double sample_var(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

double ratio_or_zero(double num, double den) {
  if (!(den > 0)) return 0.0;
  return num / den;
}

// pairwise response distance: absolute difference, or 0/1 disagreement for
// factor responses
double pair_weight(const Response& y, Eigen::Index i, Eigen::Index j) {
  if (!y.codes.empty())
    return y.codes[static_cast<std::size_t>(i)] == y.codes[static_cast<std::size_t>(j)] ? 0.0
                                                                                        : 1.0;
  return std::abs(y.values(i) - y.values(j));
}

double pairwise_weighted_sq(const Response& y, const Eigen::MatrixXd& t) {
  const Eigen::Index n = t.rows(), K = t.cols();
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double w = pair_weight(y, i, j);
      for (Eigen::Index k = 0; k < K; ++k) {
        double d = t(i, k) - t(j, k);
        acc += w * d * d;
      }
    }
  }
  return acc;
}

}  // namespace

FairnessRecord sp_komiyama(const FairnessInput& in) {
  FairnessRecord rec;
  double value = 0, s_comp = 0, u_comp = 0;

  if (in.family.kind == FamilyKind::gaussian) {
    double vs = in.coef.q() ? sample_var(in.S * in.coef.alpha.col(0)) : 0.0;
    double vu = in.coef.p() ? sample_var(in.U * in.coef.beta.col(0)) : 0.0;
    value = ratio_or_zero(vs, vs + vu);
    s_comp = value;
    u_comp = vs + vu > 0 ? vu / (vs + vu) : 0.0;
    rec["var_S"] = vs;
    rec["var_U"] = vu;
  } else {
    // deviance-ratio form: share of the explained deviance due to alpha
    const double d_full = in.stats.deviance;
    const double d_null = in.stats.null_deviance;
    Eigen::MatrixXd offset = in.coef.p()
                                 ? Eigen::MatrixXd(in.U * in.coef.beta)
                                 : Eigen::MatrixXd::Zero(in.y.n(), in.coef.nclasses());
    Eigen::MatrixXd none_s(in.y.n(), 0), none_u(in.y.n(), 0);
    PenalizedFit base = fit_penalized(in.family, in.y, none_s, none_u, 0, 0, &offset);
    const double d_beta = base.stats.deviance;
    double num = d_beta - d_full;
    double den = d_null - d_full;
    if (num < 0 && num > -1e-8) num = 0;  // frozen-beta refit can dip below by dust
    value = ratio_or_zero(num, den);
    s_comp = value;
    u_comp = den > 0 ? (d_null - d_beta) / den : 0.0;
    rec["deviance_S"] = num;
    rec["deviance_explained"] = den;
  }

  rec["value"] = value;
  rec["S_component"] = s_comp;
  rec["U_component"] = u_comp;
  return rec;
}

FairnessRecord eo_komiyama(const FairnessInput& in) {
  const Eigen::Index n = in.y.n();
  const Eigen::Index q = in.S.cols();
  const Eigen::Index K = in.family.nclasses();

  // stacked per-class rows for the multinomial pooled regression; a single
  // block for every other family
  Eigen::VectorXd yhat(n * K), yreg(n * K);
  Eigen::MatrixXd S_stack(n * K, q);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (in.family.kind == FamilyKind::gaussian || in.family.kind == FamilyKind::poisson) {
      yhat.segment(k * n, n) = in.stats.fitted.col(k);
      yreg.segment(k * n, n) = in.y.values;
    } else {
      yhat.segment(k * n, n) = in.stats.linear.col(k);
      yreg.segment(k * n, n) = in.y.indicators.col(k);
    }
    S_stack.middleRows(k * n, n) = in.S;
  }

  FairnessRecord rec;
  if (sample_var(yhat) < 1e-24) {
    rec["value"] = rec["S_component"] = rec["U_component"] = 0.0;
    return rec;
  }

  Eigen::MatrixXd Z(n * K, 1 + q + 1);
  Z.col(0).setOnes();
  if (q) Z.middleCols(1, q) = S_stack;
  Z.col(1 + q) = yreg;
  Eigen::VectorXd gamma = Z.completeOrthogonalDecomposition().solve(yhat);

  double vs = q ? sample_var(S_stack * gamma.segment(1, q)) : 0.0;
  double vy = sample_var(yreg * gamma(1 + q));
  double value = ratio_or_zero(vs, vs + vy);
  rec["value"] = value;
  rec["S_component"] = value;
  rec["U_component"] = vs + vy > 0 ? vy / (vs + vy) : 0.0;
  rec["var_S"] = vs;
  rec["var_y"] = vy;
  return rec;
}

FairnessRecord if_berk(const FairnessInput& in) {
  Eigen::MatrixXd t = in.S * in.coef.alpha;
  Eigen::MatrixXd t_ref = in.S * in.ref_coef.alpha;
  double num = pairwise_weighted_sq(in.y, t);
  double den = pairwise_weighted_sq(in.y, t_ref);
  FairnessRecord rec;
  rec["value"] = ratio_or_zero(num, den);
  rec["S_component"] = rec["value"];
  rec["U_component"] = den > 0 ? 1.0 - rec["value"] : 0.0;
  return rec;
}

FairnessRecord max_corr(const FairnessInput& in) {
  double worst = 0;
  for (Eigen::Index c = 0; c < in.stats.fitted.cols(); ++c) {
    Eigen::VectorXd f = in.stats.fitted.col(c);
    double vf = sample_var(f);
    if (!(vf > 0)) continue;
    double fm = f.mean();
    for (Eigen::Index k = 0; k < in.S.cols(); ++k) {
      Eigen::VectorXd s = in.S.col(k);
      double vsk = sample_var(s);
      if (!(vsk > 0)) continue;
      double cov = ((f.array() - fm) * (s.array() - s.mean())).sum() /
                   static_cast<double>(f.size() - 1);
      worst = std::max(worst, std::abs(cov / std::sqrt(vf * vsk)));
    }
  }
  FairnessRecord rec;
  rec["value"] = worst;
  return rec;
}

FairnessDefinition builtin_definition(const std::string& name) {
  if (name == "sp-komiyama") return {name, sp_komiyama, true};
  if (name == "eo-komiyama") return {name, eo_komiyama, true};
  if (name == "if-berk") return {name, if_berk, true};
  if (name == "max-corr") return {name, max_corr, true};
  throw SchemaError("unknown fairness definition '" + name + "'");
}

std::vector<std::string> builtin_definition_names() {
  return {"sp-komiyama", "eo-komiyama", "if-berk", "max-corr"};
}

double evaluate(const FairnessDefinition& def, const FairnessInput& in,
                FairnessRecord* record, std::vector<std::string>* warnings) {
  FairnessRecord rec = def.evaluator(in);
  auto it = rec.find("value");
  if (it == rec.end())
    throw ContractError("fairness definition '" + def.name + "' returned no \"value\"");
  double v = it->second;
  if (!std::isfinite(v))
    throw ContractError("fairness definition '" + def.name + "' returned a non-finite value");
  if (v < 0 || v > 1) {
    if (v > -1e-8 && v < 1 + 1e-8) {
      if (warnings)
        warnings->push_back("fairness value " + std::to_string(v) + " from '" + def.name +
                            "' clamped into [0, 1]");
      v = std::clamp(v, 0.0, 1.0);
    } else {
      throw ContractError("fairness definition '" + def.name + "' returned " +
                          std::to_string(v) + ", outside [0, 1]");
    }
  }
  if (record) {
    if (def.builtin) {
      *record = rec;
      (*record)["value"] = v;
    } else {
      *record = {{"value", v}};
    }
  }
  return v;
}

}  // namespace fairfit
