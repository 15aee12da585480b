#include "fairfit/family.hpp"

#include <cmath>

#include "fairfit/errors.hpp"

namespace fairfit {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gaussian: return "gaussian";
    case FamilyKind::binomial: return "binomial";
    case FamilyKind::poisson: return "poisson";
    case FamilyKind::multinomial: return "multinomial";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& name) {
  if (name == "gaussian") return FamilyKind::gaussian;
  if (name == "binomial") return FamilyKind::binomial;
  if (name == "poisson") return FamilyKind::poisson;
  if (name == "multinomial") return FamilyKind::multinomial;
  throw SchemaError("unknown family '" + name + "'");
}

Response Response::subset(const std::vector<std::size_t>& rows) const {
  Response out;
  out.levels = levels;
  out.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.values(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(rows[i]));
  if (indicators.size()) {
    out.indicators.resize(static_cast<Eigen::Index>(rows.size()), indicators.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
      out.indicators.row(static_cast<Eigen::Index>(i)) =
          indicators.row(static_cast<Eigen::Index>(rows[i]));
  }
  if (!codes.empty()) {
    out.codes.reserve(rows.size());
    for (auto r : rows) out.codes.push_back(codes.at(r));
  }
  return out;
}

Response make_response(const Column& col, const Family& fam) {
  Response r;
  switch (fam.kind) {
    case FamilyKind::gaussian:
    case FamilyKind::poisson: {
      if (col.spec.kind != VarKind::numeric)
        throw SchemaError("family " + to_string(fam.kind) +
                          " needs a numeric response, got factor '" + col.spec.name + "'");
      r.values = Eigen::Map<const Eigen::VectorXd>(col.numeric.data(),
                                                   static_cast<Eigen::Index>(col.numeric.size()));
      if (fam.kind == FamilyKind::poisson)
        for (double v : col.numeric)
          if (v < 0 || std::abs(v - std::round(v)) > 1e-8)
            throw SchemaError("poisson response must be non-negative integers, got " +
                              std::to_string(v));
      return r;
    }
    case FamilyKind::binomial: {
      if (col.spec.kind != VarKind::factor || col.spec.levels.size() != 2)
        throw SchemaError("binomial response '" + col.spec.name +
                          "' must be a 2-level factor");
      const auto n = static_cast<Eigen::Index>(col.codes.size());
      r.values.resize(n);
      r.indicators.setZero(n, 2);
      r.codes = col.codes;
      r.levels = col.spec.levels;
      for (Eigen::Index i = 0; i < n; ++i) {
        r.values(i) = col.codes[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
        r.indicators(i, col.codes[static_cast<std::size_t>(i)]) = 1.0;
      }
      return r;
    }
    case FamilyKind::multinomial: {
      if (col.spec.kind != VarKind::factor)
        throw SchemaError("multinomial response '" + col.spec.name + "' must be a factor");
      const int K = static_cast<int>(col.spec.levels.size());
      if (K < 2)
        throw SchemaError("multinomial response needs at least 2 observed levels");
      if (fam.K != K)
        throw SchemaError("multinomial K=" + std::to_string(fam.K) +
                          " does not match the " + std::to_string(K) +
                          " observed response levels");
      const auto n = static_cast<Eigen::Index>(col.codes.size());
      r.values.setZero(n);  // unused for multinomial
      r.indicators.setZero(n, K);
      r.codes = col.codes;
      r.levels = col.spec.levels;
      for (Eigen::Index i = 0; i < n; ++i)
        r.indicators(i, col.codes[static_cast<std::size_t>(i)]) = 1.0;
      return r;
    }
  }
  throw SchemaError("unhandled family");
}

Response numeric_response(const Eigen::VectorXd& y) {
  Response r;
  r.values = y;
  return r;
}

namespace {

void check_mu(const Family& fam, const Eigen::MatrixXd& mu) {
  switch (fam.kind) {
    case FamilyKind::gaussian:
      if (!mu.allFinite()) throw NumericError("gaussian fitted means must be finite");
      break;
    case FamilyKind::binomial:
    case FamilyKind::multinomial:
      if ((mu.array() <= 0).any() || (mu.array() >= 1).any())
        throw NumericError("fitted probabilities must lie in (0, 1)");
      break;
    case FamilyKind::poisson:
      if ((mu.array() <= 0).any())
        throw NumericError("poisson fitted means must be positive");
      break;
  }
}

}  // namespace

Eigen::VectorXd deviance_contributions(const Family& fam, const Response& y,
                                       const Eigen::MatrixXd& mu) {
  check_mu(fam, mu);
  const Eigen::Index n = y.n();
  Eigen::VectorXd d(n);
  switch (fam.kind) {
    case FamilyKind::gaussian:
      for (Eigen::Index i = 0; i < n; ++i) {
        double e = y.values(i) - mu(i, 0);
        d(i) = e * e;
      }
      break;
    case FamilyKind::binomial:
      for (Eigen::Index i = 0; i < n; ++i) {
        double yi = y.values(i), m = mu(i, 0);
        double t = yi > 0 ? yi * std::log(yi / m) : 0.0;
        if (yi < 1) t += (1 - yi) * std::log((1 - yi) / (1 - m));
        d(i) = 2 * t;
      }
      break;
    case FamilyKind::poisson:
      for (Eigen::Index i = 0; i < n; ++i) {
        double yi = y.values(i), m = mu(i, 0);
        double t = yi > 0 ? yi * std::log(yi / m) : 0.0;
        d(i) = 2 * (t - (yi - m));
      }
      break;
    case FamilyKind::multinomial:
      for (Eigen::Index i = 0; i < n; ++i)
        d(i) = 2 * std::log(1.0 / mu(i, y.codes[static_cast<std::size_t>(i)]));
      break;
  }
  return d;
}

double deviance(const Family& fam, const Response& y, const Eigen::MatrixXd& mu) {
  return deviance_contributions(fam, y, mu).sum();
}

double loglik_at(const Family& fam, const Response& y, const Eigen::MatrixXd& mu) {
  check_mu(fam, mu);
  const Eigen::Index n = y.n();
  double ll = 0;
  switch (fam.kind) {
    case FamilyKind::gaussian: {
      // profile likelihood with the MLE variance, floored for perfect fits
      double rss = (y.values - mu.col(0)).squaredNorm();
      double s2 = std::max(rss / static_cast<double>(n), 1e-12);
      ll = -0.5 * static_cast<double>(n) *
           (std::log(2 * M_PI * s2) + rss / (s2 * static_cast<double>(n)));
      break;
    }
    case FamilyKind::binomial:
      for (Eigen::Index i = 0; i < n; ++i)
        ll += y.values(i) * std::log(mu(i, 0)) + (1 - y.values(i)) * std::log(1 - mu(i, 0));
      break;
    case FamilyKind::poisson:
      for (Eigen::Index i = 0; i < n; ++i)
        ll += y.values(i) * std::log(mu(i, 0)) - mu(i, 0) - std::lgamma(y.values(i) + 1);
      break;
    case FamilyKind::multinomial:
      for (Eigen::Index i = 0; i < n; ++i)
        ll += std::log(mu(i, y.codes[static_cast<std::size_t>(i)]));
      break;
  }
  return ll;
}

Eigen::MatrixXd linkinv(const Family& fam, const Eigen::MatrixXd& eta) {
  switch (fam.kind) {
    case FamilyKind::gaussian:
      return eta;
    case FamilyKind::binomial:
      return (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    case FamilyKind::poisson:
      return eta.array().exp().matrix();
    case FamilyKind::multinomial: {
      Eigen::MatrixXd p(eta.rows(), eta.cols());
      for (Eigen::Index i = 0; i < eta.rows(); ++i) {
        Eigen::ArrayXd row = eta.row(i).array() - eta.row(i).maxCoeff();
        Eigen::ArrayXd ex = row.exp();
        p.row(i) = (ex / ex.sum()).matrix().transpose();
      }
      return p;
    }
  }
  throw NumericError("unhandled family");
}

}  // namespace fairfit
