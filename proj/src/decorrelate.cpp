#include "fairfit/decorrelate.hpp"

#include <Eigen/QR>

#include "fairfit/errors.hpp"

namespace fairfit {

void decorrelate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                 const std::vector<std::string>& sensitive_names,
                 const std::vector<std::string>& predictor_names,
                 Eigen::MatrixXd& U, AuxiliaryModel& aux) {
  const Eigen::Index n = X.rows(), q = S.cols();
  if (S.rows() != n)
    throw SchemaError("decorrelate: X and S row counts disagree");
  if (n <= q + 1)
    throw SchemaError("decorrelate: need n > q + 1 observations");

  Eigen::MatrixXd Z(n, q + 1);
  Z.col(0).setOnes();
  Z.rightCols(q) = S;

  // minimum-norm solution keeps this total under rank deficiency
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Z);
  aux.B = cod.solve(X);
  aux.sensitive_names = sensitive_names;
  aux.predictor_names = predictor_names;
  U = X - Z * aux.B;
}

Eigen::MatrixXd apply_aux(const AuxiliaryModel& aux, const Eigen::MatrixXd& S_new,
                          const Eigen::MatrixXd& X_new,
                          const std::vector<std::string>& sensitive_names,
                          const std::vector<std::string>& predictor_names) {
  if (sensitive_names != aux.sensitive_names)
    throw SchemaError("apply_aux: sensitive columns do not match the training schema");
  if (predictor_names != aux.predictor_names)
    throw SchemaError("apply_aux: predictor columns do not match the training schema");
  if (S_new.cols() + 1 != aux.B.rows() || X_new.cols() != aux.B.cols())
    throw SchemaError("apply_aux: design dimensions do not match the auxiliary model");
  if (S_new.rows() != X_new.rows())
    throw SchemaError("apply_aux: X and S row counts disagree");

  Eigen::MatrixXd Z(S_new.rows(), S_new.cols() + 1);
  Z.col(0).setOnes();
  Z.rightCols(S_new.cols()) = S_new;
  return X_new - Z * aux.B;
}

}  // namespace fairfit
