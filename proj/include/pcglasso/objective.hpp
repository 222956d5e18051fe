#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

/// log det of a numerically positive definite matrix via Cholesky.
/// Returns false when the factorization hits a non-positive pivot.
inline bool cholesky_log_det(const Eigen::MatrixXd& m, double& out) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  out = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return std::isfinite(out);
}

/// Sum of |m_ij| over ordered pairs i != j (each unordered pair counts twice).
inline double offdiag_abs_sum(const SymMatrix& m) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.dim(); ++j)
    for (Eigen::Index i = j + 1; i < m.dim(); ++i) s += std::abs(m(i, j));
  return 2.0 * s;
}

/// Penalised negative log-likelihood in the partial-correlation
/// parameterisation:
///   -log det Delta - 2c sum_i log xi_i + xi' (S o Delta) xi
///   + rho sum_{i != j} |Delta_ij|.
/// Returns +infinity when Delta is not positive definite.
inline double objective_pcglasso(const SymMatrix& s, const SymMatrix& delta,
                                 const DiagScale& xi, double rho, double c) {
  if (s.dim() != delta.dim() || s.dim() != xi.dim())
    throw std::invalid_argument("objective_pcglasso: dimension mismatch");
  if (rho < 0.0) throw std::invalid_argument("objective_pcglasso: rho must be non-negative");
  if (!(c > 0.0)) throw std::invalid_argument("objective_pcglasso: c must be positive");
  double ld;
  if (!cholesky_log_det(delta.mat(), ld))
    return std::numeric_limits<double>::infinity();
  Eigen::MatrixXd w = s.mat().cwiseProduct(delta.mat());
  double quad = xi.values().dot(w * xi.values());
  double barrier = -2.0 * c * xi.values().array().log().sum();
  return -ld + barrier + quad + rho * offdiag_abs_sum(delta);
}

/// Graphical lasso objective, penalty over every entry including the
/// diagonal:  -log det Theta + tr(S Theta) + rho sum_{i,j} |Theta_ij|.
/// Returns +infinity when Theta is not positive definite.
inline double objective_glasso(const SymMatrix& s, const SymMatrix& theta, double rho) {
  if (s.dim() != theta.dim())
    throw std::invalid_argument("objective_glasso: dimension mismatch");
  if (rho < 0.0) throw std::invalid_argument("objective_glasso: rho must be non-negative");
  double ld;
  if (!cholesky_log_det(theta.mat(), ld))
    return std::numeric_limits<double>::infinity();
  double tr = s.mat().cwiseProduct(theta.mat()).sum();
  return -ld + tr + rho * theta.mat().array().abs().sum();
}

}  // namespace pcglasso
