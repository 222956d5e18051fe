#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

/// Proximal operator of -alpha * log det at a symmetric (possibly
/// indefinite) matrix: maps each eigenvalue sigma to
///   (sigma + sqrt(sigma^2 + 4 alpha)) / 2,
/// keeping the eigenvectors. The result is always positive definite.
inline SymMatrix prox_logdet(const SymMatrix& m, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_logdet: alpha must be positive");
  SpectralDecomposition es = sym_eigen(m);
  Eigen::VectorXd mapped(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    double s = es.eigenvalues(i);
    mapped(i) = 0.5 * (s + std::sqrt(s * s + 4.0 * alpha));
  }
  return SymMatrix::from_lower(es.eigenvectors * mapped.asDiagonal() *
                               es.eigenvectors.transpose());
}

/// Proximal operator of the penalised trace term under the unit-diagonal
/// constraint: diagonal pinned to exactly 1, off-diagonals
///   shrink(m_ij - alpha * s_tilde_ij, alpha * rho).
inline SymMatrix prox_l1_unitdiag(const SymMatrix& m, const SymMatrix& s_tilde,
                                  double alpha, double rho) {
  if (m.dim() != s_tilde.dim())
    throw std::invalid_argument("prox_l1_unitdiag: dimension mismatch");
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_l1_unitdiag: alpha must be positive");
  if (rho < 0.0) throw std::invalid_argument("prox_l1_unitdiag: rho must be non-negative");
  Eigen::Index p = m.dim();
  Eigen::MatrixXd out(p, p);
  double thr = alpha * rho;
  for (Eigen::Index j = 0; j < p; ++j) {
    out(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < p; ++i)
      out(i, j) = shrink(m(i, j) - alpha * s_tilde(i, j), thr);
  }
  return SymMatrix::from_lower(std::move(out));
}

/// Entrywise proximal operator of -2c * sum_i log xi_i:
///   (v_i + sqrt(v_i^2 + 8 c gamma)) / 2.
/// Output entries are strictly positive for any real input.
inline DiagScale prox_neglog_vec(const Eigen::VectorXd& v, double c, double gamma) {
  if (v.size() == 0) throw std::invalid_argument("prox_neglog_vec: empty vector");
  if (!(c > 0.0)) throw std::invalid_argument("prox_neglog_vec: c must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_neglog_vec: gamma must be positive");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = 0.5 * (v(i) + std::sqrt(v(i) * v(i) + 8.0 * c * gamma));
  return DiagScale(std::move(out));
}

}  // namespace pcglasso
