#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pcglasso/objective.hpp"
#include "pcglasso/prox.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

/// Douglas-Rachford iterate triple. After any completed step, y is positive
/// definite and z has an exact unit diagonal.
struct DrsState {
  SymMatrix x, y, z;
};

struct DrsConfig {
  double alpha = 1.0;
  double lambda = 1.0;
  double t_dr = 1e-8;
  int max_iter = 10000;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("DrsConfig: alpha must be positive");
    if (!(lambda > 0.0 && lambda < 2.0))
      throw std::invalid_argument("DrsConfig: lambda must lie in (0, 2)");
    if (!(t_dr > 0.0)) throw std::invalid_argument("DrsConfig: t_dr must be positive");
    if (max_iter < 1) throw std::invalid_argument("DrsConfig: max_iter must be at least 1");
  }
};

/// One Douglas-Rachford step for the unit-diagonal problem:
///   x+ = x + lambda (z - y)
///   y+ = prox_logdet(x+, alpha)
///   z+ = prox_l1_unitdiag(2 y+ - x+, s_tilde, alpha, rho)
inline DrsState drs_step(const DrsState& s, const SymMatrix& s_tilde, double rho,
                         const DrsConfig& cfg) {
  cfg.validate();
  if (rho < 0.0) throw std::invalid_argument("drs_step: rho must be non-negative");
  if (s.x.dim() != s_tilde.dim() || s.y.dim() != s_tilde.dim() || s.z.dim() != s_tilde.dim())
    throw std::invalid_argument("drs_step: dimension mismatch");
  SymMatrix x_new =
      SymMatrix::from_lower(s.x.mat() + cfg.lambda * (s.z.mat() - s.y.mat()));
  SymMatrix y_new = prox_logdet(x_new, cfg.alpha);
  SymMatrix z_new = prox_l1_unitdiag(
      SymMatrix::from_lower(2.0 * y_new.mat() - x_new.mat()), s_tilde, cfg.alpha, rho);
  return {std::move(x_new), std::move(y_new), std::move(z_new)};
}

/// Relative off-diagonal l1 change between successive z iterates, with a
/// 1e-8 floor on the denominator. Sums run over ordered pairs i != j.
inline double drs_stopping_metric(const SymMatrix& z_new, const SymMatrix& z_old) {
  if (z_new.dim() != z_old.dim())
    throw std::invalid_argument("drs_stopping_metric: dimension mismatch");
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < z_new.dim(); ++j)
    for (Eigen::Index i = j + 1; i < z_new.dim(); ++i) {
      num += std::abs(z_new(i, j) - z_old(i, j));
      den += std::abs(z_old(i, j));
    }
  return 2.0 * num / std::max(2.0 * den, 1e-8);
}

struct DrsResult {
  SymMatrix delta;
  DrsState state;
  int iters = 0;
  bool truncated = false;
};

namespace detail {

// Objective of the Delta subproblem at a unit-diagonal candidate:
// -log det z + tr(s_tilde z) + rho * sum_{i != j} |z_ij|; +inf if z is not
// numerically positive definite.
inline double delta_objective(const SymMatrix& s_tilde, double rho, const SymMatrix& z) {
  double ld;
  if (!cholesky_log_det(z.mat(), ld)) return std::numeric_limits<double>::infinity();
  return -ld + s_tilde.mat().cwiseProduct(z.mat()).sum() + rho * offdiag_abs_sum(z);
}

}  // namespace detail

/// Runs DRS from the given state until the z change drops below cfg.t_dr
/// and the candidate is positive definite with an objective no worse than
/// the best recorded (1e-12 slack). On max_iter truncation the
/// lowest-objective recorded iterate is returned instead of the last.
inline DrsResult drs_solve(const SymMatrix& s_tilde, double rho, DrsState state,
                           const DrsConfig& cfg) {
  cfg.validate();
  if (rho < 0.0) throw std::invalid_argument("drs_solve: rho must be non-negative");
  double best_obj = detail::delta_objective(s_tilde, rho, state.z);
  SymMatrix best_z = state.z;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    SymMatrix z_prev = state.z;
    state = drs_step(state, s_tilde, rho, cfg);
    double metric = drs_stopping_metric(state.z, z_prev);
    double obj = detail::delta_objective(s_tilde, rho, state.z);
    if (obj < best_obj) {
      best_obj = obj;
      best_z = state.z;
    }
    if (metric < cfg.t_dr && obj <= best_obj + 1e-12 && is_positive_definite(state.z))
      return {state.z, std::move(state), iter, false};
  }
  return {std::move(best_z), std::move(state), cfg.max_iter, true};
}

struct GlassoResult {
  SymMatrix theta;
  int iters = 0;
  bool truncated = false;
};

namespace detail {

// Second prox of the glasso variant: no unit-diagonal constraint, shrink
// over every entry including the diagonal.
inline SymMatrix prox_l1_full(const SymMatrix& m, const SymMatrix& s, double alpha,
                              double rho) {
  Eigen::Index p = m.dim();
  Eigen::MatrixXd out(p, p);
  double thr = alpha * rho;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j; i < p; ++i)
      out(i, j) = shrink(m(i, j) - alpha * s(i, j), thr);
  return SymMatrix::from_lower(std::move(out));
}

// All-entry analogue of drs_stopping_metric: the diagonal is free in the
// glasso variant, so its movement counts.
inline double full_stopping_metric(const SymMatrix& z_new, const SymMatrix& z_old) {
  double num = (z_new.mat() - z_old.mat()).array().abs().sum();
  double den = z_old.mat().array().abs().sum();
  return num / std::max(den, 1e-8);
}

}  // namespace detail

/// Graphical-lasso baseline: the same Douglas-Rachford scheme with the
/// second prox shrinking every entry (diagonal included). Starts from the
/// inverse of S (shifted to be positive definite if necessary).
inline GlassoResult glasso_drs_solve(const SymMatrix& s, double rho, const DrsConfig& cfg) {
  cfg.validate();
  if (rho < 0.0) throw std::invalid_argument("glasso_drs_solve: rho must be non-negative");
  SymMatrix theta0 = pd_or_shifted_inverse(s);
  DrsState state{theta0, theta0, theta0};
  double best_obj = objective_glasso(s, state.z, rho);
  SymMatrix best_z = state.z;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    SymMatrix z_prev = state.z;
    SymMatrix x_new =
        SymMatrix::from_lower(state.x.mat() + cfg.lambda * (state.z.mat() - state.y.mat()));
    SymMatrix y_new = prox_logdet(x_new, cfg.alpha);
    SymMatrix z_new = detail::prox_l1_full(
        SymMatrix::from_lower(2.0 * y_new.mat() - x_new.mat()), s, cfg.alpha, rho);
    state = {std::move(x_new), std::move(y_new), std::move(z_new)};
    double metric = detail::full_stopping_metric(state.z, z_prev);
    double obj = objective_glasso(s, state.z, rho);
    if (obj < best_obj) {
      best_obj = obj;
      best_z = state.z;
    }
    if (metric < cfg.t_dr && obj <= best_obj + 1e-12 && is_positive_definite(state.z))
      return {state.z, iter, false};
  }
  return {std::move(best_z), cfg.max_iter, true};
}

}  // namespace pcglasso
