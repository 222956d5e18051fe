#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pcglasso/prox.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

struct FbsConfig {
  double t_fb = 1e-8;
  int max_iter = 10000;
  double gamma_safety = 0.9;

  void validate() const {
    if (!(t_fb > 0.0)) throw std::invalid_argument("FbsConfig: t_fb must be positive");
    if (max_iter < 1) throw std::invalid_argument("FbsConfig: max_iter must be at least 1");
    if (!(gamma_safety > 0.0 && gamma_safety < 1.0))
      throw std::invalid_argument("FbsConfig: gamma_safety must lie in (0, 1)");
  }
};

/// Gradient of xi' (S o Delta) xi:  grad_i = 2 sum_j S_ij Delta_ij xi_j.
/// Takes a raw vector so boundary points (zeros) can be probed.
inline Eigen::VectorXd grad_trace(const SymMatrix& s, const SymMatrix& delta,
                                  const Eigen::VectorXd& xi) {
  if (s.dim() != delta.dim() || s.dim() != xi.size())
    throw std::invalid_argument("grad_trace: dimension mismatch");
  return 2.0 * (s.mat().cwiseProduct(delta.mat()) * xi);
}

/// Step size safety / sigma_max(S o Delta). The Hadamard product of a PSD
/// S with a PD Delta is PSD, so sigma_max > 0 for any nonzero product; if a
/// non-PSD input drives the largest eigenvalue to zero or below, the largest
/// absolute eigenvalue is used instead, and an all-zero product is rejected.
inline double fbs_gamma(const SymMatrix& s, const SymMatrix& delta, double safety) {
  if (!(safety > 0.0 && safety < 1.0))
    throw std::invalid_argument("fbs_gamma: safety must lie in (0, 1)");
  SpectralDecomposition es = sym_eigen(hadamard(s, delta));
  double hi = es.eigenvalues(es.eigenvalues.size() - 1);
  if (hi > 0.0) return safety / hi;
  double mag = std::max(std::abs(es.eigenvalues(0)), std::abs(hi));
  if (mag == 0.0)
    throw std::domain_error("fbs_gamma: S o Delta is the zero matrix; no usable curvature");
  return safety / mag;
}

/// One forward-backward step: gradient descent on the trace term followed by
/// the log-barrier prox.
inline DiagScale fbs_step(const DiagScale& xi, const SymMatrix& s, const SymMatrix& delta,
                          double c, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("fbs_step: gamma must be positive");
  Eigen::VectorXd forward = xi.values() - gamma * grad_trace(s, delta, xi.values());
  return prox_neglog_vec(forward, c, gamma);
}

struct FbsResult {
  DiagScale xi;
  int iters = 0;
  bool truncated = false;
};

namespace detail {

inline double xi_objective(const SymMatrix& s, const SymMatrix& delta, double c,
                           const Eigen::VectorXd& xi) {
  double quad = xi.dot(s.mat().cwiseProduct(delta.mat()) * xi);
  return quad - 2.0 * c * xi.array().log().sum();
}

}  // namespace detail

/// Runs forward-backward splitting from xi0 with a fixed step from
/// fbs_gamma, until the relative l1 change drops below cfg.t_fb and the
/// objective is no worse than the best recorded (1e-12 slack).
inline FbsResult fbs_solve(const SymMatrix& s, const SymMatrix& delta, double c,
                           DiagScale xi, const FbsConfig& cfg) {
  cfg.validate();
  if (!(c > 0.0)) throw std::invalid_argument("fbs_solve: c must be positive");
  if (s.dim() != delta.dim() || s.dim() != xi.dim())
    throw std::invalid_argument("fbs_solve: dimension mismatch");
  double gamma = fbs_gamma(s, delta, cfg.gamma_safety);
  double best_obj = detail::xi_objective(s, delta, c, xi.values());
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    DiagScale xi_new = fbs_step(xi, s, delta, c, gamma);
    double metric = (xi_new.values() - xi.values()).array().abs().sum() /
                    xi.values().array().abs().sum();
    double obj = detail::xi_objective(s, delta, c, xi_new.values());
    if (obj < best_obj) best_obj = obj;
    xi = std::move(xi_new);
    if (metric < cfg.t_fb && obj <= best_obj + 1e-12) return {std::move(xi), iter, false};
  }
  return {std::move(xi), cfg.max_iter, true};
}

}  // namespace pcglasso
