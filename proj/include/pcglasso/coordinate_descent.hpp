#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pcglasso/objective.hpp"
#include "pcglasso/solver.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

struct CdConfig {
  double t = 1e-4;
  int max_sweeps = 5000;
  double scalar_tol = 1e-10;

  void validate() const {
    if (!(t > 0.0)) throw std::invalid_argument("CdConfig: t must be positive");
    if (max_sweeps < 1) throw std::invalid_argument("CdConfig: max_sweeps must be at least 1");
    if (!(scalar_tol > 0.0))
      throw std::invalid_argument("CdConfig: scalar_tol must be positive");
  }
};

/// Working state of the coordinate sweep: Delta, a maintained copy of its
/// inverse (rank-2 updated per coordinate, refreshed each sweep), and xi.
struct CdState {
  Eigen::MatrixXd delta;
  Eigen::MatrixXd delta_inv;
  Eigen::VectorXd xi;
};

/// Positive root of A t^2 + B t - c = 0; the exact minimiser of
/// A t^2 + 2 B t - 2c log t over t > 0.
inline double cd_xi_root(double a, double b, double c) {
  if (!(a > 0.0)) throw std::domain_error("cd_xi_root: quadratic coefficient must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("cd_xi_root: c must be positive");
  return (-b + std::sqrt(b * b + 4.0 * a * c)) / (2.0 * a);
}

namespace detail {

// Golden-section minimisation of a unimodal function on [lo, hi].
template <typename F>
double golden_section(F&& f, double lo, double hi, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

inline void cd_refresh_inverse(CdState& st) {
  Eigen::LLT<Eigen::MatrixXd> llt(st.delta);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("coordinate descent: working Delta lost positive definiteness");
  Eigen::Index p = st.delta.rows();
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j + 1; i < p; ++i) inv(j, i) = inv(i, j);
  st.delta_inv = std::move(inv);
}

// (Delta + c u u')^-1 via Sherman-Morrison, in place.
inline bool sm_rank1(Eigen::MatrixXd& inv, const Eigen::VectorXd& u, double c) {
  Eigen::VectorXd iu = inv * u;
  double den = 1.0 + c * u.dot(iu);
  if (!(std::abs(den) > 1e-14)) return false;
  inv.noalias() -= (c / den) * (iu * iu.transpose());
  return true;
}

}  // namespace detail

/// Minimises the objective over the single coordinate pair (i, j), i != j.
/// The positive-definite interval for Delta_ij comes from the 2x2 block of
/// the maintained inverse; the minimiser is found by golden section with the
/// l1 kink (Delta_ij = 0) and the current point evaluated explicitly, so the
/// objective never increases. Returns the new Delta_ij.
inline double cd_update_offdiag(CdState& st, const SymMatrix& s, double rho,
                                Eigen::Index i, Eigen::Index j, double scalar_tol) {
  if (i == j) throw std::invalid_argument("cd_update_offdiag: need an off-diagonal pair");
  const Eigen::MatrixXd& inv = st.delta_inv;
  double b = inv(i, j);
  double q = inv(i, i) * inv(j, j) - b * b;
  if (!(q > 0.0)) {
    detail::cd_refresh_inverse(st);
    b = st.delta_inv(i, j);
    q = st.delta_inv(i, i) * st.delta_inv(j, j) - b * b;
    if (!(q > 0.0))
      throw std::runtime_error("cd_update_offdiag: inverse lost positive definiteness");
  }
  double r = std::sqrt(b * b + q);
  double width = 2.0 * r / q;
  double s_lo = (b - r) / q + 1e-9 * width;
  double s_hi = (b + r) / q - 1e-9 * width;

  double delta0 = st.delta(i, j);
  double w_tr = s(i, j) * st.xi(i) * st.xi(j);
  auto phi = [&](double step) {
    double det_factor = (2.0 * b - q * step) * step;
    if (det_factor <= -1.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(det_factor) + 2.0 * w_tr * step + 2.0 * rho * std::abs(delta0 + step);
  };

  double best = detail::golden_section(phi, s_lo, s_hi, scalar_tol * std::max(1.0, width));
  double best_val = phi(best);
  double kink = -delta0;
  if (kink > s_lo && kink < s_hi && phi(kink) <= best_val) {
    best = kink;
    best_val = phi(kink);
  }
  if (phi(0.0) <= best_val) best = 0.0;

  if (best != 0.0) {
    double step = best;
    st.delta(i, j) = delta0 + step;
    st.delta(j, i) = delta0 + step;
    Eigen::Index p = st.delta.rows();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p), v = Eigen::VectorXd::Zero(p);
    u(i) = 1.0;
    u(j) = 1.0;
    v(i) = 1.0;
    v(j) = -1.0;
    if (!detail::sm_rank1(st.delta_inv, u, 0.5 * step) ||
        !detail::sm_rank1(st.delta_inv, v, -0.5 * step))
      detail::cd_refresh_inverse(st);
  }
  return st.delta(i, j);
}

/// Exact minimisation over xi_i with everything else fixed:
/// the positive root of S_ii t^2 + (sum_{j != i} S_ij Delta_ij xi_j) t - c = 0.
inline double cd_update_xi(CdState& st, const SymMatrix& s, double c, Eigen::Index i) {
  double a = s(i, i);
  if (!(a > 0.0))
    throw std::domain_error("cd_update_xi: S has a non-positive diagonal entry");
  double bcoef = 0.0;
  for (Eigen::Index j = 0; j < st.delta.rows(); ++j)
    if (j != i) bcoef += s(i, j) * st.delta(i, j) * st.xi(j);
  st.xi(i) = cd_xi_root(a, bcoef, c);
  return st.xi(i);
}

namespace detail {

inline PcglassoSolution cd_solve_impl(const SymMatrix& s, double rho, double c,
                                      const CdConfig& cfg, std::optional<Deadline> deadline) {
  cfg.validate();
  if (rho < 0.0) throw std::invalid_argument("cd_solve: rho must be non-negative");
  if (!(c > 0.0)) throw std::invalid_argument("cd_solve: c must be positive");
  bool existence_warning = existence_flag(s, c);

  InitPoint start = init_point(s);
  Eigen::Index p = s.dim();
  CdState st{start.delta0.mat(), Eigen::MatrixXd(), start.xi0.values()};
  cd_refresh_inverse(st);

  auto t0 = std::chrono::steady_clock::now();
  SolverTrace trace;
  bool converged = false;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    SymMatrix delta_prev = SymMatrix::from_lower(st.delta);
    DiagScale xi_prev{st.xi};
    cd_refresh_inverse(st);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = j + 1; i < p; ++i)
        cd_update_offdiag(st, s, rho, i, j, cfg.scalar_tol);
    for (Eigen::Index i = 0; i < p; ++i) cd_update_xi(st, s, c, i);

    SymMatrix delta_now = SymMatrix::from_lower(st.delta);
    DiagScale xi_now{st.xi};
    double metric = outer_stop_metric(delta_now, delta_prev, xi_now, xi_prev);
    double obj = objective_pcglasso(s, delta_now, xi_now, rho, c);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace.push_back({sweep, obj, metric, elapsed, 0, 0});
    if (metric < cfg.t) {
      converged = true;
      break;
    }
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
  }

  SymMatrix delta = SymMatrix::from_lower(st.delta);
  DiagScale xi{st.xi};
  SymMatrix theta = scale_sym(delta, xi);
  return {std::move(theta), std::move(delta), std::move(xi), std::move(trace),
          converged, existence_warning};
}

}  // namespace detail

/// Cyclic coordinate descent reference solver: each off-diagonal Delta_ij is
/// minimised by a bracketed 1-D search on its positive-definite interval,
/// each xi_i in closed form. Slow but simple; used to validate the
/// alternating solver.
inline PcglassoSolution cd_solve(const SymMatrix& s, double rho, double c,
                                 const CdConfig& cfg) {
  return detail::cd_solve_impl(s, rho, c, cfg, std::nullopt);
}

struct ConvergenceComparison {
  SolverTrace alternating;
  SolverTrace cd;
};

/// Runs the alternating solver and the coordinate-descent reference on the
/// same problem, each under the same wall-clock budget (seconds), and
/// returns their traces for objective-vs-time comparison.
inline ConvergenceComparison compare_convergence(const SymMatrix& s, double rho, double c,
                                                 double t, double time_budget_s) {
  if (time_budget_s < 0.0)
    throw std::invalid_argument("compare_convergence: time budget must be non-negative");
  SolverConfig scfg;
  scfg.rho = rho;
  scfg.c = c;
  scfg.t = t;
  auto d1 = std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(time_budget_s));
  PcglassoSolution alt = detail::solve_impl(s, scfg, std::nullopt, d1).solution;
  CdConfig ccfg;
  ccfg.t = t;
  ccfg.max_sweeps = 1000000;  // the wall budget is the binding limit here
  auto d2 = std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(time_budget_s));
  PcglassoSolution cd = detail::cd_solve_impl(s, rho, c, ccfg, d2);
  return {std::move(alt.trace), std::move(cd.trace)};
}

}  // namespace pcglasso
