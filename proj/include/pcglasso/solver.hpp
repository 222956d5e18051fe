#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcglasso/drs.hpp"
#include "pcglasso/fbs.hpp"
#include "pcglasso/objective.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

struct SolverConfig {
  double rho = 0.0;
  double c = 1.0;
  double t = 1e-4;
  double alpha = 1.0;
  double lambda = 1.0;
  double gamma_safety = 0.9;
  double inner_t0 = 1e-3;
  double inner_decay = 0.9;
  double inner_floor_factor = 0.1;
  int max_outer = 1000;
  int max_inner = 10000;

  void validate() const {
    if (rho < 0.0) throw std::invalid_argument("SolverConfig: rho must be non-negative");
    if (!(c > 0.0)) throw std::invalid_argument("SolverConfig: c must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("SolverConfig: t must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("SolverConfig: alpha must be positive");
    if (!(lambda > 0.0 && lambda < 2.0))
      throw std::invalid_argument("SolverConfig: lambda must lie in (0, 2)");
    if (!(gamma_safety > 0.0 && gamma_safety < 1.0))
      throw std::invalid_argument("SolverConfig: gamma_safety must lie in (0, 1)");
    if (!(inner_t0 > 0.0)) throw std::invalid_argument("SolverConfig: inner_t0 must be positive");
    if (!(inner_decay > 0.0 && inner_decay <= 1.0))
      throw std::invalid_argument("SolverConfig: inner_decay must lie in (0, 1]");
    if (!(inner_floor_factor > 0.0))
      throw std::invalid_argument("SolverConfig: inner_floor_factor must be positive");
    if (max_outer < 1) throw std::invalid_argument("SolverConfig: max_outer must be at least 1");
    if (max_inner < 1) throw std::invalid_argument("SolverConfig: max_inner must be at least 1");
  }
};

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double stop_metric = 0.0;
  double elapsed_s = 0.0;
  int drs_iters = 0;
  int fbs_iters = 0;
};

using SolverTrace = std::vector<TraceRow>;

struct PcglassoSolution {
  SymMatrix theta;
  SymMatrix delta;
  DiagScale xi;
  SolverTrace trace;
  bool converged = false;
  bool existence_warning = false;
};

struct InitPoint {
  SymMatrix delta0;
  DiagScale xi0;
  DrsState drs;
};

/// Starting point from the (shifted-if-needed) inverse of S: with
/// W = inv(S) or inv(S + (1 - lambda_min(S)) I),
///   xi0_i = sqrt(W_ii),  Delta0 = diag(xi0)^-1 W diag(xi0)^-1,
/// and all three DRS matrices start at Delta0.
inline InitPoint init_point(const SymMatrix& s) {
  SymMatrix w = pd_or_shifted_inverse(s);
  Eigen::Index p = s.dim();
  Eigen::VectorXd xi0(p);
  for (Eigen::Index i = 0; i < p; ++i) xi0(i) = std::sqrt(w(i, i));
  Eigen::MatrixXd d0(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    d0(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < p; ++i) d0(i, j) = w(i, j) / (xi0(i) * xi0(j));
  }
  SymMatrix delta0 = SymMatrix::from_lower(std::move(d0));
  DrsState state{delta0, delta0, delta0};
  return {std::move(delta0), DiagScale(std::move(xi0)), std::move(state)};
}

/// Splits Theta into (Delta, xi) with xi_i = sqrt(Theta_ii) and
/// Delta_ij = Theta_ij / (xi_i xi_j), diagonal pinned to exactly 1.
inline std::pair<SymMatrix, DiagScale> decompose_theta(const SymMatrix& theta) {
  Eigen::Index p = theta.dim();
  Eigen::VectorXd xi(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(theta(i, i) > 0.0))
      throw std::domain_error("decompose_theta: diagonal entry " + std::to_string(i) +
                              " is not strictly positive");
    xi(i) = std::sqrt(theta(i, i));
  }
  Eigen::MatrixXd d(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    d(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < p; ++i) d(i, j) = theta(i, j) / (xi(i) * xi(j));
  }
  return {SymMatrix::from_lower(std::move(d)), DiagScale(std::move(xi))};
}

/// Combined relative-change stopping metric over an outer iteration:
///   sum_{i != j} |Delta+ - Delta| / max(sum_{i != j} |Delta|, 1e-8)
/// + sum_i |xi+ - xi| / sum_i |xi|.
inline double outer_stop_metric(const SymMatrix& delta_new, const SymMatrix& delta_prev,
                                const DiagScale& xi_new, const DiagScale& xi_prev) {
  if (delta_new.dim() != delta_prev.dim() || xi_new.dim() != xi_prev.dim() ||
      delta_new.dim() != xi_new.dim())
    throw std::invalid_argument("outer_stop_metric: dimension mismatch");
  double dnum = 0.0, dden = 0.0;
  for (Eigen::Index j = 0; j < delta_new.dim(); ++j)
    for (Eigen::Index i = j + 1; i < delta_new.dim(); ++i) {
      dnum += std::abs(delta_new(i, j) - delta_prev(i, j));
      dden += std::abs(delta_prev(i, j));
    }
  double xnum = (xi_new.values() - xi_prev.values()).array().abs().sum();
  double xden = xi_prev.values().array().abs().sum();
  return 2.0 * dnum / std::max(2.0 * dden, 1e-8) + xnum / xden;
}

/// Inner-solver threshold at outer iteration k (0-based):
/// max(inner_t0 * inner_decay^k, inner_floor_factor * t).
inline double inner_threshold(int k, double t, const SolverConfig& cfg) {
  if (k < 0) throw std::invalid_argument("inner_threshold: k must be non-negative");
  if (!(t > 0.0)) throw std::invalid_argument("inner_threshold: t must be positive");
  return std::max(cfg.inner_t0 * std::pow(cfg.inner_decay, k), cfg.inner_floor_factor * t);
}

namespace detail {

// Estimates rank deficiency as the count of eigenvalues below the default
// PD tolerance and flags parameter pairs past the existence bound
// c < 1 - k/p for singular S.
inline bool existence_flag(const SymMatrix& s, double c) {
  SpectralDecomposition es = sym_eigen(s);
  Eigen::Index p = s.dim();
  double tol = default_pd_tol(es.eigenvalues(p - 1));
  Eigen::Index deficient = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    if (es.eigenvalues(i) < tol) ++deficient;
  return deficient > 0 &&
         c >= 1.0 - static_cast<double>(deficient) / static_cast<double>(p);
}

struct WarmStart {
  SymMatrix delta;
  DiagScale xi;
  DrsState drs;
};

struct SolveOutcome {
  PcglassoSolution solution;
  DrsState drs;
};

using Deadline = std::chrono::steady_clock::time_point;

// Alternating loop shared by solve(), solve_path() and the convergence
// comparison harness. A deadline stops the loop between outer iterations
// (the run is then reported as not converged).
inline SolveOutcome solve_impl(const SymMatrix& s, const SolverConfig& cfg,
                               std::optional<WarmStart> warm,
                               std::optional<Deadline> deadline) {
  cfg.validate();
  Eigen::Index p = s.dim();
  bool existence_warning = existence_flag(s, cfg.c);

  SymMatrix delta = SymMatrix::identity(p);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);
  DiagScale xi(ones);
  DrsState state{delta, delta, delta};
  if (warm) {
    delta = std::move(warm->delta);
    xi = std::move(warm->xi);
    state = std::move(warm->drs);
  } else {
    InitPoint start = init_point(s);
    delta = std::move(start.delta0);
    xi = std::move(start.xi0);
    state = std::move(start.drs);
  }

  auto t0 = std::chrono::steady_clock::now();
  SolverTrace trace;
  bool converged = false;
  for (int k = 0; k < cfg.max_outer; ++k) {
    double t_in = inner_threshold(k, cfg.t, cfg);
    SymMatrix s_tilde = scale_sym(s, xi);
    DrsConfig dcfg{cfg.alpha, cfg.lambda, t_in, cfg.max_inner};
    DrsResult dres = drs_solve(s_tilde, cfg.rho, std::move(state), dcfg);
    state = std::move(dres.state);

    FbsConfig fcfg{t_in, cfg.max_inner, cfg.gamma_safety};
    FbsResult fres = fbs_solve(s, dres.delta, cfg.c, xi, fcfg);

    double metric = outer_stop_metric(dres.delta, delta, fres.xi, xi);
    delta = std::move(dres.delta);
    xi = std::move(fres.xi);
    double obj = objective_pcglasso(s, delta, xi, cfg.rho, cfg.c);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace.push_back({k + 1, obj, metric, elapsed, dres.iters, fres.iters});
    if (metric < cfg.t) {
      converged = true;
      break;
    }
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
  }

  SymMatrix theta = scale_sym(delta, xi);
  PcglassoSolution sol{std::move(theta), std::move(delta), std::move(xi),
                       std::move(trace), converged, existence_warning};
  return {std::move(sol), std::move(state)};
}

}  // namespace detail

/// Alternating solver: one warm-started DRS run over Delta and one FBS run
/// over xi per outer iteration, with the combined relative-change stopping
/// rule. The returned theta is xi Delta xi.
inline PcglassoSolution solve(const SymMatrix& s, const SolverConfig& cfg) {
  return detail::solve_impl(s, cfg, std::nullopt, std::nullopt).solution;
}

/// Solves along an ascending rho grid, warm-starting each solve from the
/// previous solution (parameters and DRS state).
inline std::vector<PcglassoSolution> solve_path(const SymMatrix& s,
                                                const std::vector<double>& rho_list,
                                                SolverConfig cfg) {
  if (rho_list.empty()) throw std::invalid_argument("solve_path: empty rho list");
  for (std::size_t i = 0; i < rho_list.size(); ++i) {
    if (rho_list[i] < 0.0) throw std::invalid_argument("solve_path: rho must be non-negative");
    if (i > 0 && rho_list[i] <= rho_list[i - 1])
      throw std::invalid_argument("solve_path: rho list must be strictly ascending");
  }
  std::vector<PcglassoSolution> out;
  out.reserve(rho_list.size());
  std::optional<detail::WarmStart> warm;
  for (double rho : rho_list) {
    cfg.rho = rho;
    detail::SolveOutcome res = detail::solve_impl(s, cfg, std::move(warm), std::nullopt);
    warm = detail::WarmStart{res.solution.delta, res.solution.xi, std::move(res.drs)};
    out.push_back(std::move(res.solution));
  }
  return out;
}

}  // namespace pcglasso
