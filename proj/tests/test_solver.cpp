#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pcglasso/coordinate_descent.hpp"
#include "pcglasso/simulate.hpp"
#include "pcglasso/solver.hpp"

using namespace pcglasso;

TEST_CASE("initial point factors the inverse of a definite input") {
  Rng rng(51);
  SymMatrix s{testutil::random_pd(rng, 6)};
  InitPoint init = init_point(s);
  Eigen::MatrixXd w = s.mat().inverse();
  for (int i = 0; i < 6; ++i) {
    CHECK(init.delta0(i, i) == 1.0);
    CHECK(init.xi0[i] == Catch::Approx(std::sqrt(w(i, i))).margin(1e-10));
  }
  SymMatrix rebuilt = scale_sym(init.delta0, init.xi0);
  CHECK((rebuilt.mat() - w).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(init.drs.x.mat() == init.delta0.mat());
  CHECK(init.drs.y.mat() == init.delta0.mat());
  CHECK(init.drs.z.mat() == init.delta0.mat());
}

TEST_CASE("initial point shifts a singular input") {
  Eigen::MatrixXd ones(2, 2);
  ones.setOnes();
  InitPoint init = init_point(SymMatrix{ones});
  // spectrum (0,2) shifts to (1,3): W = inv([[2,1],[1,2]]), so
  // W = (1/3)[[2,-1],[-1,2]], xi0 = sqrt(2/3), delta off-diagonal -1/2
  CHECK(init.xi0[0] == Catch::Approx(std::sqrt(2.0 / 3.0)).margin(1e-12));
  CHECK(init.delta0(0, 1) == Catch::Approx(-0.5).margin(1e-12));
  CHECK(init.delta0(0, 0) == 1.0);
}

TEST_CASE("scaling decomposition round-trips") {
  Rng rng(52);
  SymMatrix theta{testutil::random_pd(rng, 5)};
  auto [delta, xi] = decompose_theta(theta);
  for (int i = 0; i < 5; ++i) {
    CHECK(delta(i, i) == 1.0);
    CHECK(xi[i] == Catch::Approx(std::sqrt(theta(i, i))).margin(1e-14));
  }
  SymMatrix back = scale_sym(delta, xi);
  CHECK((back.mat() - theta.mat()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd d(2);
  d << 1.0, 0.0;
  CHECK_THROWS_AS(decompose_theta(SymMatrix::diagonal(d)), std::domain_error);
}

TEST_CASE("outer stopping metric floors only the matrix denominator") {
  Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd next = prev;
  next(0, 1) = next(1, 0) = 1e-9;
  DiagScale xi{Eigen::VectorXd::Ones(2)};
  double m = outer_stop_metric(SymMatrix{next}, SymMatrix{prev}, xi, xi);
  CHECK(m == Catch::Approx(0.2).margin(1e-12));

  // general case against a plain-loop recomputation
  Rng rng(53);
  SymMatrix a{testutil::random_unitdiag_pd(rng, 4)};
  SymMatrix b{testutil::random_unitdiag_pd(rng, 4)};
  DiagScale xa{testutil::random_positive(rng, 4)};
  DiagScale xb{testutil::random_positive(rng, 4)};
  double dnum = 0.0, dden = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      dnum += std::abs(a(i, j) - b(i, j));
      dden += std::abs(b(i, j));
    }
  double want = dnum / std::max(dden, 1e-8) +
                (xa.values() - xb.values()).cwiseAbs().sum() / xb.values().cwiseAbs().sum();
  CHECK(outer_stop_metric(a, b, xa, xb) == Catch::Approx(want).epsilon(1e-12));
}

TEST_CASE("inner threshold decays geometrically to a floor") {
  SolverConfig cfg;
  CHECK(inner_threshold(0, 1e-4, cfg) == 1e-3);
  CHECK(inner_threshold(22, 1e-4, cfg) ==
        Catch::Approx(1e-3 * std::pow(0.9, 22)).epsilon(1e-12));
  CHECK(inner_threshold(500, 1e-4, cfg) == Catch::Approx(1e-5).margin(1e-20));
  CHECK(inner_threshold(3, 1e-2, cfg) == Catch::Approx(1e-3).margin(1e-15));
}

TEST_CASE("unpenalised solve recovers the exact inverse") {
  Rng rng(54);
  SymMatrix s{testutil::random_pd(rng, 5)};
  SolverConfig cfg;
  cfg.t = 1e-6;
  PcglassoSolution sol = solve(s, cfg);
  REQUIRE(sol.converged);
  Eigen::MatrixXd want = s.mat().inverse();
  REQUIRE((sol.theta.mat() - want).norm() / want.norm() < 1e-4);
}

TEST_CASE("solutions satisfy the structural invariants") {
  Rng rng(55);
  for (int rep = 0; rep < 6; ++rep) {
    int p = 3 + static_cast<int>(rng.uniform_int(6));
    SymMatrix s{testutil::random_pd(rng, p)};
    SolverConfig cfg;
    cfg.rho = 0.2 * rng.uniform();
    cfg.c = 0.5 + rng.uniform();
    PcglassoSolution sol = solve(s, cfg);
    REQUIRE(sol.converged);
    REQUIRE(is_positive_definite(sol.delta));
    for (int i = 0; i < p; ++i) {
      REQUIRE(sol.delta(i, i) == 1.0);
      REQUIRE(sol.xi[i] > 0.0);
    }
    SymMatrix rebuilt = scale_sym(sol.delta, sol.xi);
    REQUIRE((rebuilt.mat() - sol.theta.mat()).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE_FALSE(sol.trace.empty());
    for (std::size_t k = 1; k < sol.trace.size(); ++k) {
      REQUIRE(sol.trace[k].elapsed_s >= sol.trace[k - 1].elapsed_s);
      REQUIRE(sol.trace[k].iter == static_cast<int>(k) + 1);
    }
  }
}

TEST_CASE("the tracked objective never rises above its start") {
  Rng rng(56);
  for (int rep = 0; rep < 5; ++rep) {
    int p = 3 + static_cast<int>(rng.uniform_int(6));
    SymMatrix s{testutil::random_pd(rng, p)};
    SolverConfig cfg;
    cfg.rho = 0.1;
    cfg.c = 0.8;
    PcglassoSolution sol = solve(s, cfg);
    InitPoint init = init_point(s);
    double start = oracles::pcg_objective(s.mat(), init.delta0.mat(), init.xi0.values(),
                                          cfg.rho, cfg.c);
    double end = oracles::pcg_objective(s.mat(), sol.delta.mat(), sol.xi.values(), cfg.rho,
                                        cfg.c);
    REQUIRE(end <= start + 1e-9);
    for (std::size_t k = 1; k < sol.trace.size(); ++k)
      REQUIRE(sol.trace[k].objective <= sol.trace[k - 1].objective + 1e-8);
  }
}

TEST_CASE("identical inputs give identical numerical traces") {
  Rng rng(57);
  SymMatrix s{testutil::random_pd(rng, 6)};
  SolverConfig cfg;
  cfg.rho = 0.15;
  cfg.c = 0.9;
  PcglassoSolution a = solve(s, cfg);
  PcglassoSolution b = solve(s, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].objective == b.trace[k].objective);
    CHECK(a.trace[k].stop_metric == b.trace[k].stop_metric);
    CHECK(a.trace[k].drs_iters == b.trace[k].drs_iters);
    CHECK(a.trace[k].fbs_iters == b.trace[k].fbs_iters);
  }
  CHECK(a.theta.mat() == b.theta.mat());
  CHECK(a.xi.values() == b.xi.values());
}

TEST_CASE("stationarity residuals vanish at a tight tolerance") {
  Rng rng(58);
  SymMatrix s{testutil::random_pd(rng, 5)};
  SolverConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 1e-8;
  PcglassoSolution sol = solve(s, cfg);
  REQUIRE(sol.converged);
  auto [xi_res, delta_res] =
      oracles::pcg_stationarity(s.mat(), sol.delta.mat(), sol.xi.values(), cfg.rho, cfg.c);
  REQUIRE(xi_res < 1e-4);
  REQUIRE(delta_res < 1e-4);
}

TEST_CASE("rank-deficient inputs at large c raise the existence warning") {
  SymMatrix theta = make_theta({GraphKind::star, 10, 0});
  SymMatrix s = sample_cov(theta, 6, 77, false);
  SolverConfig cfg;
  cfg.c = 1.0;
  cfg.max_outer = 30;  // divergent runs only need to show the flag
  PcglassoSolution warned = solve(s, cfg);
  CHECK(warned.existence_warning);

  cfg.c = 0.3;  // below 1 - k/p = 1/2 for this draw
  cfg.max_outer = 1000;
  PcglassoSolution fine = solve(s, cfg);
  CHECK_FALSE(fine.existence_warning);

  Rng rng(59);
  SymMatrix pd{testutil::random_pd(rng, 5)};
  SolverConfig dcfg;
  CHECK_FALSE(solve(pd, dcfg).existence_warning);
}

TEST_CASE("a dominant penalty empties the partial correlations") {
  Rng rng(60);
  SymMatrix s{testutil::random_pd(rng, 5)};
  SolverConfig cfg;
  cfg.rho = 10.0;
  cfg.c = 0.8;
  cfg.t = 1e-6;
  PcglassoSolution sol = solve(s, cfg);
  REQUIRE(sol.converged);
  for (int j = 0; j < 5; ++j)
    for (int i = j + 1; i < 5; ++i) REQUIRE(std::abs(sol.delta(i, j)) < 1e-10);
  // with Delta = I the scaling solves  s_ii xi^2 = c
  for (int i = 0; i < 5; ++i)
    REQUIRE(sol.xi[i] == Catch::Approx(std::sqrt(cfg.c / s(i, i))).margin(1e-5));
}

TEST_CASE("penalty paths warm-start and agree with cold solves") {
  Rng rng(61);
  SymMatrix theta = make_theta({GraphKind::star, 8, 0});
  SymMatrix s = sample_cov(theta, 40, 5, true);
  std::vector<double> rhos{0.02, 0.1, 0.4};
  SolverConfig cfg;
  cfg.t = 1e-5;
  std::vector<PcglassoSolution> path = solve_path(s, rhos, cfg);
  REQUIRE(path.size() == 3);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    REQUIRE(path[k].converged);
    SolverConfig one = cfg;
    one.rho = rhos[k];
    PcglassoSolution cold = solve(s, one);
    double a = oracles::pcg_objective(s.mat(), path[k].delta.mat(), path[k].xi.values(),
                                      rhos[k], cfg.c);
    double b = oracles::pcg_objective(s.mat(), cold.delta.mat(), cold.xi.values(), rhos[k],
                                      cfg.c);
    REQUIRE(std::abs(a - b) <= 1e-5 * std::abs(b));
    REQUIRE((path[k].delta.mat() - cold.delta.mat()).cwiseAbs().maxCoeff() < 1e-3);
  }

  CHECK_THROWS_AS(solve_path(s, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(solve_path(s, {0.2, 0.1}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(solve_path(s, {-0.1, 0.2}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(solve_path(s, {0.1, 0.1}, cfg), std::invalid_argument);
}

TEST_CASE("outer solver configuration bounds") {
  SolverConfig cfg;
  cfg.rho = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.c = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.t = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.lambda = 2.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.inner_decay = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.inner_decay = 1.0;  // constant inner threshold is allowed
  CHECK_NOTHROW(cfg.validate());
  cfg = SolverConfig{};
  cfg.max_outer = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
