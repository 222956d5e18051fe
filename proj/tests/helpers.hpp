#pragma once

// Shared construction helpers for the test suite.

#include <Eigen/Dense>

#include <chrono>
#include <filesystem>
#include <string>

#include "pcglasso/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd random_sym(pcglasso::Rng& rng, int p, double scale = 1.0) {
  Eigen::MatrixXd m(p, p);
  for (int j = 0; j < p; ++j)
    for (int i = j; i < p; ++i) {
      double v = scale * rng.normal();
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// Gram matrix plus a ridge; the explicit averaging makes the result
// bitwise symmetric, which SymMatrix's zero-tolerance check requires.
inline Eigen::MatrixXd random_pd(pcglasso::Rng& rng, int p, double ridge = 0.5) {
  Eigen::MatrixXd a(p, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) a(i, j) = rng.normal();
  Eigen::MatrixXd m =
      a * a.transpose() / static_cast<double>(p) + ridge * Eigen::MatrixXd::Identity(p, p);
  return 0.5 * (m + m.transpose());
}

// Correlation-form positive definite matrix: unit diagonal exactly.
inline Eigen::MatrixXd random_unitdiag_pd(pcglasso::Rng& rng, int p) {
  Eigen::MatrixXd m = random_pd(rng, p, 0.4);
  Eigen::VectorXd d = m.diagonal().cwiseSqrt();
  Eigen::MatrixXd out(p, p);
  for (int j = 0; j < p; ++j) {
    out(j, j) = 1.0;
    for (int i = j + 1; i < p; ++i) {
      double v = m(i, j) / (d(i) * d(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

inline Eigen::VectorXd random_positive(pcglasso::Rng& rng, int p, double lo = 0.2,
                                       double hi = 2.5) {
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v(i) = lo + (hi - lo) * rng.uniform();
  return v;
}

// Scratch directory for file-based tests, fresh per process.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("pcglasso_tests_" + std::to_string(stamp)) / tag;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
