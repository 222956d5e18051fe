#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcglasso/rng.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

enum class GraphKind { star, hub, ar2, random_graph };

struct GraphModel {
  GraphKind kind = GraphKind::star;
  int p = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (p < 2) throw std::invalid_argument("GraphModel: p must be at least 2");
    if (kind == GraphKind::hub) {
      if (p % 5 != 0)
        throw std::invalid_argument("GraphModel: hub needs p divisible by 5");
      if (p < 20)
        throw std::invalid_argument(
            "GraphModel: hub couplings -2/sqrt(p) break positive definiteness for p < 20");
    }
  }
};

namespace detail {

inline Eigen::MatrixXd theta_star(int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  double v = -1.0 / std::sqrt(static_cast<double>(p));
  for (int i = 1; i < p; ++i) {
    m(0, i) = v;
    m(i, 0) = v;
  }
  return m;
}

// Groups of 5 consecutive variables; the first of each group is the hub,
// coupled to the other four.
inline Eigen::MatrixXd theta_hub(int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  double v = -2.0 / std::sqrt(static_cast<double>(p));
  for (int g = 0; g < p; g += 5)
    for (int j = g + 1; j < g + 5; ++j) {
      m(g, j) = v;
      m(j, g) = v;
    }
  return m;
}

inline Eigen::MatrixXd theta_ar2(int p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) {
    m(i, i + 1) = 0.5;
    m(i + 1, i) = 0.5;
  }
  for (int i = 0; i + 2 < p; ++i) {
    m(i, i + 2) = 0.25;
    m(i + 2, i) = 0.25;
  }
  return m;
}

// 3p/2 random edges (rounded, capped by the number of pairs) with weights
// uniform on [-1,-0.4] u [0.4,1]; entries divided by 1.1x the column
// absolute sums, symmetrised by averaging, unit diagonal.
inline Eigen::MatrixXd theta_random(int p, std::uint64_t seed) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
  for (int j = 0; j < p; ++j)
    for (int i = j + 1; i < p; ++i) pairs.push_back({i, j});
  std::size_t m = static_cast<std::size_t>(std::llround(1.5 * p));
  if (m > pairs.size()) m = pairs.size();

  Rng rng(seed);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t swap_with = k + rng.uniform_int(pairs.size() - k);
    std::swap(pairs[k], pairs[swap_with]);
  }

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < m; ++k) {
    double mag = 0.4 + 0.6 * rng.uniform();
    double val = rng.uniform() < 0.5 ? -mag : mag;
    raw(pairs[k].first, pairs[k].second) = val;
    raw(pairs[k].second, pairs[k].first) = val;
  }

  Eigen::VectorXd colsum = raw.array().abs().colwise().sum();
  Eigen::MatrixXd scaled = raw;
  for (int j = 0; j < p; ++j)
    if (colsum(j) > 0.0) scaled.col(j) /= 1.1 * colsum(j);
  Eigen::MatrixXd out = 0.5 * (scaled + scaled.transpose());
  for (int i = 0; i < p; ++i) out(i, i) = 1.0;
  return out;
}

}  // namespace detail

/// Builds the precision matrix of the requested graph family. Every output
/// is verified positive definite; the random family regenerates with
/// seed + 1 on a failed check (the seed actually used is reported through
/// seed_used when given).
inline SymMatrix make_theta(const GraphModel& model, std::uint64_t* seed_used = nullptr) {
  model.validate();
  if (seed_used) *seed_used = model.seed;
  switch (model.kind) {
    case GraphKind::star: {
      SymMatrix theta{detail::theta_star(model.p)};
      if (!is_positive_definite(theta))
        throw std::runtime_error("make_theta: star output failed the PD check");
      return theta;
    }
    case GraphKind::hub: {
      SymMatrix theta{detail::theta_hub(model.p)};
      if (!is_positive_definite(theta))
        throw std::runtime_error("make_theta: hub output failed the PD check");
      return theta;
    }
    case GraphKind::ar2: {
      SymMatrix theta{detail::theta_ar2(model.p)};
      if (!is_positive_definite(theta))
        throw std::runtime_error("make_theta: ar2 output failed the PD check");
      return theta;
    }
    case GraphKind::random_graph: {
      std::uint64_t seed = model.seed;
      for (int attempt = 0; attempt < 1000; ++attempt, ++seed) {
        SymMatrix theta{detail::theta_random(model.p, seed)};
        if (is_positive_definite(theta)) {
          if (seed_used) *seed_used = seed;
          return theta;
        }
      }
      throw std::runtime_error("make_theta: no positive definite random graph in 1000 seeds");
    }
  }
  throw std::logic_error("make_theta: unreachable");
}

/// n draws from N(0, Sigma) as the columns of a p x n matrix. Values are
/// filled column by column from the seeded stream (see Rng).
inline Eigen::MatrixXd mvn_sample(const SymMatrix& sigma, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("mvn_sample: n must be at least 1");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma.mat());
  if (llt.info() != Eigen::Success)
    throw std::domain_error("mvn_sample: covariance is not positive definite");
  Eigen::Index p = sigma.dim();
  Rng rng(seed);
  Eigen::MatrixXd z(p, n);
  for (int j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < p; ++i) z(i, j) = rng.normal();
  return llt.matrixL() * z;
}

/// Samples n observations from N(0, inv(theta)) and returns the centred
/// sample covariance (1/n) sum (x - xbar)(x - xbar)'. With standardize the
/// result is the sample correlation matrix, diagonal exactly 1.
inline SymMatrix sample_cov(const SymMatrix& theta, int n, std::uint64_t seed,
                            bool standardize) {
  if (n < 1) throw std::invalid_argument("sample_cov: n must be at least 1");
  Eigen::LLT<Eigen::MatrixXd> llt(theta.mat());
  if (llt.info() != Eigen::Success)
    throw std::domain_error("sample_cov: theta is not positive definite");
  Eigen::Index p = theta.dim();
  SymMatrix sigma = SymMatrix::from_lower(llt.solve(Eigen::MatrixXd::Identity(p, p)));
  Eigen::MatrixXd x = mvn_sample(sigma, n, seed);
  Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;
  Eigen::MatrixXd cov = (x * x.transpose()) / static_cast<double>(n);
  SymMatrix s = SymMatrix::from_lower(std::move(cov));
  if (!standardize) return s;
  Eigen::VectorXd d(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0))
      throw std::domain_error("sample_cov: zero variance, cannot standardize (n too small?)");
    d(i) = std::sqrt(s(i, i));
  }
  Eigen::MatrixXd corr(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    corr(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < p; ++i) corr(i, j) = s(i, j) / (d(i) * d(j));
  }
  return SymMatrix::from_lower(std::move(corr));
}

}  // namespace pcglasso
