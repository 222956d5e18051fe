#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pcglasso {

/// Dense symmetric p x p matrix with bitwise-exact symmetry.
///
/// User-supplied matrices are validated at construction and rejected if any
/// entry pair differs (use symmetrize() to average an almost-symmetric
/// matrix first). Results of floating-point products, which are rarely
/// bitwise symmetric, are built through from_lower(), which takes the lower
/// triangle as authoritative and mirrors it.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("SymMatrix: need a non-empty square matrix, got " +
                                  std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    for (Eigen::Index j = 0; j < m_.cols(); ++j)
      for (Eigen::Index i = j + 1; i < m_.rows(); ++i)
        if (m_(i, j) != m_(j, i))
          throw std::invalid_argument("SymMatrix: entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")=" + std::to_string(m_(i, j)) +
                                      " differs from its mirror " + std::to_string(m_(j, i)));
  }

  static SymMatrix identity(Eigen::Index p) {
    return SymMatrix(Eigen::MatrixXd::Identity(p, p), unchecked_tag{});
  }

  static SymMatrix zero(Eigen::Index p) {
    return SymMatrix(Eigen::MatrixXd::Zero(p, p), unchecked_tag{});
  }

  static SymMatrix diagonal(const Eigen::VectorXd& d) {
    if (d.size() == 0) throw std::invalid_argument("SymMatrix::diagonal: empty vector");
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()), unchecked_tag{});
  }

  /// Builds from the lower triangle (upper triangle of the argument is
  /// ignored and overwritten by the mirror).
  static SymMatrix from_lower(Eigen::MatrixXd m) {
    if (m.rows() == 0 || m.rows() != m.cols())
      throw std::invalid_argument("SymMatrix::from_lower: need a non-empty square matrix");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = j + 1; i < m.rows(); ++i) m(j, i) = m(i, j);
    return SymMatrix(std::move(m), unchecked_tag{});
  }

  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Eigen::MatrixXd& mat() const { return m_; }

 private:
  struct unchecked_tag {};
  SymMatrix(Eigen::MatrixXd m, unchecked_tag) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

/// Averages a square matrix with its transpose.
inline SymMatrix symmetrize(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw std::invalid_argument("symmetrize: need a non-empty square matrix");
  return SymMatrix::from_lower(0.5 * (m + m.transpose()));
}

/// Strictly positive diagonal scaling, stored as a vector.
class DiagScale {
 public:
  explicit DiagScale(Eigen::VectorXd v) : v_(std::move(v)) {
    if (v_.size() == 0) throw std::invalid_argument("DiagScale: empty vector");
    for (Eigen::Index i = 0; i < v_.size(); ++i)
      if (!(v_(i) > 0.0))
        throw std::invalid_argument("DiagScale: entry " + std::to_string(i) + "=" +
                                    std::to_string(v_(i)) + " is not strictly positive");
  }

  Eigen::Index dim() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_(i); }
  const Eigen::VectorXd& values() const { return v_; }

 private:
  Eigen::VectorXd v_;
};

/// Eigenvalues in ascending order; eigenvectors in matching columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Full spectral decomposition. Eigenvector signs are normalized so the
/// largest-magnitude entry of each column (first such entry on ties) is
/// positive, making the output deterministic for identical input bits.
inline SpectralDecomposition sym_eigen(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eigen: eigendecomposition failed to converge; input may be ill-conditioned");
  Eigen::VectorXd vals = es.eigenvalues();
  Eigen::MatrixXd vecs = es.eigenvectors();
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = std::abs(vecs(0, j));
    for (Eigen::Index i = 1; i < vecs.rows(); ++i) {
      double a = std::abs(vecs(i, j));
      if (a > best) { best = a; arg = i; }
    }
    if (vecs(arg, j) < 0.0) vecs.col(j) = -vecs.col(j);
  }
  return {std::move(vals), std::move(vecs)};
}

/// Soft threshold: sign(a) * max(|a| - b, 0). b must be non-negative.
inline double shrink(double a, double b) {
  if (b < 0.0) throw std::invalid_argument("shrink: threshold must be non-negative");
  double mag = std::abs(a) - b;
  if (mag <= 0.0) return 0.0;
  return a < 0.0 ? -mag : mag;
}

/// Entrywise (Hadamard) product.
inline SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("hadamard: dimension mismatch " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  return SymMatrix::from_lower(a.mat().cwiseProduct(b.mat()));
}

inline double max_eigenvalue(const SymMatrix& m) {
  return sym_eigen(m).eigenvalues(m.dim() - 1);
}

/// Default positive-definiteness tolerance: 1e-10 * max(1, lambda_max).
inline double default_pd_tol(double lambda_max) {
  return 1e-10 * std::max(1.0, lambda_max);
}

inline bool is_positive_definite(const SymMatrix& m, double tol) {
  return sym_eigen(m).eigenvalues(0) > tol;
}

inline bool is_positive_definite(const SymMatrix& m) {
  Eigen::VectorXd vals = sym_eigen(m).eigenvalues;
  return vals(0) > default_pd_tol(vals(m.dim() - 1));
}

/// D * M * D for diagonal D given as a positive vector: out_ij = d_i m_ij d_j.
inline SymMatrix scale_sym(const SymMatrix& m, const DiagScale& d) {
  if (m.dim() != d.dim()) throw std::invalid_argument("scale_sym: dimension mismatch");
  Eigen::Index p = m.dim();
  Eigen::MatrixXd out(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j; i < p; ++i) out(i, j) = d[i] * m(i, j) * d[j];
  return SymMatrix::from_lower(std::move(out));
}

/// Inverse of S when S is positive definite; otherwise the inverse of S
/// shifted so its smallest eigenvalue equals 1 (S + (1 - lambda_min) I).
inline SymMatrix pd_or_shifted_inverse(const SymMatrix& s) {
  SpectralDecomposition es = sym_eigen(s);
  Eigen::Index p = s.dim();
  double tol = default_pd_tol(es.eigenvalues(p - 1));
  Eigen::VectorXd vals = es.eigenvalues;
  if (!(vals(0) > tol)) vals.array() += 1.0 - vals(0);
  Eigen::MatrixXd inv = es.eigenvectors * vals.cwiseInverse().asDiagonal() *
                        es.eigenvectors.transpose();
  return SymMatrix::from_lower(std::move(inv));
}

}  // namespace pcglasso
