#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace treestat {

/// Dense square matrix of doubles, row-major. Covariance matrices in this
/// library have one row per internal split, so everything below is a plain
/// dense algorithm.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvector signs
/// are canonicalized (largest-magnitude component positive) so results are
/// reproducible.
EigenDecomposition symmetric_eigen(const Matrix& m);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues below
/// rel_cutoff * lambda_max are treated as zero. Reports the numeric rank when
/// rank_out is non-null.
Matrix pseudo_inverse(const Matrix& m, double rel_cutoff,
                      std::size_t* rank_out = nullptr);

/// Diagonal-pivoted Cholesky column selection on a symmetric PSD matrix:
/// returns the indices (ascending) of a well-conditioned full-rank subset.
/// Pivoting stops once the largest remaining Schur-complement diagonal drops
/// below rel_cutoff times the largest original diagonal.
std::vector<std::size_t> pivoted_retained_columns(const Matrix& m,
                                                  double rel_cutoff);

/// Symmetric PSD square root via eigen-decomposition (negative eigenvalues
/// are clamped to zero).
Matrix psd_sqrt(const Matrix& m);

/// x^T M y.
double quadratic_form(const Matrix& m, std::span<const double> x,
                      std::span<const double> y);

Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace treestat
