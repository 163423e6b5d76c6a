#include "treestat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treestat/error.hpp"

namespace treestat {

EigenDecomposition symmetric_eigen(const Matrix& input) {
  const std::size_t n = input.size();
  Matrix a = input;
  Matrix v = Matrix::identity(n);

  auto off_diagonal_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      scale = std::max(scale, std::abs(a(i, j)));
  const double stop = scale > 0.0 ? 1e-15 * scale * n : 0.0;

  for (int sweep = 0; sweep < 64 && off_diagonal_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (a(i, i) != a(j, j)) return a(i, i) > a(j, j);
    return i < j;
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    // Canonical sign: largest-|.| component positive, first index on ties.
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > best) {
        best = std::abs(v(i, src));
        pivot = i;
      }
    }
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double rel_cutoff,
                      std::size_t* rank_out) {
  const std::size_t n = m.size();
  const EigenDecomposition eig = symmetric_eigen(m);
  const double lambda_max =
      eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
  const double cutoff = rel_cutoff * lambda_max;

  Matrix out(n);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.values[k] <= cutoff || eig.values[k] <= 0.0) continue;
    ++rank;
    const double inv = 1.0 / eig.values[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += inv * eig.vectors(i, k) * eig.vectors(j, k);
  }
  if (rank_out) *rank_out = rank;
  return out;
}

std::vector<std::size_t> pivoted_retained_columns(const Matrix& input,
                                                  double rel_cutoff) {
  const std::size_t n = input.size();
  Matrix a = input;
  std::vector<bool> picked(n, false);
  std::vector<std::size_t> retained;

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double cutoff = rel_cutoff * max_diag;
  if (max_diag <= 0.0) return retained;

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pivot = n;
    double best = cutoff;
    for (std::size_t i = 0; i < n; ++i) {
      if (!picked[i] && a(i, i) > best) {
        best = a(i, i);
        pivot = i;
      }
    }
    if (pivot == n) break;
    picked[pivot] = true;
    retained.push_back(pivot);
    // Schur complement update of the unpicked block.
    const double d = a(pivot, pivot);
    for (std::size_t i = 0; i < n; ++i) {
      if (picked[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (picked[j]) continue;
        a(i, j) -= a(i, pivot) * a(pivot, j) / d;
      }
    }
  }
  std::sort(retained.begin(), retained.end());
  return retained;
}

Matrix psd_sqrt(const Matrix& m) {
  const std::size_t n = m.size();
  const EigenDecomposition eig = symmetric_eigen(m);
  Matrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.values[k] <= 0.0) continue;
    const double root = std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += root * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return out;
}

double quadratic_form(const Matrix& m, std::span<const double> x,
                      std::span<const double> y) {
  if (x.size() != m.size() || y.size() != m.size())
    throw Error("quadratic_form: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) row += m(i, j) * y[j];
    total += x[i] * row;
  }
  return total;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw Error("multiply: dimension mismatch");
  const std::size_t n = a.size();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

}  // namespace treestat
