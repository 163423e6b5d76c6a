#include <doctest.h>

#include <cmath>

#include "treestat/linalg.hpp"
#include "treestat/rng.hpp"

using namespace treestat;

namespace {

Matrix random_psd(std::size_t n, Rng& rng, std::size_t rank) {
  Matrix m(n);
  for (std::size_t r = 0; r < rank; ++r) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_normal();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) += v[i] * v[j];
  }
  return m;
}

}  // namespace

TEST_CASE("jacobi eigen on an analytic rank-1 matrix") {
  Matrix m(2);
  m(0, 0) = 2;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 2;
  const auto eig = symmetric_eigen(m);
  CHECK(eig.values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(eig.vectors(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(eig.vectors(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("eigen reconstruction and trace identity") {
  Rng rng(5);
  for (std::size_t n : {2u, 3u, 6u, 10u}) {
    const Matrix m = random_psd(n, rng, n);
    const auto eig = symmetric_eigen(m);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
    double sum = 0.0;
    for (double v : eig.values) sum += v;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-12));

    // V diag(w) V^T == m within 1e-10 Frobenius.
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double rebuilt = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          rebuilt += eig.values[k] * eig.vectors(i, k) * eig.vectors(j, k);
        const double d = rebuilt - m(i, j);
        frob += d * d;
      }
    CHECK(std::sqrt(frob) < 1e-10);

    // Columns orthonormal.
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          dot += eig.vectors(i, a) * eig.vectors(i, b);
        CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0)
                         .scale(1)
                         .epsilon(1e-12));
      }
  }
}

TEST_CASE("pseudo inverse restores identity on the retained subspace") {
  Rng rng(11);
  const Matrix m = random_psd(5, rng, 5);
  std::size_t rank = 0;
  const Matrix inv = pseudo_inverse(m, 1e-10, &rank);
  CHECK(rank == 5);
  const Matrix prod = multiply(inv, m);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(prod(i, j) ==
            doctest::Approx(i == j ? 1.0 : 0.0).scale(1).epsilon(1e-8));
}

TEST_CASE("pivoted column selection drops duplicated coordinates") {
  Rng rng(13);
  // Build a 4x4 covariance whose column 2 duplicates column 0.
  Matrix m = random_psd(3, rng, 3);
  Matrix full(4);
  auto src = [&](std::size_t i) { return i == 2 ? 0 : (i == 3 ? 2 : i); };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t a = i == 2 ? 0 : (i == 3 ? 2 : i);
      const std::size_t b = j == 2 ? 0 : (j == 3 ? 2 : j);
      full(i, j) = m(a, b);
    }
  (void)src;
  const auto kept = pivoted_retained_columns(full, 1e-10);
  CHECK(kept.size() == 3);
  // Exactly one of columns {0, 2} retained.
  int dup = 0;
  for (auto k : kept) dup += (k == 0 || k == 2) ? 1 : 0;
  CHECK(dup == 1);
}

TEST_CASE("psd sqrt squares back") {
  Rng rng(17);
  const Matrix m = random_psd(4, rng, 2);  // deliberately singular
  const Matrix root = psd_sqrt(m);
  const Matrix sq = multiply(root, root);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(sq(i, j) == doctest::Approx(m(i, j)).scale(1).epsilon(1e-10));
}
