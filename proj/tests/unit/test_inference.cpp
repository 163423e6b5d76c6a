#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/test_trees.hpp"
#include "treestat/error.hpp"
#include "treestat/inference.hpp"
#include "treestat/simulate.hpp"

using namespace treestat;
using namespace treestat::testing;

namespace {

FramePtr frame5() {
  return make_frame(
      tree_of(letters(5), {{"ab", 2.0}, {"abc", 3.0}}, {1, 1, 1, 1, 1}));
}

std::vector<std::vector<double>> gaussian_vectors(const FramePtr& frame,
                                                  std::size_t n, Rng& rng,
                                                  double sd = 0.25) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v = frame->base_coords();
    for (auto& x : v) x += sd * rng.next_normal();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("summary arithmetic on the two-vector example") {
  const auto s =
      summarize_vectors(frame5(), {{1.0, 2.0}, {3.0, 4.0}});
  CHECK(s.mean_vector() == std::vector<double>{2.0, 3.0});
  CHECK(s.covariance()(0, 0) == doctest::Approx(2.0));
  CHECK(s.covariance()(0, 1) == doctest::Approx(2.0));
  CHECK(s.covariance()(1, 1) == doctest::Approx(2.0));
  CHECK(s.rank() == 1);
  CHECK(s.reduced());
  REQUIRE(s.dropped().size() == 1);
  CHECK(s.dropped()[0].reason == DropReason::rank_deficient);
}

TEST_CASE("identical vectors leave an empty retained frame") {
  // Frame order sorts by canonical mask: "abc" (side d|e) precedes "ab"
  // (side c|d|e), so the base coordinates are (3.0, 2.0).
  const auto s = summarize_vectors(
      frame5(), {{3.0, 2.0}, {3.0, 2.0}, {3.0, 2.0}});
  CHECK(s.rank() == 0);
  CHECK(s.dropped().size() == 2);
  for (const auto& d : s.dropped())
    CHECK(d.reason == DropReason::zero_variance);
  // The set degenerates to the single pinned tree: the matching candidate is
  // a member, anything that moves a fixed coordinate is excluded with p 0.
  const auto in = confidence_member(
      s, tree_of(letters(5), {{"ab", 2.0}, {"abc", 3.0}}), 0.05);
  CHECK(in.member);
  const auto out = confidence_member(
      s, tree_of(letters(5), {{"ab", 2.5}, {"abc", 3.0}}), 0.05);
  CHECK_FALSE(out.member);
  CHECK(out.p_value == 0.0);
  CHECK(out.fixed_coordinate_conflict);
}

TEST_CASE("covariance matches a textbook two-pass oracle") {
  Rng rng(2);
  const auto frame = frame5();
  const auto vectors = gaussian_vectors(frame, 50, rng);
  const auto s = summarize_vectors(frame, vectors);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double mean_i = 0.0, mean_j = 0.0;
      for (const auto& v : vectors) {
        mean_i += v[i];
        mean_j += v[j];
      }
      mean_i /= 50;
      mean_j /= 50;
      double cov = 0.0;
      for (const auto& v : vectors) cov += (v[i] - mean_i) * (v[j] - mean_j);
      cov /= 49;
      CHECK(s.covariance()(i, j) ==
            doctest::Approx(cov).epsilon(1e-12).scale(1));
    }
  }
  CHECK(s.rank() == 2);
  // precision * covariance = identity on the retained block
  const Matrix prod = multiply(s.precision(), s.covariance());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(prod(i, j) ==
            doctest::Approx(i == j ? 1.0 : 0.0).scale(1).epsilon(1e-8));
}

TEST_CASE("small samples are rejected") {
  CHECK_THROWS_AS(summarize_vectors(frame5(), {{1.0, 2.0}}), Error);
  // A sample covariance has rank at most n-1, so the retained dimension can
  // never catch the sample size; the n > m' pivot precondition holds for any
  // summary that constructs.
  Rng rng(90);
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto taxa = letters(7);
    const auto frame = make_frame(tree_of(
        taxa, {{"ab", 2.0}, {"abc", 3.0}, {"abcd", 1.0}, {"abcde", 2.5}}));
    const auto s = summarize_vectors(frame, gaussian_vectors(frame, n, rng));
    CHECK(s.rank() <= n - 1);
    CHECK(s.sample_size() > s.retained_dimension());
  }
}

TEST_CASE("candidate equal to the mean tree is always a member") {
  Rng rng(3);
  const auto frame = frame5();
  // Keep the vector mean exactly at the base coordinates by symmetrizing.
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < 10; ++i) {
    std::vector<double> v = frame->base_coords();
    const double e0 = 0.3 * rng.next_normal();
    const double e1 = 0.2 * rng.next_normal();
    v[0] += e0;
    v[1] += e1;
    vectors.push_back(v);
    v = frame->base_coords();
    v[0] -= e0;
    v[1] -= e1;
    vectors.push_back(std::move(v));
  }
  const auto s = summarize_vectors(frame, vectors);
  const ConfidenceReport r = confidence_member(s, frame->base(), 0.01);
  CHECK(r.statistic == doctest::Approx(0.0).scale(1).epsilon(1e-18));
  CHECK(r.member);
  CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("threshold at m=2 n=10 alpha=0.05 matches the oracle quantile") {
  Rng rng(4);
  const auto s = summarize_vectors(frame5(), gaussian_vectors(frame5(), 10, rng));
  REQUIRE(s.rank() == 2);
  const ConfidenceReport r =
      confidence_member(s, tree_of(letters(5), {{"ab", 2.1}, {"abc", 2.9}}),
                        0.05);
  // (m(n-1))/(n(n-m)) * F_{2,8}(0.95) with the frozen oracle value.
  CHECK(r.threshold ==
        doctest::Approx(0.225 * 4.458970107524511).epsilon(1e-6));
}

TEST_CASE("membership monotone in alpha and dual to the p-value") {
  Rng rng(5);
  const auto frame = frame5();
  const auto s = summarize_vectors(frame, gaussian_vectors(frame, 24, rng));
  for (double shift : {0.0, 0.05, 0.12, 0.3, 0.8}) {
    const PhyloTree candidate =
        tree_of(letters(5), {{"ab", 2.0 + shift}, {"abc", 3.0 - shift}});
    bool previous_member = false;
    for (double alpha : {0.20, 0.10, 0.05, 0.01, 0.001}) {
      const ConfidenceReport r = confidence_member(s, candidate, alpha);
      CHECK(r.member == (r.p_value > alpha));
      if (previous_member) CHECK(r.member);  // smaller alpha keeps members
      previous_member = r.member;
    }
  }
}

TEST_CASE("membership invariant under sample reordering") {
  Rng rng(6);
  const auto frame = frame5();
  auto vectors = gaussian_vectors(frame, 30, rng);
  const auto s1 = summarize_vectors(frame, vectors);
  std::reverse(vectors.begin(), vectors.end());
  const auto s2 = summarize_vectors(frame, vectors);
  const PhyloTree candidate =
      tree_of(letters(5), {{"ab", 2.2}, {"abc", 2.7}});
  for (double alpha : {0.10, 0.05, 0.01}) {
    CHECK(confidence_member(s1, candidate, alpha).member ==
          confidence_member(s2, candidate, alpha).member);
  }
}

TEST_CASE("duplicated coordinate reduces the frame by exactly one") {
  Rng rng(7);
  const auto taxa = letters(6);
  const auto frame = make_frame(
      tree_of(taxa, {{"ab", 2.0}, {"abc", 3.0}, {"abcd", 1.5}}));
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < 20; ++i) {
    const double x = 2.0 + 0.3 * rng.next_normal();
    const double y = 1.5 + 0.2 * rng.next_normal();
    vectors.push_back({x, x, y});  // first two coordinates collinear
  }
  const auto s = summarize_vectors(frame, vectors);
  CHECK(s.rank() == 2);
  REQUIRE(s.dropped().size() == 1);
  CHECK(s.dropped()[0].reason == DropReason::rank_deficient);
  const ConfidenceReport r = confidence_member(s, frame->base(), 0.05);
  CHECK(std::isfinite(r.statistic));
  CHECK(std::isfinite(r.p_value));
  CHECK(!s.warnings().empty());
}

TEST_CASE("marginal split test") {
  const auto frame = frame5();
  const auto taxa = letters(5);
  const Split tested = split_of(taxa, "ab");
  const std::size_t idx = *frame->index_of(tested);
  const std::size_t other = 1 - idx;

  SUBCASE("zero mean gives p one half") {
    std::vector<std::vector<double>> vectors;
    for (double v : {0.4, -0.4, 0.9, -0.9, 0.2, -0.2}) {
      std::vector<double> row(2);
      row[idx] = v;  // symmetric around exactly zero
      row[other] = 3.0 + 0.5 * v;
      vectors.push_back(std::move(row));
    }
    const auto s = summarize_vectors(frame, vectors);
    const auto r = split_support_test(s, tested);
    CHECK(r.statistic == doctest::Approx(0.0).scale(1));
    CHECK(r.p_value == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("strong positive mean gives a tiny p") {
    Rng rng(8);
    std::vector<std::vector<double>> vectors;
    for (std::size_t i = 0; i < 100; ++i) {
      std::vector<double> row(2);
      row[idx] = 5.0 + rng.next_normal();
      row[other] = 3.0 + rng.next_normal();
      vectors.push_back(std::move(row));
    }
    const auto s = summarize_vectors(frame, vectors);
    const auto r = split_support_test(s, tested);
    CHECK(r.p_value < 1e-6);
  }
  SUBCASE("degenerate positive coordinate reports p zero with a flag") {
    std::vector<std::vector<double>> vectors;
    for (double v : {3.1, 2.9, 3.05, 2.95}) {
      std::vector<double> row(2);
      row[idx] = 2.0;  // fixed across the sample
      row[other] = v;
      vectors.push_back(std::move(row));
    }
    const auto s = summarize_vectors(frame, vectors);
    const auto r = split_support_test(s, tested);
    CHECK(r.degenerate);
    CHECK(r.p_value == 0.0);
  }
  SUBCASE("unknown split is an error") {
    Rng rng(9);
    const auto s =
        summarize_vectors(frame5(), gaussian_vectors(frame5(), 8, rng));
    CHECK_THROWS_AS(split_support_test(s, split_of(taxa, "abd")), Error);
  }
}

TEST_CASE("joint split test tracks the pivot") {
  Rng rng(10);
  const auto frame = frame5();
  const auto taxa = letters(5);
  const auto s = summarize_vectors(frame, gaussian_vectors(frame, 40, rng));
  const auto weak =
      split_support_test(s, split_of(taxa, "ab"), SplitTestMode::joint);
  CHECK(weak.p_value > 0.0);
  CHECK(weak.p_value < 1.0);
  // Bonferroni never lowers a p-value.
  const auto adjusted = split_support_test(s, split_of(taxa, "ab"),
                                           SplitTestMode::joint, true);
  CHECK(adjusted.p_value >= weak.p_value);
}

TEST_CASE("pca of the summary covariance") {
  SUBCASE("identity covariance") {
    Rng rng(11);
    std::vector<std::vector<double>> vectors;
    // Orthogonal symmetric design: covariance exactly diagonal.
    const double a = 1.0;
    vectors.push_back({2.0 + a, 3.0});
    vectors.push_back({2.0 - a, 3.0});
    vectors.push_back({2.0, 3.0 + a});
    vectors.push_back({2.0, 3.0 - a});
    const auto s = summarize_vectors(frame5(), vectors);
    const auto p = pca(s);
    CHECK(p.eigenvalues[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p.eigenvalues[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("rank-one analytic case") {
    const auto s = summarize_vectors(frame5(), {{1.0, 2.0}, {3.0, 4.0}});
    const auto p = pca(s);
    REQUIRE(p.eigenvalues.size() == 1);  // retained frame is 1-dimensional
    CHECK(p.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("reconstruction and trace") {
    Rng rng(12);
    const auto s =
        summarize_vectors(frame5(), gaussian_vectors(frame5(), 30, rng));
    const auto p = pca(s);
    double trace = 0.0;
    for (std::size_t i = 0; i < 2; ++i) trace += s.covariance()(i, i);
    double sum = 0.0;
    for (double v : p.eigenvalues) sum += v;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        double rebuilt = 0.0;
        for (std::size_t k = 0; k < 2; ++k)
          rebuilt += p.eigenvalues[k] * p.eigenvectors(i, k) *
                     p.eigenvectors(j, k);
        CHECK(rebuilt ==
              doctest::Approx(s.covariance()(i, j)).scale(1).epsilon(1e-10));
      }
  }
}

TEST_CASE("pca recovers a prescribed decaying spectrum") {
  // Anisotropic generator on a 10-taxon base: sigma has eigenvalues
  // 0.04 * (0.7)^k along rotated axes; with n = 400 the sample spectrum
  // tracks the truth within sampling error.
  Rng rng(2718);
  const auto taxa = letters(10);
  const auto base = make_frame(random_binary_tree(taxa, rng, 1.0, 2.0));
  const std::size_t m = base->dimension();
  REQUIRE(m == 7);

  std::vector<double> spectrum(m);
  for (std::size_t k = 0; k < m; ++k)
    spectrum[k] = 0.04 * std::pow(0.7, static_cast<double>(k));

  // Random rotation via Gram-Schmidt on Gaussian columns.
  Matrix q(m);
  for (std::size_t col = 0; col < m; ++col) {
    std::vector<double> v(m);
    for (auto& x : v) x = rng.next_normal();
    for (std::size_t prev = 0; prev < col; ++prev) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += v[i] * q(i, prev);
      for (std::size_t i = 0; i < m; ++i) v[i] -= dot * q(i, prev);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) q(i, col) = v[i] / norm;
  }
  GeneratorSpec spec;
  spec.base = base;
  spec.sigma = Matrix(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        spec.sigma(i, j) += spectrum[k] * q(i, k) * q(j, k);
  spec.seed = 31;

  TreeSampler sampler(spec, 0);
  std::vector<std::vector<double>> vectors;
  for (int i = 0; i < 400; ++i) vectors.push_back(sampler.sample().coords);
  const auto s = summarize_vectors(base, vectors);
  REQUIRE(s.rank() == m);
  const auto p = pca(s);
  for (std::size_t k = 0; k < m; ++k) {
    CHECK(p.eigenvalues[k] ==
          doctest::Approx(spectrum[k]).epsilon(0.35));
  }
  // Slow decay preserved: each step down is visible but bounded.
  for (std::size_t k = 0; k + 1 < m; ++k)
    CHECK(p.eigenvalues[k + 1] < p.eigenvalues[k]);
}

TEST_CASE("levene isotropy comparison on log-mapped coordinates") {
  // The variance-homogeneity workflow: per-split coordinate samples become
  // the groups. An anisotropic generator is flagged, an isotropic one is not.
  Rng rng(1414);
  const auto taxa = letters(6);
  const auto base = make_frame(
      tree_of(taxa, {{"ab", 1.5}, {"abc", 1.5}, {"abcd", 1.5}}));
  auto run = [&](double sd0, double sd1, double sd2, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.base = base;
    spec.sigma = Matrix(3);
    spec.sigma(0, 0) = sd0 * sd0;
    spec.sigma(1, 1) = sd1 * sd1;
    spec.sigma(2, 2) = sd2 * sd2;
    spec.seed = seed;
    TreeSampler sampler(spec, 0);
    std::vector<std::vector<double>> groups(3);
    for (int i = 0; i < 80; ++i) {
      const auto draw = sampler.sample();
      for (std::size_t k = 0; k < 3; ++k) groups[k].push_back(draw.coords[k]);
    }
    return levene_test(groups);
  };
  const LeveneResult anisotropic = run(0.02, 0.10, 0.30, 5);
  CHECK(anisotropic.p_value < 1e-6);
  const LeveneResult isotropic = run(0.12, 0.12, 0.12, 6);
  CHECK(isotropic.p_value > 0.01);
}

TEST_CASE("levene / Brown-Forsythe test") {
  SUBCASE("identical multisets give statistic zero") {
    const std::vector<std::vector<double>> groups{{1, 2, 3}, {3, 1, 2}};
    const auto r = levene_test(groups);
    CHECK(r.statistic == doctest::Approx(0.0).scale(1));
    CHECK(r.p_value == doctest::Approx(1.0));
  }
  SUBCASE("frozen reference value") {
    const std::vector<std::vector<double>> groups{{1, 2, 3}, {10, 20, 30}};
    const auto r = levene_test(groups);
    CHECK(r.statistic ==
          doctest::Approx(3.207920792079208).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(0.1477669257618933).epsilon(1e-9));
  }
  SUBCASE("degenerate groups rejected") {
    CHECK_THROWS_AS(
        levene_test(std::vector<std::vector<double>>{{1.0}, {2.0, 3.0}}),
        Error);
    CHECK_THROWS_AS(levene_test(std::vector<std::vector<double>>{{1.0, 2.0}}),
                    Error);
  }
  SUBCASE("null p-values approximately uniform") {
    // The F reference on absolute deviations is asymptotic; groups of 40 keep
    // the Kolmogorov distance comfortably under 0.05 (small groups run
    // conservative).
    Rng rng(555);
    std::vector<double> ps;
    for (int rep = 0; rep < 2000; ++rep) {
      std::vector<std::vector<double>> groups(3);
      for (auto& g : groups)
        for (int i = 0; i < 40; ++i) g.push_back(rng.next_normal());
      ps.push_back(levene_test(groups).p_value);
    }
    std::sort(ps.begin(), ps.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      ks = std::max(ks, std::abs((i + 1.0) / ps.size() - ps[i]));
      ks = std::max(ks, std::abs(ps[i] - double(i) / ps.size()));
    }
    CHECK(ks < 0.05);
  }
}

TEST_CASE("near-zero mean branches drop out of the retained frame") {
  // One coordinate hovers just above the interior guard but below the solver
  // tolerance: it leaves the pivot with a boundary_mean drop, yet candidates
  // are not pinned to it (the sample genuinely varies there).
  const auto taxa = letters(5);
  const auto frame =
      make_frame(tree_of(taxa, {{"ab", 1e-9}, {"abc", 3.0}}));
  const std::size_t tiny = *frame->index_of(split_of(taxa, "ab"));
  const std::size_t big = 1 - tiny;
  Rng rng(13);
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < 16; ++i) {
    std::vector<double> row(2);
    row[tiny] = 1e-9 + 2e-10 * rng.next_normal();
    row[big] = 3.0 + 0.2 * rng.next_normal();
    vectors.push_back(std::move(row));
  }
  const auto s = summarize_vectors(frame, vectors, /*boundary_tolerance=*/1e-8);
  CHECK(s.rank() == 1);
  REQUIRE(s.dropped().size() == 1);
  CHECK(s.dropped()[0].reason == DropReason::boundary_mean);
  CHECK(s.retained_indices() == std::vector<std::size_t>{big});
  // A candidate that grows the near-zero branch is judged on the retained
  // coordinate only, not excluded by a fixed-value conflict.
  const auto r = confidence_member(
      s, tree_of(taxa, {{"ab", 0.4}, {"abc", 3.0}}), 0.05);
  CHECK_FALSE(r.fixed_coordinate_conflict);
  CHECK(std::isfinite(r.p_value));
}

TEST_CASE("tree-level summarize wires the pipeline together") {
  const auto taxa = letters(5);
  const auto truth = make_frame(
      tree_of(taxa, {{"ab", 1.0}, {"abc", 1.2}}, {0.2, 0.2, 0.2, 0.2, 0.2}));
  Matrix sigma(2);
  sigma(0, 0) = 0.05 * 0.05;
  sigma(1, 1) = 0.04 * 0.04;
  TreeSampler sampler({truth, sigma, 99}, 0);
  std::vector<PhyloTree> sample;
  for (int i = 0; i < 25; ++i) sample.push_back(sampler.sample().tree);
  MeanConfig config;
  config.tolerance = 1e-9;
  const auto s = summarize(sample, config);
  CHECK(s.sample_size() == 25);
  CHECK(s.dimension() == 2);
  CHECK(s.rank() == 2);
  // The mean tree (frame base) itself must belong to the confidence set.
  const auto r = confidence_member(s, s.frame()->base(), 0.05);
  CHECK(r.member);
  // The balance identity: the vector average sits at the base coordinates.
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(s.mean_vector()[i] ==
          doctest::Approx(s.frame()->base_coords()[i]).epsilon(1e-4).scale(1));
}
