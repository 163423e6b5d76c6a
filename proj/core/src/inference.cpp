#include "treestat/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treestat/distributions.hpp"
#include "treestat/error.hpp"

namespace treestat {

namespace {

constexpr double kRankCutoff = 1e-10;      // relative eigen/pivot cutoff
constexpr double kZeroVarianceRel = 1e-24; // relative to max(1, mean^2)

double fixed_coordinate_tolerance(double mean_value) {
  return 1e-9 * std::max(1.0, std::abs(mean_value));
}

double pivot_scale(std::size_t n, std::size_t m) {
  return static_cast<double>(m) * static_cast<double>(n - 1) /
         (static_cast<double>(n) * static_cast<double>(n - m));
}

}  // namespace

std::vector<std::string> InferenceSummary::retained_split_names() const {
  std::vector<std::string> names;
  names.reserve(retained_.size());
  for (std::size_t idx : retained_)
    names.push_back(frame_->order()[idx].to_string(*frame_->base().taxa()));
  return names;
}

InferenceSummary summarize_vectors(FramePtr frame,
                                   std::vector<std::vector<double>> vectors,
                                   double boundary_tolerance) {
  if (!frame) throw Error("summarize requires a frame");
  const std::size_t n = vectors.size();
  if (n < 2) throw Error("summarize requires a sample of at least 2");
  const std::size_t m = frame->dimension();
  for (const auto& v : vectors)
    if (v.size() != m)
      throw Error("summarize: vector dimension does not match the frame");

  InferenceSummary s;
  s.frame_ = std::move(frame);
  s.n_ = n;
  s.m_ = m;
  s.vectors_ = std::move(vectors);

  s.mean_vec_.assign(m, 0.0);
  for (const auto& v : s.vectors_)
    for (std::size_t i = 0; i < m; ++i) s.mean_vec_[i] += v[i];
  for (auto& x : s.mean_vec_) x /= static_cast<double>(n);

  s.covariance_ = Matrix(m);
  for (const auto& v : s.vectors_) {
    for (std::size_t i = 0; i < m; ++i) {
      const double di = v[i] - s.mean_vec_[i];
      for (std::size_t j = i; j < m; ++j) {
        s.covariance_(i, j) += di * (v[j] - s.mean_vec_[j]);
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      s.covariance_(i, j) /= static_cast<double>(n - 1);
      s.covariance_(j, i) = s.covariance_(i, j);
    }

  // Coordinate triage. Boundary-mean branches first (the frame is still a
  // valid binary chart, but the coordinate is degenerate in the sense of a
  // mean sitting essentially on the orthant wall), then exact zero-variance
  // branches, then a pivoted pass for collinear coordinates.
  std::vector<bool> excluded(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (boundary_tolerance > 0.0 &&
        s.frame_->base_coords()[i] < boundary_tolerance) {
      excluded[i] = true;
      s.dropped_.push_back({i, s.frame_->order()[i], DropReason::boundary_mean,
                            s.mean_vec_[i]});
      s.warnings_.push_back(
          "coordinate " +
          s.frame_->order()[i].to_string(*s.frame_->base().taxa()) +
          ": mean branch within tolerance of zero; dropped from the frame");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (excluded[i]) continue;
    const double threshold =
        kZeroVarianceRel * std::max(1.0, s.mean_vec_[i] * s.mean_vec_[i]);
    if (s.covariance_(i, i) <= threshold) {
      excluded[i] = true;
      s.dropped_.push_back({i, s.frame_->order()[i], DropReason::zero_variance,
                            s.mean_vec_[i]});
      s.warnings_.push_back(
          "coordinate " +
          s.frame_->order()[i].to_string(*s.frame_->base().taxa()) +
          ": zero sample variance; branch treated as fixed");
    }
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < m; ++i)
    if (!excluded[i]) candidates.push_back(i);

  Matrix working(candidates.size());
  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = 0; b < candidates.size(); ++b)
      working(a, b) = s.covariance_(candidates[a], candidates[b]);
  const std::vector<std::size_t> kept =
      pivoted_retained_columns(working, kRankCutoff);
  std::vector<bool> kept_flag(candidates.size(), false);
  for (std::size_t a : kept) kept_flag[a] = true;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    if (kept_flag[a]) {
      s.retained_.push_back(candidates[a]);
    } else {
      const std::size_t i = candidates[a];
      s.dropped_.push_back({i, s.frame_->order()[i],
                            DropReason::rank_deficient, s.mean_vec_[i]});
      s.warnings_.push_back(
          "coordinate " +
          s.frame_->order()[i].to_string(*s.frame_->base().taxa()) +
          ": linearly dependent on retained coordinates; dropped");
    }
  }
  std::sort(s.dropped_.begin(), s.dropped_.end(),
            [](const DroppedCoordinate& a, const DroppedCoordinate& b) {
              return a.index < b.index;
            });

  // An entirely degenerate sample (every coordinate fixed) leaves an empty
  // retained frame; the summary itself is still representable, and the
  // pivot-based operations reject it downstream.
  const std::size_t m_prime = s.retained_.size();
  if (n <= m_prime)
    throw Error("summarize: sample size must exceed the retained dimension (" +
                std::to_string(n) + " <= " + std::to_string(m_prime) + ")");

  Matrix retained_cov(m_prime);
  for (std::size_t a = 0; a < m_prime; ++a)
    for (std::size_t b = 0; b < m_prime; ++b)
      retained_cov(a, b) = s.covariance_(s.retained_[a], s.retained_[b]);
  const Matrix retained_prec = pseudo_inverse(retained_cov, kRankCutoff);

  s.precision_ = Matrix(m);
  for (std::size_t a = 0; a < m_prime; ++a)
    for (std::size_t b = 0; b < m_prime; ++b)
      s.precision_(s.retained_[a], s.retained_[b]) = retained_prec(a, b);

  return s;
}

InferenceSummary summarize(std::span<const PhyloTree> trees,
                           const MeanConfig& config) {
  if (trees.size() < 2) throw Error("summarize requires a sample of at least 2");
  MeanResult mean = frechet_mean(trees, config);
  if (mean.mean.split_count() < mean.mean.taxon_count() - 3 ||
      mean.mean.min_internal_length() < CoordinateFrame::kMinInteriorLength)
    throw Error(
        "summarize: the mean tree sits on an orthant boundary; the log-map "
        "chart (and hence the confidence procedure) is undefined there");

  FramePtr frame = make_frame(mean.mean);
  std::vector<std::vector<double>> coords;
  coords.reserve(trees.size());
  for (const auto& v : batch_log_map(frame, trees))
    coords.push_back(std::move(v.coords));

  InferenceSummary s = summarize_vectors(std::move(frame), std::move(coords),
                                         config.tolerance);
  if (!mean.converged)
    s.add_warning(
        "mean iteration stopped at the pass limit before reaching tolerance");
  return s;
}

double confidence_statistic(const InferenceSummary& summary,
                            const PhyloTree& candidate) {
  const LogMapVector phi = log_map(summary.frame(), candidate);
  std::vector<double> diff(summary.dimension());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = summary.mean_vector()[i] - phi.coords[i];
  return quadratic_form(summary.precision(), diff, diff);
}

ConfidenceReport confidence_member(const InferenceSummary& summary,
                                   const PhyloTree& candidate, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error("confidence level alpha must lie in (0, 1)");
  const std::size_t n = summary.sample_size();
  const std::size_t m = summary.retained_dimension();
  if (n <= m)
    throw Error("confidence_member requires n > retained dimension");

  ConfidenceReport report;
  report.alpha = alpha;
  if (m == 0) {
    // Every coordinate was degenerate: the confidence set collapses to the
    // single tree pinned by the fixed coordinates, at any level.
    report.statistic = 0.0;
    report.threshold = 0.0;
    report.member = true;
    report.p_value = 1.0;
    report.warnings.push_back(
        "retained frame is empty; membership decided by the fixed "
        "coordinates alone");
  } else {
    report.statistic = confidence_statistic(summary, candidate);
    const double scale = pivot_scale(n, m);
    report.threshold =
        scale * f_quantile(1.0 - alpha, static_cast<double>(m),
                           static_cast<double>(n - m));
    report.member = report.statistic < report.threshold;
    report.p_value = f_sf(report.statistic / scale, static_cast<double>(m),
                          static_cast<double>(n - m));
  }

  // A candidate that moves a coordinate the sample fixed with certainty is
  // excluded outright; the quadratic form cannot see those directions.
  // Rank-deficient and boundary-mean coordinates are merely outside the
  // pivot, not pinned, so they do not exclude anything.
  const LogMapVector phi = log_map(summary.frame(), candidate);
  for (const auto& drop : summary.dropped()) {
    if (drop.reason != DropReason::zero_variance) continue;
    const double delta = std::abs(phi.coords[drop.index] - drop.fixed_value);
    if (delta > fixed_coordinate_tolerance(drop.fixed_value)) {
      report.member = false;
      report.p_value = 0.0;
      report.fixed_coordinate_conflict = true;
      report.warnings.push_back(
          "candidate conflicts with fixed coordinate " +
          drop.split.to_string(*summary.frame()->base().taxa()));
    }
  }
  return report;
}

SplitTestResult split_support_test(const InferenceSummary& summary,
                                   const Split& split, SplitTestMode mode,
                                   bool bonferroni) {
  const auto idx = summary.frame()->index_of(split);
  if (!idx)
    throw Error("split_support_test: split is not a frame coordinate");
  const std::size_t n = summary.sample_size();
  const double mean = summary.mean_vector()[*idx];
  const double variance = summary.covariance()(*idx, *idx);

  SplitTestResult result{split, mode, 0.0, 1.0, false, ""};

  const double zero_threshold =
      kZeroVarianceRel * std::max(1.0, mean * mean);
  if (variance <= zero_threshold) {
    result.degenerate = true;
    if (mean > fixed_coordinate_tolerance(0.0)) {
      result.p_value = 0.0;
      result.note = "zero variance with positive mean: branch fixed present";
    } else {
      result.p_value = 1.0;
      result.note = "zero variance with non-positive mean: branch fixed absent";
    }
    return result;
  }

  if (mode == SplitTestMode::marginal) {
    const double t = mean / std::sqrt(variance / static_cast<double>(n));
    result.statistic = t;
    result.p_value = t_sf(t, static_cast<double>(n - 1));
  } else {
    const std::size_t m = summary.retained_dimension();
    if (n <= m)
      throw Error("split_support_test joint mode requires n > retained dim");
    const double excess = std::max(mean, 0.0);
    result.statistic = excess * excess / variance;
    const double scale = pivot_scale(n, m);
    result.p_value = f_sf(result.statistic / scale, static_cast<double>(m),
                          static_cast<double>(n - m));
  }
  if (bonferroni) {
    const double k = static_cast<double>(summary.retained_dimension());
    result.p_value = std::min(1.0, result.p_value * k);
  }
  return result;
}

PcaResult pca(const InferenceSummary& summary) {
  const auto& retained = summary.retained_indices();
  const std::size_t m = retained.size();
  Matrix cov(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      cov(a, b) = summary.covariance()(retained[a], retained[b]);
  EigenDecomposition eig = symmetric_eigen(cov);
  return PcaResult{std::move(eig.values), std::move(eig.vectors), retained};
}

LeveneResult levene_test(std::span<const std::vector<double>> groups) {
  const std::size_t k = groups.size();
  if (k < 2) throw Error("levene_test requires at least two groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2)
      throw Error("levene_test requires at least two values per group");
    total += g.size();
  }

  // Absolute deviations from group medians.
  std::vector<std::vector<double>> dev(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> sorted = groups[j];
    std::sort(sorted.begin(), sorted.end());
    const std::size_t nj = sorted.size();
    const double median = nj % 2 == 1
                              ? sorted[nj / 2]
                              : 0.5 * (sorted[nj / 2 - 1] + sorted[nj / 2]);
    dev[j].reserve(nj);
    for (double x : groups[j]) dev[j].push_back(std::abs(x - median));
  }

  double grand = 0.0;
  std::vector<double> group_mean(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (double z : dev[j]) group_mean[j] += z;
    grand += group_mean[j];
    group_mean[j] /= static_cast<double>(dev[j].size());
  }
  grand /= static_cast<double>(total);

  double between = 0.0;
  double within = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = group_mean[j] - grand;
    between += static_cast<double>(dev[j].size()) * d * d;
    for (double z : dev[j]) {
      const double e = z - group_mean[j];
      within += e * e;
    }
  }
  const double df1 = static_cast<double>(k - 1);
  const double df2 = static_cast<double>(total - k);

  LeveneResult result;
  result.group_count = k;
  result.total_count = total;
  if (within <= 0.0) {
    result.statistic = between > 0.0
                           ? std::numeric_limits<double>::infinity()
                           : 0.0;
    result.p_value = between > 0.0 ? 0.0 : 1.0;
    return result;
  }
  result.statistic = (between / df1) / (within / df2);
  result.p_value = f_sf(result.statistic, df1, df2);
  return result;
}

}  // namespace treestat
