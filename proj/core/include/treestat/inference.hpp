#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "treestat/coordinate_frame.hpp"
#include "treestat/frechet.hpp"
#include "treestat/linalg.hpp"
#include "treestat/logmap.hpp"
#include "treestat/phylo_tree.hpp"

namespace treestat {

enum class DropReason {
  zero_variance,      // branch fixed across the whole sample
  rank_deficient,     // linearly dependent on retained coordinates
  boundary_mean,      // mean branch length below the solver tolerance
};

struct DroppedCoordinate {
  std::size_t index = 0;  // position in the frame order
  Split split;
  DropReason reason = DropReason::zero_variance;
  double fixed_value = 0.0;  // sample mean of the dropped coordinate
};

/// Everything the confidence and testing operations consume: the fitted
/// frame, the log-mapped sample, its mean and covariance, and the pseudo-
/// inverse restricted to a full-rank retained coordinate subset.
class InferenceSummary {
 public:
  InferenceSummary() = default;

  const FramePtr& frame() const { return frame_; }
  std::size_t sample_size() const { return n_; }
  std::size_t dimension() const { return m_; }

  const std::vector<std::vector<double>>& vectors() const { return vectors_; }
  const std::vector<double>& mean_vector() const { return mean_vec_; }

  const Matrix& covariance() const { return covariance_; }
  /// m x m pseudo-inverse: the inverse of the retained block, zero elsewhere.
  const Matrix& precision() const { return precision_; }

  std::size_t rank() const { return retained_.size(); }
  std::size_t retained_dimension() const { return retained_.size(); }
  const std::vector<std::size_t>& retained_indices() const { return retained_; }
  bool reduced() const { return !dropped_.empty(); }
  const std::vector<DroppedCoordinate>& dropped() const { return dropped_; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string message) {
    warnings_.push_back(std::move(message));
  }

  /// Split names (canonical-side label strings) for the retained coordinates.
  std::vector<std::string> retained_split_names() const;

  friend InferenceSummary summarize_vectors(FramePtr frame,
                                            std::vector<std::vector<double>>
                                                vectors,
                                            double boundary_tolerance);

 private:
  FramePtr frame_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<double>> vectors_;
  std::vector<double> mean_vec_;
  Matrix covariance_;
  Matrix precision_;
  std::vector<std::size_t> retained_;
  std::vector<DroppedCoordinate> dropped_;
  std::vector<std::string> warnings_;
};

/// Fits the mean tree, log-maps the sample around it, and estimates the
/// covariance. Requires n >= 2 and, after rank reduction, n > m'.
InferenceSummary summarize(std::span<const PhyloTree> trees,
                           const MeanConfig& config = {});

/// Vector-level entry point: builds the summary from already log-mapped
/// coordinates in the given frame. Used by summarize() after fitting, and
/// directly by calibration studies that control the sampling distribution.
InferenceSummary summarize_vectors(FramePtr frame,
                                   std::vector<std::vector<double>> vectors,
                                   double boundary_tolerance = 0.0);

struct ConfidenceReport {
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;
  bool member = false;
  double p_value = 1.0;
  /// Candidate disagrees with a fixed (zero-variance) coordinate; excluded
  /// with p 0 regardless of the quadratic form.
  bool fixed_coordinate_conflict = false;
  std::vector<std::string> warnings;
};

/// Mahalanobis form (mean - Phi(candidate))^T S^+ (mean - Phi(candidate))
/// on the retained coordinates.
double confidence_statistic(const InferenceSummary& summary,
                            const PhyloTree& candidate);

/// Membership of `candidate` in the 100(1-alpha)% confidence set, using the
/// scaled-F pivot with (m', n - m') degrees of freedom.
ConfidenceReport confidence_member(const InferenceSummary& summary,
                                   const PhyloTree& candidate, double alpha);

enum class SplitTestMode { marginal, joint };

struct SplitTestResult {
  Split split;
  SplitTestMode mode = SplitTestMode::marginal;
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // zero-variance coordinate; p reported per fix
  std::string note;
};

/// Tests the null "the true mean tree lacks this branch" against positive
/// support. Marginal mode: one-sided t on the coordinate. Joint mode:
/// Mahalanobis distance from the mean vector to the half-space where the
/// coordinate is non-positive, referred to the confidence-set pivot.
SplitTestResult split_support_test(const InferenceSummary& summary,
                                   const Split& split,
                                   SplitTestMode mode = SplitTestMode::marginal,
                                   bool bonferroni = false);

struct PcaResult {
  std::vector<double> eigenvalues;          // descending
  Matrix eigenvectors;                      // columns, retained coordinates
  std::vector<std::size_t> coordinate_indices;  // frame positions of rows
};

/// Spectral decomposition of the covariance on the retained coordinates.
PcaResult pca(const InferenceSummary& summary);

struct LeveneResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t group_count = 0;
  std::size_t total_count = 0;
};

/// Brown-Forsythe variance-homogeneity test: one-way F on absolute deviations
/// from group medians, p from F(k-1, N-k). Each group needs >= 2 values.
LeveneResult levene_test(std::span<const std::vector<double>> groups);

}  // namespace treestat
