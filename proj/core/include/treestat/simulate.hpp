#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "treestat/coordinate_frame.hpp"
#include "treestat/frechet.hpp"
#include "treestat/linalg.hpp"
#include "treestat/phylo_tree.hpp"
#include "treestat/rng.hpp"

namespace treestat {

/// Synthetic tree generator: Gaussian draws in the base frame's chart, pushed
/// back into tree space. The chart inverse is local: a coordinate drawn
/// non-positive swaps the base split for a fixed NNI alternative at the
/// absolute length. Draws whose swapped splits are mutually incompatible are
/// rejected and redrawn.
struct GeneratorSpec {
  FramePtr base;
  Matrix sigma;  // m x m PSD, squared branch-length units
  std::uint64_t seed = 0;
};

struct SampleDraw {
  PhyloTree tree;
  std::vector<double> coords;  // the accepted Gaussian draw
};

class TreeSampler {
 public:
  /// `stream` selects a counter-based sub-stream of the generator seed, so
  /// replicate r draws the same trees in serial and parallel runs.
  TreeSampler(const GeneratorSpec& spec, std::uint64_t stream = 0);

  SampleDraw sample();
  std::vector<SampleDraw> sample_many(std::size_t count);

  std::size_t rejection_count() const { return rejections_; }
  std::size_t draw_count() const { return draws_; }

 private:
  FramePtr base_;
  Matrix sigma_root_;
  std::vector<std::pair<Split, Split>> alternatives_;  // per coordinate
  Rng rng_;
  std::size_t rejections_ = 0;
  std::size_t draws_ = 0;
  std::size_t window_attempts_ = 0;
  std::size_t window_rejections_ = 0;
};

struct CoverageResult {
  std::vector<double> alphas;
  std::vector<double> coverage;  // fraction of replicates covering the base
  std::size_t replicates = 0;
  std::size_t sample_size = 0;
  std::size_t skipped = 0;            // replicates whose summary failed
  std::size_t total_rejections = 0;   // generator redraws across replicates
};

/// Monte Carlo coverage of the confidence-set procedure: per replicate, draw
/// n trees, fit the summary, and test whether the generator's base tree lands
/// in the confidence set at each alpha. Replicates run in parallel on
/// independent sub-streams; results are deterministic given the generator
/// seed.
CoverageResult coverage_experiment(const GeneratorSpec& spec, std::size_t n,
                                   std::size_t replicates,
                                   std::vector<double> alphas,
                                   const MeanConfig& config = {},
                                   std::size_t threads = 0);

}  // namespace treestat
