#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "treestat/phylo_tree.hpp"

namespace treestat {

enum class PassOrder {
  random_permutation,  // fresh seeded shuffle every pass
  cyclic,              // input order every pass
};

/// Parameters of the streaming proximal-point iteration for the sample mean.
struct MeanConfig {
  /// Maximum number of full passes over the sample. Concentrated samples
  /// converge within a handful of passes; widely spread samples may exhaust
  /// the budget, which the result reports via converged = false.
  std::size_t max_iterations = 1000;
  /// Convergence: geodesic displacement of the iterate across one full pass.
  double tolerance = 1e-8;
  /// Step for global step counter k (0-based); defaults to 1/(k+1), the
  /// streaming-average schedule. Values must stay in (0, 1].
  std::function<double(std::uint64_t)> step_schedule;
  PassOrder order = PassOrder::random_permutation;
  std::uint64_t seed = 0;
};

struct MeanResult {
  PhyloTree mean;
  double frechet_value = 0.0;    // sample Frechet function at the mean
  std::size_t iterations_used = 0;  // full passes
  bool converged = false;
  /// True when the mean sits on (or within tolerance of) an orthant boundary:
  /// some internal length below tolerance, or a split collapsed entirely.
  bool boundary_flag = false;
};

/// Approximate minimizer of (1/n) sum gamma(T_i, u)^2 via a streaming
/// proximal-point iteration: each step moves the iterate a fraction
/// step_k along the geodesic toward the next sample tree. Deterministic
/// given (seed, order).
MeanResult frechet_mean(std::span<const PhyloTree> trees,
                        const MeanConfig& config = {});

/// (1/n) sum gamma(T_i, u)^2 over internal splits.
double frechet_function(std::span<const PhyloTree> trees, const PhyloTree& u);

}  // namespace treestat
