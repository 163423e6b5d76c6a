#include "treestat/frechet.hpp"

#include <numeric>
#include <vector>

#include "treestat/error.hpp"
#include "treestat/geodesic.hpp"
#include "treestat/rng.hpp"

namespace treestat {

namespace {

bool on_boundary(const PhyloTree& tree, double tolerance) {
  if (tree.split_count() < tree.taxon_count() - 3) return true;
  return tree.min_internal_length() < tolerance;
}

}  // namespace

MeanResult frechet_mean(std::span<const PhyloTree> trees,
                        const MeanConfig& config) {
  if (trees.empty()) throw Error("frechet_mean requires a non-empty sample");
  for (const auto& t : trees)
    if (!same_taxa(t.taxa(), trees.front().taxa()))
      throw Error("frechet_mean sample trees must share one taxon set");
  if (!(config.tolerance > 0.0))
    throw Error("frechet_mean tolerance must be positive");

  const auto step_at = [&](std::uint64_t k) {
    const double s =
        config.step_schedule ? config.step_schedule(k) : 1.0 / double(k + 1);
    if (!(s > 0.0 && s <= 1.0))
      throw Error("step schedule values must lie in (0, 1]");
    return s;
  };

  if (trees.size() == 1) {
    MeanResult out{trees.front(), 0.0, 0, true,
                   on_boundary(trees.front(), config.tolerance)};
    return out;
  }

  Rng rng(config.seed);
  std::vector<std::size_t> visit(trees.size());
  std::iota(visit.begin(), visit.end(), 0);

  PhyloTree iterate = trees.front();
  std::uint64_t k = 0;
  std::size_t passes = 0;
  bool converged = false;
  while (passes < config.max_iterations) {
    if (config.order == PassOrder::random_permutation) rng.shuffle(visit);
    const PhyloTree pass_start = iterate;
    for (const std::size_t index : visit) {
      const double step = step_at(k++);
      iterate = geodesic(iterate, trees[index]).point(step);
    }
    ++passes;
    if (distance(pass_start, iterate) < config.tolerance) {
      converged = true;
      break;
    }
  }

  MeanResult out{std::move(iterate), 0.0, passes, converged, false};
  out.frechet_value = frechet_function(trees, out.mean);
  out.boundary_flag = on_boundary(out.mean, config.tolerance);
  return out;
}

double frechet_function(std::span<const PhyloTree> trees, const PhyloTree& u) {
  if (trees.empty())
    throw Error("frechet_function requires a non-empty sample");
  double total = 0.0;
  for (const auto& t : trees) {
    const double d = distance(t, u);
    total += d * d;
  }
  return total / static_cast<double>(trees.size());
}

}  // namespace treestat
