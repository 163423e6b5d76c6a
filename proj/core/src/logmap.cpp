#include "treestat/logmap.hpp"

#include <cmath>

#include "treestat/error.hpp"
#include "treestat/geodesic.hpp"

namespace treestat {

namespace {

bool splits_within_base(const PhyloTree& target, const CoordinateFrame& frame) {
  for (const auto& [s, len] : target.internal_splits()) {
    if (len <= 0.0) continue;
    if (!frame.base().has_split(s)) return false;
  }
  return true;
}

}  // namespace

LogMapVector log_map_at(const FramePtr& frame, const PhyloTree& target,
                        double interval_fraction) {
  if (!frame) throw Error("log_map requires a frame");
  if (!(interval_fraction > 0.0 && interval_fraction < 1.0))
    throw Error("log_map interval fraction must lie strictly inside (0, 1)");
  if (!same_taxa(frame->base().taxa(), target.taxa()))
    throw Error("log_map target must share the frame's taxon set");

  const std::size_t m = frame->dimension();
  LogMapVector out{frame, std::vector<double>(m, 0.0)};

  // Same-orthant targets (and their boundary trees) are read off directly.
  if (splits_within_base(target, *frame)) {
    for (std::size_t i = 0; i < m; ++i)
      out.coords[i] = target.split_length(frame->order()[i]);
    return out;
  }

  const Geodesic g = geodesic(frame->base(), target);
  const double gamma = g.length();
  if (g.support().empty())
    throw Error("log_map: cross-orthant target produced no support blocks");

  // Coordinate velocity of the path at the base: shared splits head linearly
  // for the target length, splits inside support block j shrink at the rate
  // that reaches zero when the block crosses.
  std::vector<double> velocity(m, 0.0);
  for (const auto& s : g.shared()) {
    const auto idx = frame->index_of(s.split);
    if (!idx)
      throw Error("log_map: shared split missing from a binary base frame");
    velocity[*idx] = s.target_length - s.source_length;
  }
  for (const auto& block : g.support()) {
    const double rate =
        (block.source_norm + block.target_norm) / block.source_norm;
    for (const auto& [split, len] : block.source_splits) {
      const auto idx = frame->index_of(split);
      if (!idx)
        throw Error("log_map: support split missing from the base frame");
      velocity[*idx] = -len * rate;
    }
  }

  // Point at `lambda` inside the first leg, expressed as an offset from the
  // base coordinates; normalized and rescaled to the full geodesic length.
  const auto& first = g.support().front();
  const double lambda_max =
      first.source_norm / (first.source_norm + first.target_norm);
  const double lambda = interval_fraction * lambda_max;

  double offset_norm_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = lambda * velocity[i];
    offset_norm_sq += d * d;
  }
  const double offset_norm = std::sqrt(offset_norm_sq);
  if (offset_norm == 0.0)
    throw Error("log_map: degenerate direction vector");

  const double scale = gamma / offset_norm;
  const auto& base_coords = frame->base_coords();
  for (std::size_t i = 0; i < m; ++i)
    out.coords[i] = base_coords[i] + lambda * velocity[i] * scale;
  return out;
}

LogMapVector log_map(const FramePtr& frame, const PhyloTree& target) {
  return log_map_at(frame, target, 0.5);
}

std::vector<LogMapVector> batch_log_map(const FramePtr& frame,
                                        std::span<const PhyloTree> trees) {
  std::vector<LogMapVector> out;
  out.reserve(trees.size());
  for (const auto& tree : trees) out.push_back(log_map(frame, tree));
  return out;
}

}  // namespace treestat
