#pragma once

#include <span>
#include <vector>

#include "treestat/coordinate_frame.hpp"
#include "treestat/phylo_tree.hpp"

namespace treestat {

/// Image of a tree under the modified log map: a point of R^m whose
/// coordinates follow the frame's split order. By construction the distance
/// from the frame's base coordinates equals the geodesic distance between the
/// base and the mapped tree.
struct LogMapVector {
  FramePtr frame;
  std::vector<double> coords;
};

/// Maps `target` into the frame's chart. Targets sharing the base topology
/// (including boundary trees whose splits are a subset of the base's) map to
/// their own coordinates; other targets map along the initial geodesic
/// segment, extended to the full geodesic length.
LogMapVector log_map(const FramePtr& frame, const PhyloTree& target);

/// As log_map, but evaluates the direction at the given fraction of the
/// first-crossing parameter interval (0 < fraction < 1). The result does not
/// depend on the fraction; exposed so tests can confirm that.
LogMapVector log_map_at(const FramePtr& frame, const PhyloTree& target,
                        double interval_fraction);

/// Element-wise log map, order preserved.
std::vector<LogMapVector> batch_log_map(const FramePtr& frame,
                                        std::span<const PhyloTree> trees);

}  // namespace treestat
