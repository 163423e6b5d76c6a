#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "treestat/phylo_tree.hpp"

namespace treestat {

struct GeodesicOptions {
  /// When set, pendant edge differences enter the metric as an extra
  /// Euclidean factor. Off by default: the log map and everything downstream
  /// work on internal splits only.
  bool include_pendant = false;
};

/// One block of the support decomposition: the source-side splits collapse
/// while the target-side splits grow, with the crossing ordered by the ratio
/// of side norms.
struct SupportPair {
  std::vector<std::pair<Split, double>> source_splits;  // dropped, with lengths
  std::vector<std::pair<Split, double>> target_splits;  // added, with lengths
  double source_norm = 0.0;
  double target_norm = 0.0;

  double ratio() const { return source_norm / target_norm; }
};

/// A split carried through the whole path, shrinking or growing linearly.
/// Splits of one endpoint that are compatible with every split of the other
/// endpoint appear here with the absent side's length equal to zero.
struct SharedSplit {
  Split split;
  double source_length = 0.0;
  double target_length = 0.0;
};

/// The support-pair description of the shortest path between two trees.
class Geodesic {
 public:
  Geodesic(PhyloTree source, PhyloTree target, std::vector<SharedSplit> shared,
           std::vector<SupportPair> support, GeodesicOptions options);

  const PhyloTree& source() const { return source_; }
  const PhyloTree& target() const { return target_; }
  const std::vector<SharedSplit>& shared() const { return shared_; }
  const std::vector<SupportPair>& support() const { return support_; }
  const GeodesicOptions& options() const { return options_; }

  /// Path length (the geodesic distance between the endpoints).
  double length() const { return length_; }

  /// Tree at arc-length fraction lambda in [0, 1]; lambda 0 and 1 return the
  /// endpoints exactly. Splits whose interpolated length reaches zero are
  /// omitted, so boundary crossings produce genuine boundary trees.
  PhyloTree point(double lambda) const;

 private:
  PhyloTree source_;
  PhyloTree target_;
  std::vector<SharedSplit> shared_;
  std::vector<SupportPair> support_;
  GeodesicOptions options_;
  double length_ = 0.0;
};

/// Computes the geodesic between two trees on the same taxon set. Zero-length
/// internal splits are dropped before the decomposition. Deterministic.
Geodesic geodesic(const PhyloTree& t1, const PhyloTree& t2,
                  GeodesicOptions options = {});

/// Geodesic distance; equals geodesic(t1, t2, options).length().
double distance(const PhyloTree& t1, const PhyloTree& t2,
                GeodesicOptions options = {});

/// Upper bound from the single-support-pair path: shared splits interpolate,
/// every other split collapses in one block. Equals the distance exactly when
/// every non-shared split pair is incompatible.
double cone_distance(const PhyloTree& t1, const PhyloTree& t2,
                     GeodesicOptions options = {});

PhyloTree point_on_geodesic(const Geodesic& g, double lambda);

}  // namespace treestat
