#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "treestat/phylo_tree.hpp"

namespace treestat {

/// The coordinate chart anchored at a base tree: a fixed ordering of the base
/// tree's internal splits. The base must be binary and strictly interior
/// (every internal length above kMinInteriorLength); charts anchored on
/// orthant boundaries are rejected rather than guessed at.
class CoordinateFrame {
 public:
  static constexpr double kMinInteriorLength = 1e-12;

  explicit CoordinateFrame(PhyloTree base);

  const PhyloTree& base() const { return base_; }
  std::size_t dimension() const { return order_.size(); }

  /// Base splits sorted by canonical bitmask value; fixed for the frame's
  /// lifetime so that every log-map vector shares one coordinate order.
  const std::vector<Split>& order() const { return order_; }
  const std::vector<double>& base_coords() const { return coords_; }

  std::optional<std::size_t> index_of(const Split& s) const;

 private:
  PhyloTree base_;
  std::vector<Split> order_;
  std::vector<double> coords_;
};

using FramePtr = std::shared_ptr<const CoordinateFrame>;

inline FramePtr make_frame(PhyloTree base) {
  return std::make_shared<const CoordinateFrame>(std::move(base));
}

}  // namespace treestat
