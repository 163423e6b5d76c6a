#include "treestat/coordinate_frame.hpp"

#include <algorithm>

#include "treestat/error.hpp"

namespace treestat {

CoordinateFrame::CoordinateFrame(PhyloTree base) : base_(std::move(base)) {
  if (!base_.is_binary())
    throw Error(
        "coordinate frame requires a binary base tree; resolve or drop "
        "degenerate splits first");
  order_.reserve(base_.split_count());
  for (const auto& [s, len] : base_.internal_splits()) {
    if (len < kMinInteriorLength)
      throw Error(
          "coordinate frame requires a strictly interior base tree "
          "(internal length below guard)");
    order_.push_back(s);
  }
  // Contract: ascending canonical-mask order (std::map iteration already
  // delivers it; the sort pins it down).
  std::sort(order_.begin(), order_.end());
  coords_.reserve(order_.size());
  for (const auto& s : order_) coords_.push_back(base_.split_length(s));
}

std::optional<std::size_t> CoordinateFrame::index_of(const Split& s) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), s);
  if (it == order_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - order_.begin());
}

}  // namespace treestat
