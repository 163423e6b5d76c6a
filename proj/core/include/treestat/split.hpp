#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>

#include "treestat/bitset.hpp"
#include "treestat/taxon_set.hpp"

namespace treestat {

/// A bipartition of the taxon set, stored in canonical form: the retained
/// mask is the side that does not contain taxon 0. Constructing a Split from
/// either side of the bipartition therefore yields equal values.
class Split {
 public:
  /// `side` is one block of the bipartition. Throws Error if either side is
  /// empty.
  Split(const Bitset& side, std::size_t taxon_count);

  /// Convenience constructor from taxon indices of one side.
  Split(std::initializer_list<std::size_t> side_indices,
        std::size_t taxon_count);

  const Bitset& mask() const { return mask_; }
  std::size_t taxon_count() const { return taxon_count_; }

  std::size_t side_size() const { return mask_.count(); }

  /// Internal splits have at least two taxa on each side; all others are
  /// pendant (leaf) bipartitions.
  bool is_internal() const {
    const std::size_t k = side_size();
    return k >= 2 && taxon_count_ - k >= 2;
  }

  /// Four-intersection compatibility test: the two bipartitions can occur on
  /// one tree iff some pair of their sides is disjoint. With canonical masks
  /// this reduces to disjointness or nesting of the masks. Both splits must
  /// live over the same taxon universe.
  bool compatible_with(const Split& other) const;

  /// Labels of the canonical side in taxon order, joined by '|'.
  std::string to_string(const TaxonSet& taxa) const;

  bool operator==(const Split& other) const = default;
  std::strong_ordering operator<=>(const Split& other) const = default;

 private:
  Bitset mask_;
  std::size_t taxon_count_ = 0;
};

/// Parses the `to_string` form ("b|c|d") back into a Split.
Split split_from_string(const std::string& text, const TaxonSet& taxa);

}  // namespace treestat
