#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "treestat/split.hpp"
#include "treestat/taxon_set.hpp"

namespace treestat {

/// An unrooted phylogenetic tree on a fixed taxon set: a collection of
/// pairwise-compatible weighted internal splits plus per-taxon pendant edge
/// lengths. Immutable after construction and safe to share across threads.
class PhyloTree {
 public:
  /// Validates the split set (internal, compatible, correctly sized) and the
  /// lengths (finite, non-negative). `pendant` may be empty, meaning all
  /// pendant lengths are zero.
  PhyloTree(TaxonSetPtr taxa, std::map<Split, double> internal_splits,
            std::vector<double> pendant_lengths = {});

  static PhyloTree star(TaxonSetPtr taxa, std::vector<double> pendant = {});

  const TaxonSetPtr& taxa() const { return taxa_; }
  std::size_t taxon_count() const { return taxa_->size(); }

  const std::map<Split, double>& internal_splits() const { return internal_; }
  const std::vector<double>& pendant_lengths() const { return pendant_; }

  std::size_t split_count() const { return internal_.size(); }

  /// True when the tree occupies a top-dimensional orthant (k-3 internal
  /// splits on k taxa).
  bool is_binary() const { return internal_.size() == taxa_->size() - 3; }

  /// Smallest internal length, or +infinity for a star tree.
  double min_internal_length() const;

  bool has_split(const Split& s) const { return internal_.count(s) != 0; }

  /// Length of an internal split, 0.0 when absent.
  double split_length(const Split& s) const;

  bool same_topology(const PhyloTree& other) const;

  /// Exact equality: taxa, split maps, and pendant lengths all identical.
  bool operator==(const PhyloTree& other) const;

  /// Identity as a point of tree space: zero-length internal splits are
  /// ignored, pendant lengths still compared exactly.
  bool equivalent(const PhyloTree& other) const;

 private:
  TaxonSetPtr taxa_;
  std::map<Split, double> internal_;
  std::vector<double> pendant_;
};

/// Builds a tree from weighted splits; the inverse of split extraction.
/// Throws Error on incompatible pairs or too many splits for the taxon count.
PhyloTree tree_from_splits(TaxonSetPtr taxa,
                           const std::map<Split, double>& weighted_splits,
                           std::vector<double> pendant_lengths = {});

/// The two nearest-neighbor-interchange alternatives obtained by collapsing
/// `edge` (which must be an internal split of the binary tree) and re-resolving
/// the resulting degree-4 vertex the other two ways. Returned in ascending
/// canonical-mask order.
std::pair<Split, Split> nni_alternatives(const PhyloTree& tree,
                                         const Split& edge);

namespace detail {

/// Rooted laminar hierarchy over a compatible split family; shared by the
/// Newick writer and the NNI machinery. Node 0 is the synthetic root (the
/// side of every split containing taxon 0).
struct ClusterNode {
  Bitset cluster;                     // taxa below this node
  double length = 0.0;                // edge length above this node
  bool is_leaf = false;
  std::size_t leaf_index = 0;         // valid when is_leaf
  std::vector<std::size_t> children;  // indices into the hierarchy
  std::size_t parent = 0;
};

std::vector<ClusterNode> build_hierarchy(const PhyloTree& tree);

}  // namespace detail

}  // namespace treestat
