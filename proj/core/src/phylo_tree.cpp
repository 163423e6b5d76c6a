#include "treestat/phylo_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treestat/error.hpp"

namespace treestat {

PhyloTree::PhyloTree(TaxonSetPtr taxa, std::map<Split, double> internal_splits,
                     std::vector<double> pendant_lengths)
    : taxa_(std::move(taxa)),
      internal_(std::move(internal_splits)),
      pendant_(std::move(pendant_lengths)) {
  if (!taxa_) throw Error("tree requires a taxon set");
  const std::size_t n = taxa_->size();
  if (n < 3) throw Error("trees require at least 3 taxa");
  if (pendant_.empty()) pendant_.assign(n, 0.0);
  if (pendant_.size() != n)
    throw Error("pendant length vector does not match taxon count");
  for (double p : pendant_)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error("pendant lengths must be finite and non-negative");
  if (internal_.size() > n - 3)
    throw Error("too many internal splits for " + std::to_string(n) +
                " taxa: " + std::to_string(internal_.size()));
  for (auto it = internal_.begin(); it != internal_.end(); ++it) {
    const auto& [s, len] = *it;
    if (s.taxon_count() != n)
      throw Error("split taxon universe does not match the tree");
    if (!s.is_internal())
      throw Error("pendant bipartitions cannot be internal splits");
    if (!(len >= 0.0) || !std::isfinite(len))
      throw Error("internal split lengths must be finite and non-negative");
    for (auto jt = std::next(it); jt != internal_.end(); ++jt) {
      if (!s.compatible_with(jt->first))
        throw Error("incompatible split pair in tree construction");
    }
  }
}

PhyloTree PhyloTree::star(TaxonSetPtr taxa, std::vector<double> pendant) {
  return PhyloTree(std::move(taxa), {}, std::move(pendant));
}

double PhyloTree::min_internal_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [s, len] : internal_) m = std::min(m, len);
  return m;
}

double PhyloTree::split_length(const Split& s) const {
  auto it = internal_.find(s);
  return it == internal_.end() ? 0.0 : it->second;
}

bool PhyloTree::same_topology(const PhyloTree& other) const {
  if (!same_taxa(taxa_, other.taxa_)) return false;
  if (internal_.size() != other.internal_.size()) return false;
  auto it = internal_.begin();
  auto jt = other.internal_.begin();
  for (; it != internal_.end(); ++it, ++jt)
    if (it->first != jt->first) return false;
  return true;
}

bool PhyloTree::operator==(const PhyloTree& other) const {
  return same_taxa(taxa_, other.taxa_) && internal_ == other.internal_ &&
         pendant_ == other.pendant_;
}

bool PhyloTree::equivalent(const PhyloTree& other) const {
  if (!same_taxa(taxa_, other.taxa_)) return false;
  if (pendant_ != other.pendant_) return false;
  auto nonzero = [](const std::map<Split, double>& m) {
    std::map<Split, double> out;
    for (const auto& [s, len] : m)
      if (len > 0.0) out.emplace(s, len);
    return out;
  };
  return nonzero(internal_) == nonzero(other.internal_);
}

PhyloTree tree_from_splits(TaxonSetPtr taxa,
                           const std::map<Split, double>& weighted_splits,
                           std::vector<double> pendant_lengths) {
  return PhyloTree(std::move(taxa), weighted_splits,
                   std::move(pendant_lengths));
}

namespace detail {

std::vector<ClusterNode> build_hierarchy(const PhyloTree& tree) {
  const std::size_t n = tree.taxon_count();
  std::vector<ClusterNode> nodes;
  nodes.reserve(1 + n + tree.split_count());

  // Node 0: synthetic root holding all taxa.
  ClusterNode root;
  root.cluster = Bitset(n);
  for (std::size_t i = 0; i < n; ++i) root.cluster.set(i);
  nodes.push_back(std::move(root));

  // One node per internal split, keyed by the canonical (taxon-0-free) side.
  std::vector<std::size_t> cluster_ids;
  for (const auto& [s, len] : tree.internal_splits()) {
    ClusterNode c;
    c.cluster = s.mask();
    c.length = len;
    cluster_ids.push_back(nodes.size());
    nodes.push_back(std::move(c));
  }

  // Parent of a cluster: the smallest cluster properly containing it.
  std::sort(cluster_ids.begin(), cluster_ids.end(),
            [&](std::size_t a, std::size_t b) {
              return nodes[a].cluster.count() < nodes[b].cluster.count();
            });
  for (std::size_t i = 0; i < cluster_ids.size(); ++i) {
    const std::size_t id = cluster_ids[i];
    std::size_t parent = 0;
    std::size_t parent_size = n + 1;
    for (std::size_t j = i + 1; j < cluster_ids.size(); ++j) {
      const std::size_t cand = cluster_ids[j];
      const std::size_t size = nodes[cand].cluster.count();
      if (size > nodes[id].cluster.count() &&
          nodes[id].cluster.is_subset_of(nodes[cand].cluster) &&
          size < parent_size) {
        parent = cand;
        parent_size = size;
      }
    }
    nodes[id].parent = parent;
    nodes[parent].children.push_back(id);
  }

  // Leaves attach to the smallest cluster containing them.
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t parent = 0;
    std::size_t parent_size = n + 1;
    for (std::size_t id : cluster_ids) {
      if (nodes[id].cluster.test(t) && nodes[id].cluster.count() < parent_size) {
        parent = id;
        parent_size = nodes[id].cluster.count();
      }
    }
    ClusterNode leaf;
    leaf.cluster = Bitset(n);
    leaf.cluster.set(t);
    leaf.is_leaf = true;
    leaf.leaf_index = t;
    leaf.length = tree.pendant_lengths()[t];
    leaf.parent = parent;
    nodes[parent].children.push_back(nodes.size());
    nodes.push_back(std::move(leaf));
  }

  // Deterministic child order: by smallest taxon index in the subtree.
  auto lowest_taxon = [&](std::size_t id) {
    for (std::size_t i = 0; i < n; ++i)
      if (nodes[id].cluster.test(i)) return i;
    return n;
  };
  for (auto& node : nodes) {
    std::sort(node.children.begin(), node.children.end(),
              [&](std::size_t a, std::size_t b) {
                return lowest_taxon(a) < lowest_taxon(b);
              });
  }
  return nodes;
}

}  // namespace detail

std::pair<Split, Split> nni_alternatives(const PhyloTree& tree,
                                         const Split& edge) {
  if (!tree.has_split(edge))
    throw Error("nni_alternatives: split is not an edge of the tree");
  if (!tree.is_binary())
    throw Error("nni_alternatives requires a binary tree");
  const std::size_t n = tree.taxon_count();

  const auto nodes = detail::build_hierarchy(tree);
  std::size_t edge_id = 0;
  for (std::size_t id = 1; id < nodes.size(); ++id) {
    if (!nodes[id].is_leaf && nodes[id].cluster == edge.mask()) {
      edge_id = id;
      break;
    }
  }
  const auto& node = nodes[edge_id];
  // Below the edge the two child subtrees give X1, X2; above it the sibling
  // subtree(s) and the remainder give Y1, Y2. The synthetic root of an
  // unrooted binary tree has three children, interior nodes two.
  if (node.children.size() != 2)
    throw Error("nni_alternatives: malformed binary hierarchy");
  const Bitset& x1 = nodes[node.children[0]].cluster;

  Bitset y1(n);
  const auto& parent = nodes[node.parent];
  for (std::size_t sibling : parent.children) {
    if (sibling != edge_id) {
      y1 = nodes[sibling].cluster;
      break;
    }
  }

  Split alt_a(x1 | y1, n);
  Split alt_b(x1 | (edge.mask().complement() & y1.complement()), n);
  if (alt_b < alt_a) std::swap(alt_a, alt_b);
  return {alt_a, alt_b};
}

}  // namespace treestat
