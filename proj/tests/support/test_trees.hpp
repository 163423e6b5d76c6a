#pragma once

// Helpers shared by the unit and acceptance suites: small tree builders and
// seeded random tree generators.

#include <map>
#include <string>
#include <vector>

#include "treestat/error.hpp"
#include "treestat/phylo_tree.hpp"
#include "treestat/rng.hpp"
#include "treestat/split.hpp"
#include "treestat/taxon_set.hpp"

namespace treestat::testing {

/// Taxon sets named a, b, c, ... (k <= 26).
inline TaxonSetPtr letters(std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i)
    labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return make_taxon_set(std::move(labels));
}

/// Split from a label string like "ab" over single-letter taxa.
inline Split split_of(const TaxonSetPtr& taxa, const std::string& side) {
  Bitset mask(taxa->size());
  for (char c : side) {
    auto idx = taxa->index_of(std::string(1, c));
    if (!idx) throw Error("split_of: unknown taxon");
    mask.set(*idx);
  }
  return Split(mask, taxa->size());
}

/// Tree from (side-string, length) pairs, e.g. {{"ab", 3.0}, {"de", 7.0}}.
inline PhyloTree tree_of(const TaxonSetPtr& taxa,
                         const std::vector<std::pair<std::string, double>>&
                             weighted_sides,
                         std::vector<double> pendant = {}) {
  std::map<Split, double> splits;
  for (const auto& [side, len] : weighted_sides)
    splits.emplace(split_of(taxa, side), len);
  return PhyloTree(taxa, std::move(splits), std::move(pendant));
}

/// Random unrooted binary topology by sequential edge subdivision; lengths
/// uniform in [min_len, max_len].
inline PhyloTree random_binary_tree(const TaxonSetPtr& taxa, Rng& rng,
                                    double min_len = 0.1,
                                    double max_len = 2.0) {
  const std::size_t k = taxa->size();
  // Adjacency over node ids; leaves are 0..k-1, internal nodes follow.
  std::vector<std::vector<std::size_t>> adj;
  adj.resize(k + 1);
  const std::size_t hub = k;
  for (std::size_t leaf = 0; leaf < 3; ++leaf) {
    adj[hub].push_back(leaf);
    adj[leaf].push_back(hub);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges = {
      {0, hub}, {1, hub}, {2, hub}};
  for (std::size_t t = 3; t < k; ++t) {
    const std::size_t pick = static_cast<std::size_t>(
        rng.next_below(edges.size()));
    auto [u, v] = edges[pick];
    const std::size_t w = adj.size();
    adj.emplace_back();
    std::erase(adj[u], v);
    std::erase(adj[v], u);
    adj[u].push_back(w);
    adj[v].push_back(w);
    adj[w].push_back(u);
    adj[w].push_back(v);
    adj[w].push_back(t);
    adj[t].push_back(w);
    edges[pick] = {u, w};
    edges.emplace_back(v, w);
    edges.emplace_back(t, w);
  }

  // Leaves below each directed edge via DFS, then splits for internal edges.
  std::map<Split, double> splits;
  auto leaves_below = [&](std::size_t from, std::size_t to) {
    Bitset mask(k);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{from, to}};
    while (!stack.empty()) {
      auto [parent, node] = stack.back();
      stack.pop_back();
      if (node < k) {
        mask.set(node);
        continue;
      }
      for (std::size_t next : adj[node])
        if (next != parent) stack.emplace_back(node, next);
    }
    return mask;
  };
  for (auto [u, v] : edges) {
    if (u < k || v < k) continue;  // pendant edge
    const Bitset mask = leaves_below(u, v);
    splits.emplace(Split(mask, k),
                   min_len + (max_len - min_len) * rng.next_double());
  }

  std::vector<double> pendant(k);
  for (auto& p : pendant)
    p = min_len + (max_len - min_len) * rng.next_double();
  return PhyloTree(taxa, std::move(splits), std::move(pendant));
}

/// All binary topologies on 5 taxa as compatible split pairs (15 of them).
inline std::vector<std::pair<Split, Split>> all_five_taxon_topologies(
    const TaxonSetPtr& taxa) {
  std::vector<Split> internal;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      internal.push_back(Split({i, j}, 5));
  std::vector<std::pair<Split, Split>> topologies;
  for (std::size_t i = 0; i < internal.size(); ++i)
    for (std::size_t j = i + 1; j < internal.size(); ++j)
      if (internal[i].compatible_with(internal[j]))
        topologies.emplace_back(internal[i], internal[j]);
  (void)taxa;
  return topologies;
}

}  // namespace treestat::testing
