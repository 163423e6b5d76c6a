#pragma once

// Independent brute-force oracle for the geodesic distance on small trees.
//
// A candidate path type assigns every positive internal split of the two
// endpoint trees a role: splits may be "carried" across the whole path
// (shrinking or growing linearly; only legal when the split stays compatible
// with everything else on the path), or they belong to one of k ordered
// crossing blocks (A_i collapses as B_i appears). A split present in both
// trees may alternatively collapse in some block i and regrow in a later
// block j > i. The minimal length of a type with non-decreasing block ratios
// is
//
//   sqrt( sum_carried (l1 - l2)^2 + sum_i (||A_i|| + ||B_i||)^2 )
//
// and the geodesic distance is the minimum over all valid types. This
// enumeration only touches the incompatibility structure through pairwise
// checks, entirely independent of the support-refinement algorithm under
// test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "treestat/phylo_tree.hpp"
#include "treestat/split.hpp"

namespace treestat::testing {

namespace oracle_detail {

struct Element {
  Split split;
  double source_length = 0.0;  // 0 when absent from the source tree
  double target_length = 0.0;  // 0 when absent from the target tree
  bool in_both = false;
};

struct Assignment {
  // per element: -1 carried; for in_both elements >= 0 encodes the collapse
  // block; regrow blocks enumerated separately.
  std::vector<int> collapse_block;
  std::vector<int> regrow_block;
};

inline double block_norm(const std::vector<double>& lengths) {
  double s = 0.0;
  for (double l : lengths) s += l * l;
  return std::sqrt(s);
}

}  // namespace oracle_detail

/// Brute-force geodesic distance between two trees (internal splits only).
/// Intended for <= 7 taxa; enumeration grows quickly beyond that.
inline double brute_force_distance(const PhyloTree& t1, const PhyloTree& t2) {
  using oracle_detail::Element;

  std::vector<Element> elems;
  for (const auto& [s, len] : t1.internal_splits()) {
    if (len <= 0.0) continue;
    const double other = t2.split_length(s);
    elems.push_back(Element{s, len, other, other > 0.0});
  }
  for (const auto& [s, len] : t2.internal_splits()) {
    if (len <= 0.0) continue;
    if (t1.split_length(s) > 0.0) continue;
    elems.push_back(Element{s, 0.0, len, false});
  }

  const std::size_t count = elems.size();
  if (count == 0) return 0.0;
  const int max_blocks = static_cast<int>(count);

  double best_sq = std::numeric_limits<double>::infinity();

  // Role per element: -1 carried, otherwise the block index where its source
  // side collapses (source splits) or its target side appears (target
  // splits). Elements present in both trees get two indices: collapse block
  // c and regrow block r with r > c, or carried (-1, -1).
  std::vector<int> collapse(count, -2), regrow(count, -2);

  auto evaluate = [&](int blocks) {
    // Assemble block contents.
    std::vector<std::vector<double>> a_len(blocks), b_len(blocks);
    std::vector<std::vector<const Split*>> a_split(blocks), b_split(blocks);
    std::vector<const Element*> carried;
    for (std::size_t i = 0; i < count; ++i) {
      const Element& e = elems[i];
      if (collapse[i] == -1 && (!e.in_both || regrow[i] == -1)) {
        carried.push_back(&e);
        continue;
      }
      if (e.source_length > 0.0) {
        a_len[collapse[i]].push_back(e.source_length);
        a_split[collapse[i]].push_back(&e.split);
      }
      if (e.target_length > 0.0) {
        const int r = e.in_both ? regrow[i] : collapse[i];
        b_len[r].push_back(e.target_length);
        b_split[r].push_back(&e.split);
      }
    }
    for (int b = 0; b < blocks; ++b)
      if (a_len[b].empty() || b_len[b].empty()) return;  // empty block side

    // Path validity: after crossing block c the tree carries
    // B_1..B_c u A_{c+1}..A_k u carried; all pairs must be compatible.
    // Carried-vs-carried and within-tree pairs also need the check because
    // carried splits can come from either endpoint.
    for (int c = 0; c <= blocks; ++c) {
      std::vector<const Split*> present;
      for (const auto* e : carried) present.push_back(&e->split);
      for (int b = 0; b < c; ++b)
        for (const auto* s : b_split[b]) present.push_back(s);
      for (int b = c; b < blocks; ++b)
        for (const auto* s : a_split[b]) present.push_back(s);
      for (std::size_t x = 0; x < present.size(); ++x)
        for (std::size_t y = x + 1; y < present.size(); ++y) {
          if (*present[x] == *present[y]) return;  // same split twice
          if (!present[x]->compatible_with(*present[y])) return;
        }
    }

    // Ratio ordering (non-decreasing), with slack for exact ties.
    std::vector<double> a_norm(blocks), b_norm(blocks);
    for (int b = 0; b < blocks; ++b) {
      a_norm[b] = oracle_detail::block_norm(a_len[b]);
      b_norm[b] = oracle_detail::block_norm(b_len[b]);
    }
    for (int b = 0; b + 1 < blocks; ++b) {
      const double lhs = a_norm[b] * b_norm[b + 1];
      const double rhs = a_norm[b + 1] * b_norm[b];
      if (lhs > rhs * (1.0 + 1e-12)) return;
    }

    double sq = 0.0;
    for (const auto* e : carried) {
      const double d = e->source_length - e->target_length;
      sq += d * d;
    }
    for (int b = 0; b < blocks; ++b) {
      const double s = a_norm[b] + b_norm[b];
      sq += s * s;
    }
    best_sq = std::min(best_sq, sq);
  };

  // Recursive enumeration of roles.
  auto enumerate = [&](auto&& self, std::size_t i, int blocks) -> void {
    if (i == count) {
      evaluate(blocks);
      return;
    }
    const Element& e = elems[i];
    // Carried.
    collapse[i] = -1;
    regrow[i] = -1;
    self(self, i + 1, blocks);
    if (e.in_both) {
      for (int c = 0; c < max_blocks; ++c)
        for (int r = c + 1; r < max_blocks; ++r) {
          collapse[i] = c;
          regrow[i] = r;
          self(self, i + 1, std::max(blocks, r + 1));
        }
    } else {
      for (int b = 0; b < max_blocks; ++b) {
        collapse[i] = b;
        regrow[i] = -1;
        self(self, i + 1, std::max(blocks, b + 1));
      }
    }
    collapse[i] = -2;
    regrow[i] = -2;
  };
  enumerate(enumerate, 0, 0);

  return std::sqrt(best_sq);
}

/// Straight-line distance for a nearest-neighbor-interchange pair: the two
/// orthants unfold isometrically into a plane, so the geodesic is the
/// Euclidean segment. `dropped`/`added` are the lengths of the exchanged
/// splits; `shared_deltas` the length differences on shared splits.
inline double nni_unfolded_distance(double dropped, double added,
                                    const std::vector<double>& shared_deltas) {
  double sq = (dropped + added) * (dropped + added);
  for (double d : shared_deltas) sq += d * d;
  return std::sqrt(sq);
}

}  // namespace treestat::testing
