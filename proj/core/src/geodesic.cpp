#include "treestat/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "treestat/error.hpp"

namespace treestat {

namespace {

using WeightedSplit = std::pair<Split, double>;

double norm_of(const std::vector<WeightedSplit>& splits) {
  double s = 0.0;
  for (const auto& [split, len] : splits) s += len * len;
  return std::sqrt(s);
}

/// Sums squared contributions in ascending order; makes the distance exactly
/// symmetric in its arguments and independent of decomposition bookkeeping.
double sorted_root_sum(std::vector<double> squared_terms) {
  std::sort(squared_terms.begin(), squared_terms.end());
  double total = 0.0;
  for (double t : squared_terms) total += t;
  return std::sqrt(total);
}

/// Maximum flow (Edmonds-Karp) on a dense residual matrix; the graphs have
/// one vertex per split of a support pair plus source and sink.
class DenseMaxFlow {
 public:
  explicit DenseMaxFlow(std::size_t vertex_count)
      : n_(vertex_count), residual_(vertex_count * vertex_count, 0.0) {}

  void add_edge(std::size_t from, std::size_t to, double capacity) {
    residual_[from * n_ + to] += capacity;
  }

  void run(std::size_t source, std::size_t sink) {
    std::vector<std::size_t> parent(n_);
    while (true) {
      std::fill(parent.begin(), parent.end(), n_);
      parent[source] = source;
      std::deque<std::size_t> queue{source};
      while (!queue.empty() && parent[sink] == n_) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n_; ++v) {
          if (parent[v] == n_ && residual_[u * n_ + v] > kEps) {
            parent[v] = u;
            queue.push_back(v);
          }
        }
      }
      if (parent[sink] == n_) break;
      double bottleneck = std::numeric_limits<double>::infinity();
      for (std::size_t v = sink; v != source; v = parent[v])
        bottleneck = std::min(bottleneck, residual_[parent[v] * n_ + v]);
      for (std::size_t v = sink; v != source; v = parent[v]) {
        residual_[parent[v] * n_ + v] -= bottleneck;
        residual_[v * n_ + parent[v]] += bottleneck;
      }
    }
  }

  /// Vertices reachable from `source` in the residual graph after run().
  std::vector<bool> reachable(std::size_t source) const {
    std::vector<bool> seen(n_, false);
    seen[source] = true;
    std::deque<std::size_t> queue{source};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n_; ++v) {
        if (!seen[v] && residual_[u * n_ + v] > kEps) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr double kEps = 1e-13;
  std::size_t n_;
  std::vector<double> residual_;
};

struct PendingPair {
  std::vector<WeightedSplit> a;
  std::vector<WeightedSplit> b;
};

/// The extension problem of the geodesic algorithm: look for a partition
/// A = C1 u C2, B = D1 u D2 with C2 x D1 fully compatible and
/// ||C1||/||D1|| < ||C2||/||D2||. The optimal candidate is the minimum-weight
/// vertex cover (C1, D2) of the incompatibility graph with vertex weights
/// len^2/||side||^2, found via max-flow/min-cut.
bool refine_support(const PendingPair& pair, PendingPair& first,
                    PendingPair& second) {
  const std::size_t na = pair.a.size();
  const std::size_t nb = pair.b.size();
  if (na < 2 || nb < 2) return false;  // both sides must split non-trivially

  const double a_norm_sq = norm_of(pair.a) * norm_of(pair.a);
  const double b_norm_sq = norm_of(pair.b) * norm_of(pair.b);

  // source = 0, A vertices 1..na, B vertices na+1..na+nb, sink = na+nb+1.
  const std::size_t source = 0;
  const std::size_t sink = na + nb + 1;
  DenseMaxFlow flow(na + nb + 2);
  for (std::size_t i = 0; i < na; ++i) {
    const double w = pair.a[i].second * pair.a[i].second / a_norm_sq;
    flow.add_edge(source, 1 + i, w);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    const double w = pair.b[j].second * pair.b[j].second / b_norm_sq;
    flow.add_edge(1 + na + j, sink, w);
  }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (!pair.a[i].first.compatible_with(pair.b[j].first))
        flow.add_edge(1 + i, 1 + na + j, 4.0);

  flow.run(source, sink);
  const std::vector<bool> reach = flow.reachable(source);

  // Cover = C1 u D2 (A unreachable, B reachable); independent set = C2 u D1.
  // The refined blocks are (C1, D1) crossing first, then (C2, D2).
  PendingPair early;  // (C1, D1)
  PendingPair late;   // (C2, D2)
  for (std::size_t i = 0; i < na; ++i) {
    (reach[1 + i] ? late : early).a.push_back(pair.a[i]);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    (reach[1 + na + j] ? late : early).b.push_back(pair.b[j]);
  }

  if (early.a.empty() || early.b.empty() || late.a.empty() || late.b.empty())
    return false;

  const double c1 = norm_of(early.a);
  const double d1 = norm_of(early.b);
  const double c2 = norm_of(late.a);
  const double d2 = norm_of(late.b);
  // Strict ratio improvement; ties are kept merged for a canonical result.
  if (!(c1 * d2 < c2 * d1 * (1.0 - 1e-12))) return false;

  first = std::move(early);
  second = std::move(late);
  return true;
}

}  // namespace

Geodesic::Geodesic(PhyloTree source, PhyloTree target,
                   std::vector<SharedSplit> shared,
                   std::vector<SupportPair> support, GeodesicOptions options)
    : source_(std::move(source)),
      target_(std::move(target)),
      shared_(std::move(shared)),
      support_(std::move(support)),
      options_(options) {
  std::vector<double> terms;
  terms.reserve(shared_.size() + support_.size() + source_.taxon_count());
  for (const auto& s : shared_) {
    const double d = s.source_length - s.target_length;
    terms.push_back(d * d);
  }
  for (const auto& p : support_) {
    const double sum = p.source_norm + p.target_norm;
    terms.push_back(sum * sum);
  }
  if (options_.include_pendant) {
    const auto& p1 = source_.pendant_lengths();
    const auto& p2 = target_.pendant_lengths();
    for (std::size_t i = 0; i < p1.size(); ++i) {
      const double d = p1[i] - p2[i];
      terms.push_back(d * d);
    }
  }
  length_ = sorted_root_sum(std::move(terms));
}

PhyloTree Geodesic::point(double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("geodesic point fraction must lie in [0, 1]");
  if (lambda == 0.0) return source_;
  if (lambda == 1.0) return target_;

  std::map<Split, double> splits;
  for (const auto& s : shared_) {
    const double len =
        (1.0 - lambda) * s.source_length + lambda * s.target_length;
    if (len > 0.0) splits.emplace(s.split, len);
  }
  for (const auto& p : support_) {
    const double source_coef =
        (1.0 - lambda) * p.source_norm - lambda * p.target_norm;
    if (source_coef > 0.0) {
      for (const auto& [split, len] : p.source_splits)
        splits.emplace(split, source_coef * len / p.source_norm);
    } else if (source_coef < 0.0) {
      for (const auto& [split, len] : p.target_splits)
        splits.emplace(split, -source_coef * len / p.target_norm);
    }
  }

  std::vector<double> pendant(source_.taxon_count());
  const auto& p1 = source_.pendant_lengths();
  const auto& p2 = target_.pendant_lengths();
  for (std::size_t i = 0; i < pendant.size(); ++i)
    pendant[i] = (1.0 - lambda) * p1[i] + lambda * p2[i];

  return PhyloTree(source_.taxa(), std::move(splits), std::move(pendant));
}

Geodesic geodesic(const PhyloTree& t1, const PhyloTree& t2,
                  GeodesicOptions options) {
  if (!same_taxa(t1.taxa(), t2.taxa()))
    throw Error("geodesic endpoints must share one taxon set");

  std::vector<WeightedSplit> a_only;
  std::vector<WeightedSplit> b_only;
  std::vector<SharedSplit> shared;
  for (const auto& [s, len] : t1.internal_splits()) {
    if (len <= 0.0) continue;
    const double other = t2.split_length(s);
    if (t2.has_split(s) && other > 0.0)
      shared.push_back({s, len, other});
    else
      a_only.push_back({s, len});
  }
  for (const auto& [s, len] : t2.internal_splits()) {
    if (len <= 0.0) continue;
    if (t1.split_length(s) > 0.0) continue;  // already collected as shared
    b_only.push_back({s, len});
  }

  // Splits of one endpoint compatible with everything on the other side stay
  // present along the whole path, shrinking to length zero at the far end.
  auto compatible_with_all = [](const Split& s,
                                const std::vector<WeightedSplit>& other) {
    for (const auto& [o, len] : other)
      if (!s.compatible_with(o)) return false;
    return true;
  };
  std::vector<WeightedSplit> a_support;
  std::vector<WeightedSplit> b_support;
  for (const auto& ws : a_only) {
    if (compatible_with_all(ws.first, b_only))
      shared.push_back({ws.first, ws.second, 0.0});
    else
      a_support.push_back(ws);
  }
  for (const auto& ws : b_only) {
    if (compatible_with_all(ws.first, a_only))
      shared.push_back({ws.first, 0.0, ws.second});
    else
      b_support.push_back(ws);
  }
  std::sort(shared.begin(), shared.end(),
            [](const SharedSplit& x, const SharedSplit& y) {
              return x.split < y.split;
            });

  // Iterative support refinement, starting from the single-pair (cone) path.
  std::vector<PendingPair> pairs;
  if (!a_support.empty())
    pairs.push_back({std::move(a_support), std::move(b_support)});
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<PendingPair> next;
    next.reserve(pairs.size() + 1);
    for (auto& pair : pairs) {
      PendingPair first, second;
      if (refine_support(pair, first, second)) {
        next.push_back(std::move(first));
        next.push_back(std::move(second));
        changed = true;
      } else {
        next.push_back(std::move(pair));
      }
    }
    pairs = std::move(next);
  }

  std::vector<SupportPair> support;
  support.reserve(pairs.size());
  for (auto& pair : pairs) {
    SupportPair sp;
    std::sort(pair.a.begin(), pair.a.end());
    std::sort(pair.b.begin(), pair.b.end());
    sp.source_splits = std::move(pair.a);
    sp.target_splits = std::move(pair.b);
    sp.source_norm = norm_of(sp.source_splits);
    sp.target_norm = norm_of(sp.target_splits);
    support.push_back(std::move(sp));
  }
  std::sort(support.begin(), support.end(),
            [](const SupportPair& x, const SupportPair& y) {
              return x.source_norm * y.target_norm <
                     y.source_norm * x.target_norm;
            });
  // Merge blocks with equal crossing ratios into one canonical block.
  std::vector<SupportPair> merged;
  for (auto& sp : support) {
    if (!merged.empty()) {
      SupportPair& last = merged.back();
      const double lhs = last.source_norm * sp.target_norm;
      const double rhs = sp.source_norm * last.target_norm;
      if (std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs))) {
        last.source_splits.insert(last.source_splits.end(),
                                  sp.source_splits.begin(),
                                  sp.source_splits.end());
        last.target_splits.insert(last.target_splits.end(),
                                  sp.target_splits.begin(),
                                  sp.target_splits.end());
        std::sort(last.source_splits.begin(), last.source_splits.end());
        std::sort(last.target_splits.begin(), last.target_splits.end());
        last.source_norm = norm_of(last.source_splits);
        last.target_norm = norm_of(last.target_splits);
        continue;
      }
    }
    merged.push_back(std::move(sp));
  }

  return Geodesic(t1, t2, std::move(shared), std::move(merged), options);
}

double distance(const PhyloTree& t1, const PhyloTree& t2,
                GeodesicOptions options) {
  return geodesic(t1, t2, options).length();
}

double cone_distance(const PhyloTree& t1, const PhyloTree& t2,
                     GeodesicOptions options) {
  if (!same_taxa(t1.taxa(), t2.taxa()))
    throw Error("cone_distance endpoints must share one taxon set");
  std::vector<double> terms;
  double a_norm_sq = 0.0;
  double b_norm_sq = 0.0;
  for (const auto& [s, len] : t1.internal_splits()) {
    if (len <= 0.0) continue;
    const double other = t2.split_length(s);
    if (other > 0.0) {
      const double d = len - other;
      terms.push_back(d * d);
    } else {
      a_norm_sq += len * len;
    }
  }
  for (const auto& [s, len] : t2.internal_splits()) {
    if (len <= 0.0) continue;
    if (t1.split_length(s) > 0.0) continue;
    b_norm_sq += len * len;
  }
  const double pair_sum = std::sqrt(a_norm_sq) + std::sqrt(b_norm_sq);
  terms.push_back(pair_sum * pair_sum);
  if (options.include_pendant) {
    const auto& p1 = t1.pendant_lengths();
    const auto& p2 = t2.pendant_lengths();
    for (std::size_t i = 0; i < p1.size(); ++i) {
      const double d = p1[i] - p2[i];
      terms.push_back(d * d);
    }
  }
  return sorted_root_sum(std::move(terms));
}

PhyloTree point_on_geodesic(const Geodesic& g, double lambda) {
  return g.point(lambda);
}

}  // namespace treestat
