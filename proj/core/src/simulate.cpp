#include "treestat/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "treestat/error.hpp"
#include "treestat/inference.hpp"

namespace treestat {

namespace {

constexpr std::size_t kRejectionWindow = 256;

}  // namespace

TreeSampler::TreeSampler(const GeneratorSpec& spec, std::uint64_t stream)
    : base_(spec.base), rng_(spec.seed, stream) {
  if (!base_) throw Error("tree sampler requires a base frame");
  const std::size_t m = base_->dimension();
  if (spec.sigma.size() != m)
    throw Error("sigma dimension does not match the base frame");
  sigma_root_ = psd_sqrt(spec.sigma);
  alternatives_.reserve(m);
  for (const auto& split : base_->order()) {
    auto [a, b] = nni_alternatives(base_->base(), split);
    // Deterministic swap target: the alternative with the smaller canonical
    // mask; nni_alternatives already returns them in that order.
    alternatives_.emplace_back(a, b);
  }
}

SampleDraw TreeSampler::sample() {
  const std::size_t m = base_->dimension();
  const auto& coords = base_->base_coords();
  std::vector<double> noise(m), z(m);
  while (true) {
    ++draws_;
    ++window_attempts_;
    for (auto& x : noise) x = rng_.next_normal();
    for (std::size_t i = 0; i < m; ++i) {
      double shift = 0.0;
      for (std::size_t j = 0; j < m; ++j) shift += sigma_root_(i, j) * noise[j];
      z[i] = coords[i] + shift;
    }

    // A swapped-in NNI split is compatible with every base split except the
    // one it replaces, so only swapped pairs can clash with each other.
    std::vector<std::size_t> flipped;
    for (std::size_t i = 0; i < m; ++i)
      if (z[i] < 0.0) flipped.push_back(i);
    bool accepted = true;
    for (std::size_t a = 0; a < flipped.size() && accepted; ++a)
      for (std::size_t b = a + 1; b < flipped.size() && accepted; ++b)
        if (!alternatives_[flipped[a]].first.compatible_with(
                alternatives_[flipped[b]].first))
          accepted = false;

    if (!accepted) {
      ++rejections_;
      ++window_rejections_;
    }
    if (window_attempts_ >= kRejectionWindow) {
      if (2 * window_rejections_ > window_attempts_)
        throw Error(
            "tree sampler rejection rate above 50%: sigma too large for the "
            "local chart around the base tree");
      window_attempts_ = 0;
      window_rejections_ = 0;
    }
    if (!accepted) continue;

    std::map<Split, double> splits;
    for (std::size_t i = 0; i < m; ++i) {
      if (z[i] > 0.0)
        splits.emplace(base_->order()[i], z[i]);
      else if (z[i] < 0.0)
        splits.emplace(alternatives_[i].first, -z[i]);
    }
    return SampleDraw{PhyloTree(base_->base().taxa(), std::move(splits),
                                base_->base().pendant_lengths()),
                      z};
  }
}

std::vector<SampleDraw> TreeSampler::sample_many(std::size_t count) {
  std::vector<SampleDraw> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample());
  return out;
}

CoverageResult coverage_experiment(const GeneratorSpec& spec, std::size_t n,
                                   std::size_t replicates,
                                   std::vector<double> alphas,
                                   const MeanConfig& config,
                                   std::size_t threads) {
  if (replicates == 0) throw Error("coverage_experiment needs replicates >= 1");
  if (spec.base && n <= spec.base->dimension())
    throw Error("coverage_experiment needs n > frame dimension");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw Error("coverage_experiment alphas must lie in (0, 1)");

  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : std::min<std::size_t>(hw, 8);
  }
  threads = std::min(threads, replicates);

  std::vector<std::size_t> member_counts(alphas.size(), 0);
  std::atomic<std::size_t> skipped{0};
  std::atomic<std::size_t> total_rejections{0};

  std::vector<std::vector<std::size_t>> partial(
      threads, std::vector<std::size_t>(alphas.size(), 0));
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t r = w; r < replicates; r += threads) {
        TreeSampler sampler(spec, r);
        std::vector<PhyloTree> sample;
        sample.reserve(n);
        try {
          for (std::size_t i = 0; i < n; ++i)
            sample.push_back(sampler.sample().tree);
          MeanConfig replicate_config = config;
          replicate_config.seed = config.seed ^ (0x9e3779b97f4a7c15ull * (r + 1));
          const InferenceSummary summary = summarize(sample, replicate_config);
          for (std::size_t a = 0; a < alphas.size(); ++a) {
            const ConfidenceReport report =
                confidence_member(summary, spec.base->base(), alphas[a]);
            if (report.member) ++partial[w][a];
          }
        } catch (const Error&) {
          skipped.fetch_add(1, std::memory_order_relaxed);
        }
        total_rejections.fetch_add(sampler.rejection_count(),
                                   std::memory_order_relaxed);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (std::size_t w = 0; w < threads; ++w)
    for (std::size_t a = 0; a < alphas.size(); ++a)
      member_counts[a] += partial[w][a];

  CoverageResult result;
  result.alphas = std::move(alphas);
  result.coverage.reserve(result.alphas.size());
  for (std::size_t a = 0; a < result.alphas.size(); ++a)
    result.coverage.push_back(static_cast<double>(member_counts[a]) /
                              static_cast<double>(replicates));
  result.replicates = replicates;
  result.sample_size = n;
  result.skipped = skipped.load();
  result.total_rejections = total_rejections.load();
  return result;
}

}  // namespace treestat
