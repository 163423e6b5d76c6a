#include <benchmark/benchmark.h>

#include <vector>

#include "support/test_trees.hpp"
#include "treestat/frechet.hpp"
#include "treestat/inference.hpp"
#include "treestat/simulate.hpp"

using namespace treestat;
using namespace treestat::testing;

namespace {

std::vector<PhyloTree> concentrated_sample(std::size_t taxa_count,
                                           std::size_t n) {
  Rng rng(21);
  const auto taxa = letters(taxa_count);
  GeneratorSpec spec;
  spec.base = make_frame(random_binary_tree(taxa, rng, 0.8, 1.5));
  const std::size_t m = spec.base->dimension();
  spec.sigma = Matrix(m);
  for (std::size_t i = 0; i < m; ++i) spec.sigma(i, i) = 0.15 * 0.15;
  spec.seed = 22;
  TreeSampler sampler(spec, 0);
  std::vector<PhyloTree> sample;
  sample.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sample.push_back(sampler.sample().tree);
  return sample;
}

}  // namespace

static void BM_FrechetMean(benchmark::State& state) {
  const auto sample =
      concentrated_sample(static_cast<std::size_t>(state.range(0)), 30);
  MeanConfig config;
  config.tolerance = 1e-7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frechet_mean(sample, config));
  }
}
BENCHMARK(BM_FrechetMean)->Arg(5)->Arg(7)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Summarize(benchmark::State& state) {
  const auto sample =
      concentrated_sample(static_cast<std::size_t>(state.range(0)), 40);
  MeanConfig config;
  config.tolerance = 1e-7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize(sample, config));
  }
}
BENCHMARK(BM_Summarize)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);
