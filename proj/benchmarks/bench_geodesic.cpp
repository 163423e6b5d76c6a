#include <benchmark/benchmark.h>

#include <vector>

#include "support/test_trees.hpp"
#include "treestat/geodesic.hpp"

using namespace treestat;
using namespace treestat::testing;

namespace {

std::vector<PhyloTree> tree_pool(std::size_t taxa_count, std::size_t count,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const auto taxa = letters(taxa_count);
  std::vector<PhyloTree> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    pool.push_back(random_binary_tree(taxa, rng, 0.1, 2.0));
  return pool;
}

}  // namespace

static void BM_GeodesicDistance(benchmark::State& state) {
  const auto pool = tree_pool(static_cast<std::size_t>(state.range(0)), 64, 11);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t1 = pool[i % pool.size()];
    const auto& t2 = pool[(i + 17) % pool.size()];
    benchmark::DoNotOptimize(distance(t1, t2));
    ++i;
  }
}
BENCHMARK(BM_GeodesicDistance)->Arg(6)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

static void BM_GeodesicPath(benchmark::State& state) {
  const auto pool = tree_pool(static_cast<std::size_t>(state.range(0)), 16, 12);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto g = geodesic(pool[i % pool.size()], pool[(i + 5) % pool.size()]);
    benchmark::DoNotOptimize(g.point(0.37));
    ++i;
  }
}
BENCHMARK(BM_GeodesicPath)->Arg(6)->Arg(10)->Arg(14);
