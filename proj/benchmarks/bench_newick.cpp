#include <benchmark/benchmark.h>

#include <string>

#include "support/test_trees.hpp"
#include "treestat/newick.hpp"

using namespace treestat;
using namespace treestat::testing;

static void BM_NewickParse(benchmark::State& state) {
  Rng rng(31);
  const auto taxa = letters(static_cast<std::size_t>(state.range(0)));
  std::string text;
  for (int i = 0; i < 50; ++i)
    text += write_newick(random_binary_tree(taxa, rng)) + "\n";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_newick(text));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_NewickParse)->Arg(8)->Arg(16)->Arg(26);

static void BM_NewickWrite(benchmark::State& state) {
  Rng rng(32);
  const auto taxa = letters(static_cast<std::size_t>(state.range(0)));
  const PhyloTree tree = random_binary_tree(taxa, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(write_newick(tree));
  }
}
BENCHMARK(BM_NewickWrite)->Arg(8)->Arg(16)->Arg(26);
