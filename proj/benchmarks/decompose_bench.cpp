#include <benchmark/benchmark.h>

#include <random>

#include "comptra/decompose.hpp"

namespace {

using namespace comptra;

DependencyTree chain_tree(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DependencyTree tree;
  tree.tokens.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tree.tokens[i].form = "w" + std::to_string(i);
    tree.tokens[i].head = i == 0 ? 0 : 1 + rng() % i;
    tree.tokens[i].deprel = i == 0 ? "root" : "dep";
  }
  return tree;
}

void BM_StructureSplit(benchmark::State& state) {
  const auto tree = chain_tree(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(structure_split(tree));
}
BENCHMARK(BM_StructureSplit)->Arg(30)->Arg(300);

void BM_ContentWords(benchmark::State& state) {
  const std::string s = "The farmers of the valley harvest their coffee in the autumn and sell it in town.";
  for (auto _ : state) benchmark::DoNotOptimize(content_words(s, builtin_stopwords()));
}
BENCHMARK(BM_ContentWords);

}  // namespace
