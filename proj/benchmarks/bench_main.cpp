#include <benchmark/benchmark.h>

#include "spectral_aug/oge.hpp"
#include "spectral_aug/spectral.hpp"
#include "spectral_aug/vanilla.hpp"

namespace sa = spectral_aug;

namespace {

sa::Graph bench_graph(int n) {
  sa::Rng rng(static_cast<std::uint64_t>(n));
  return sa::graphs::random_connected(n, 0.4, rng);
}

void BM_EigSym(benchmark::State& state) {
  const sa::Matrix l = sa::build_laplacian(bench_graph(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(sa::eig_sym(l));
}
BENCHMARK(BM_EigSym)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_OgeAug(benchmark::State& state) {
  const sa::OgeModel model(sa::OgeConfig{});
  const sa::Graph g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model.augment(g));
}
BENCHMARK(BM_OgeAug)->Arg(8)->Arg(16)->Arg(32);

void BM_VanillaAug(benchmark::State& state) {
  const sa::VanillaModel model(sa::VanillaConfig{});
  const sa::Graph g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model.augment(g));
}
BENCHMARK(BM_VanillaAug)->Arg(8)->Arg(16)->Arg(32);

void BM_MatchPermutation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sa::Graph g = bench_graph(n);
  const sa::Matrix l = sa::build_laplacian(g);
  const sa::Matrix l2 = sa::build_laplacian(sa::flip_edges(g, 1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(sa::match_permutation(l, l2));
}
BENCHMARK(BM_MatchPermutation)->Arg(5)->Arg(6)->Arg(7)->Arg(8);

}  // namespace
BENCHMARK_MAIN();
