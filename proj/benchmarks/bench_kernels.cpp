#include <benchmark/benchmark.h>

#include "spectra/anticoncentration.hpp"
#include "spectra/graph.hpp"
#include "spectra/random.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

namespace {

VertexSet half(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  VertexSet s(n);
  for (Vertex v = 0; v < n; ++v)
    if (rng.bernoulli(0.5)) s.insert(v);
  return s;
}

void BM_PopcountAnd(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = half(n, 1), b = half(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(popcount_and(a.words(), b.words()));
  st.SetBytesProcessed(static_cast<std::int64_t>(st.iterations() * 2 * a.words().size() * sizeof(Word)));
}
BENCHMARK(BM_PopcountAnd)->RangeMultiplier(4)->Range(256, 16384);

void BM_CountEdges(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Graph g = generate({Model::gnp, n, 0.5}, 3);
  const auto s = half(n, 4);
  for (auto _ : st) benchmark::DoNotOptimize(count_edges(g, s));
}
BENCHMARK(BM_CountEdges)->RangeMultiplier(2)->Range(256, 4096);

void BM_Symdiff(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Graph g = generate({Model::gnp, n, 0.5}, 5);
  const auto u = half(n, 6);
  const Unit x = Unit::pair(0, 1), y = Unit::pair(2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(symdiff_size(g, x, y, u, true));
}
BENCHMARK(BM_Symdiff)->RangeMultiplier(2)->Range(256, 4096);

void BM_PhiExact(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Graph g = generate({Model::gnp, n, 0.5}, 7);
  EnumerationOptions opts;
  opts.workers = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(phi_exact(g, opts));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) << n);
}
BENCHMARK(BM_PhiExact)->Args({16, 1})->Args({20, 1})->Args({20, 4})->Args({24, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_LOExact(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const LOInstance inst{make_coefficients(CoefficientModel::uniform_1_10, n, 1), 0, 0.5};
  for (auto _ : st) benchmark::DoNotOptimize(lo_exact_distribution(inst).max_mass());
}
BENCHMARK(BM_LOExact)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
