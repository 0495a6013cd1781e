// OpenMP maximal kernels against their serial references.
//
//   ./build/bench_kernels --benchmark_filter=Directional
//
// Arguments are (M, number of directions); the torus is n = 2 with L = M / 8.

#include <benchmark/benchmark.h>

#include <random>

#include "grsio/experiments.hpp"
#include "grsio/operators.hpp"

using namespace grsio;

namespace {

GridFunction input(int n, int M) {
  const TorusSpec spec(n, M / 8.0, M);
  std::mt19937_64 rng(17);
  return random_band_limited(spec, ConeProfile{1.0 / 729.0}, false, rng);
}

template <auto Kernel>
void BM_Directional(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const GridFunction f = input(2, M);
  const std::vector<Subspace> Sigma = direction_set(2, N, N, 0.2, "equispaced", 1);
  const std::vector<Rotation> Qs = so_net(1, 1);
  const MultiplierFamily m = hilbert_smoothed(1, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, m, Sigma, Qs));
  state.SetItemsProcessed(state.iterations() * N);
}

template <auto Kernel>
void BM_Truncated(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const GridFunction f = input(2, M);
  const std::vector<Subspace> Sigma = direction_set(2, N, N, 0.2, "equispaced", 1);
  const std::vector<Rotation> Qs = so_net(1, 1);
  const MultiplierFamily m = hilbert_smoothed(1, 1e-4);
  const std::vector<double> hs{0.5, 1.0, 2.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, m, Sigma, Qs, hs));
  state.SetItemsProcessed(state.iterations() * N);
}

template <auto Kernel>
void BM_CarlesonSjolin(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int shifts = static_cast<int>(state.range(1));
  const GridFunction f = input(1, M);
  const MultiplierFamily m = hilbert_smoothed(1, 1e-4);
  std::vector<Vec> Ns;
  for (int k = 0; k < shifts; ++k) Ns.push_back(Vec::Constant(1, -1.0 + 2.0 * k / shifts));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f, m, Ns));
  state.SetItemsProcessed(state.iterations() * shifts);
}

}  // namespace

BENCHMARK(BM_Directional<maximal_directional>)->Args({128, 16})->Args({256, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Directional<maximal_directional_serial>)->Args({128, 16})->Args({256, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncated<maximal_truncated>)->Args({128, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Truncated<maximal_truncated_serial>)->Args({128, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CarlesonSjolin<carleson_sjolin>)->Args({4096, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CarlesonSjolin<carleson_sjolin_serial>)->Args({4096, 64})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
