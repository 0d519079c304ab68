#include <benchmark/benchmark.h>

#include "smoothdiv/conic_divergences.hpp"
#include "smoothdiv/smoothing.hpp"

namespace sd = smoothdiv;

static void BM_SpectralFidelity(benchmark::State& state) {
  sd::Rng rng(1);
  const int dim = static_cast<int>(state.range(0));
  sd::Matrix a = sd::random_psd(rng, dim), b = sd::random_psd(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::fidelity(a, b));
  }
}
BENCHMARK(BM_SpectralFidelity)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_RootFidelitySdp(benchmark::State& state) {
  sd::Rng rng(2);
  const int dim = static_cast<int>(state.range(0));
  sd::Matrix a = sd::random_psd(rng, dim), b = sd::random_psd(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::root_fidelity_sdp(a, b));
  }
}
BENCHMARK(BM_RootFidelitySdp)->Arg(2)->Arg(4)->Arg(8);

static void BM_HypothesisTesting(benchmark::State& state) {
  sd::Rng rng(3);
  const int dim = static_cast<int>(state.range(0));
  sd::DensityOperator rho = sd::random_state(rng, dim);
  sd::Matrix sigma = sd::random_psd(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::hypothesis_testing(rho, sigma, 0.3));
  }
}
BENCHMARK(BM_HypothesisTesting)->Arg(2)->Arg(4)->Arg(8);

static void BM_SmoothDmax(benchmark::State& state) {
  sd::Rng rng(4);
  const int dim = static_cast<int>(state.range(0));
  sd::DensityOperator rho = sd::random_state(rng, dim);
  sd::Matrix sigma = sd::random_psd(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::smooth_dmax(rho, sigma, 0.3, sd::SmoothingSet::subnormalized));
  }
}
BENCHMARK(BM_SmoothDmax)->Arg(2)->Arg(4);

static void BM_SeesawBracketPoint(benchmark::State& state) {
  sd::Rng rng(5);
  const int dim = static_cast<int>(state.range(0));
  sd::DensityOperator rho = sd::random_state(rng, dim);
  sd::DensityOperator sig = sd::random_state(rng, dim);
  sd::SeesawOptions so;
  so.restarts = 2;
  so.max_iters = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::seesaw_dminf_lower(rho, sig.matrix(), 0.3, so));
  }
}
BENCHMARK(BM_SeesawBracketPoint)->Arg(2)->Arg(4);

BENCHMARK_MAIN();
