#include <benchmark/benchmark.h>

#include <random>

#include "netspread/kde.hpp"

namespace {

using namespace netspread;

std::vector<double> bimodal(std::size_t n) {
  std::mt19937 rng(7);
  std::normal_distribution<double> a(30.0, 5.0);
  std::normal_distribution<double> b(60.0, 5.0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i % 2 ? b(rng) : a(rng);
  return v;
}

void BM_KdeEstimate(benchmark::State& state) {
  const auto v = bimodal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kde_estimate(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KdeEstimate)->RangeMultiplier(4)->Range(75, 75 * 256)->Complexity();

void BM_StageCut(benchmark::State& state) {
  const auto curve = kde_estimate(bimodal(75), std::nullopt, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_stage_cut(curve));
}
BENCHMARK(BM_StageCut)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
