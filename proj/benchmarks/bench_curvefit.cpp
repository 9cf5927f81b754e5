#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "netspread/curvefit.hpp"

namespace {

using namespace netspread;

struct Data {
  std::vector<double> x;
  std::vector<double> y;
};

Data decay(std::size_t n) {
  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0.0, 0.3);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 100.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    d.x.push_back(t);
    d.y.push_back(10.82 * std::exp(-0.018 * t) + noise(rng));
  }
  return d;
}

void BM_FitFamily(benchmark::State& state) {
  const auto family = all_families()[static_cast<std::size_t>(state.range(0))];
  auto d = decay(200);
  if (requires_positive_x(family)) {
    for (auto& x : d.x) x += 1.0;
  }
  state.SetLabel(std::string(to_string(family)));
  for (auto _ : state) benchmark::DoNotOptimize(fit(family, d.x, d.y));
}
BENCHMARK(BM_FitFamily)->DenseRange(0, 6);

void BM_BestFit(benchmark::State& state) {
  auto d = decay(static_cast<std::size_t>(state.range(0)));
  for (auto& x : d.x) x += 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(best_fit(d.x, d.y, all_families()));
}
BENCHMARK(BM_BestFit)->Arg(50)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
