#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "netspread/centrality.hpp"

namespace {

using namespace netspread;

// Random connected graph on n nodes with roughly `extra` additional edges per node.
FlowNetwork random_network(std::size_t n, std::size_t extra) {
  std::mt19937 rng(42);
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    NodeRecord r;
    r.id = i;
    r.code = "N" + std::to_string(i);
    r.name = r.code;
    nodes.push_back(r);
  }
  std::vector<FlowEdge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add = [&](std::size_t u, std::size_t v) {
    if (u != v && seen.emplace(u, v).second) edges.push_back({u, v, 1.0 + rng() % 1000});
  };
  for (std::size_t v = 1; v < n; ++v) add(rng() % v, v);
  for (std::size_t k = 0; k < n * extra; ++k) add(rng() % n, rng() % n);
  return FlowNetwork(std::move(nodes), std::move(edges));
}

void BM_Betweenness(benchmark::State& state) {
  const auto net = random_network(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(net));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_AllMetrics(benchmark::State& state) {
  const auto net = random_network(static_cast<std::size_t>(state.range(0)), 2);
  MetricsOptions opts;
  opts.reference = "N0";
  for (auto _ : state) benchmark::DoNotOptimize(compute_all_metrics(net, opts));
}
BENCHMARK(BM_AllMetrics)->Arg(75)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
