#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "grex/algorithms.hpp"
#include "grex/ingest.hpp"
#include "grex/layout.hpp"
#include "grex/snapshot.hpp"

using namespace grex;

namespace {

// Uniform random multigraph with ids "n0".."n<nodes-1>".
Graph random_graph(std::size_t nodes, std::size_t edges, bool directed) {
  std::mt19937_64 rng(nodes * 31 + edges);
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::vector<Node> ns;
  for (std::size_t i = 0; i < nodes; ++i) ns.push_back(Node{NodeId("n" + std::to_string(i)), {}});
  std::vector<Edge> es;
  for (std::size_t i = 0; i < edges; ++i) es.push_back({ns[pick(rng)].id, ns[pick(rng)].id, std::nullopt});
  return build_graph(std::move(ns), std::move(es), directed);
}

void BM_PageRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = random_graph(n, 4 * n, true);
  for (auto _ : state) benchmark::DoNotOptimize(pagerank(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PageRank)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_LayoutStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = random_graph(n, 4 * n, false);
  const ViewState view = initial_view(g, InitialViewPolicy::whole_graph());
  const LayoutParams params;
  for (auto _ : state) benchmark::DoNotOptimize(step(g, view.visible, view.layout, params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LayoutStep)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oNSquared);

void BM_SnapshotEncode(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = random_graph(n, 4 * n, false);
  const ViewState view = initial_view(g, InitialViewPolicy::whole_graph());
  const SnapshotMetadata meta{"bench", "2020-06-01T12:00:00Z", "grex benchmarks"};
  std::size_t bytes = 0;
  for (auto _ : state) {
    const std::string doc = encode(g, view, meta);
    bytes = doc.size();
    benchmark::DoNotOptimize(doc.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_SnapshotEncode)->Arg(250)->Arg(5000);

void BM_SnapshotDecode(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = random_graph(n, 4 * n, false);
  const std::string doc = encode(g, initial_view(g, InitialViewPolicy::whole_graph()), {});
  for (auto _ : state) benchmark::DoNotOptimize(decode(doc));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_SnapshotDecode)->Arg(250)->Arg(5000);

void BM_ImportCsv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::string text = "source,target\n";
  for (std::size_t i = 0; i < 4 * n; ++i) {
    text += "n" + std::to_string(pick(rng)) + ",n" + std::to_string(pick(rng)) + "\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(parse_edge_list(text, ImportSpec{}));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ImportCsv)->Arg(5000);

}  // namespace
