#include "grex/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <thread>

#include "graph_access.hpp"
#include "grex/error.hpp"

namespace grex {

namespace {

using detail::GraphAccess;

struct Arc {
  std::size_t from;
  double weight;
};

}  // namespace

PageRankResult pagerank(const Graph& graph, const PageRankParams& params) {
  const std::size_t n = graph.node_count();
  if (n == 0) {
    throw Error(ErrorKind::EmptyGraph, "pagerank needs at least one node");
  }
  if (!(params.damping > 0.0 && params.damping < 1.0) || !(params.tolerance > 0.0) ||
      params.max_iterations <= 0) {
    throw Error(ErrorKind::InvalidArgument, "pagerank parameters out of range");
  }

  // Incoming arcs per node plus total outgoing weight per node.
  std::vector<std::vector<Arc>> incoming(n);
  std::vector<double> out_weight(n, 0.0);
  const auto ends = GraphAccess::endpoints(graph);
  const auto edges = graph.edges();
  for (std::size_t e = 0; e < ends.size(); ++e) {
    const auto [s, t] = ends[e];
    const double w = edges[e].effective_weight();
    incoming[t].push_back({s, w});
    out_weight[s] += w;
    if (!graph.directed()) {
      incoming[s].push_back({t, w});
      out_weight[t] += w;
    }
  }

  const double nd = static_cast<double>(n);
  const double d = params.damping;
  std::vector<double> rank(n, 1.0 / nd);
  std::vector<double> next(n, 0.0);

  PageRankResult result;
  while (result.iterations < params.max_iterations) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (out_weight[v] == 0.0) dangling += rank[v];
    }
    const double base = (1.0 - d) / nd + d * dangling / nd;
    for (std::size_t v = 0; v < n; ++v) {
      double sum = 0.0;
      for (const Arc& a : incoming[v]) {
        sum += rank[a.from] * a.weight / out_weight[a.from];
      }
      next[v] = base + d * sum;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= total;
      change += std::abs(next[v] - rank[v]);
    }
    rank.swap(next);
    ++result.iterations;
    if (change < params.tolerance) {
      result.converged = true;
      break;
    }
  }

  const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
  const auto nodes = graph.nodes();
  for (std::size_t v = 0; v < n; ++v) {
    result.scores.emplace_hint(result.scores.end(), nodes[v].id, rank[v] / total);
  }
  return result;
}

double density(const Graph& graph) {
  const std::size_t n = graph.node_count();
  if (n < 2) {
    throw Error(ErrorKind::TooFewNodes, "density needs at least two nodes");
  }
  std::size_t m = 0;
  for (const auto& [s, t] : GraphAccess::endpoints(graph)) {
    if (s != t) ++m;
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  const double arcs = static_cast<double>(m);
  return graph.directed() ? arcs / pairs : 2.0 * arcs / pairs;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Components as dense-index lists, ordered like connected_components().
std::vector<std::vector<std::size_t>> dense_components(const Graph& graph) {
  const std::size_t n = graph.node_count();
  DisjointSets sets(n);
  for (const auto& [s, t] : GraphAccess::endpoints(graph)) {
    sets.unite(s, t);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = sets.find(v);
    if (slot[root] == n) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(v);
  }

  const auto nodes = graph.nodes();
  auto less_id = [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; };
  for (auto& g : groups) {
    std::sort(g.begin(), g.end(), less_id);
  }
  std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return less_id(a.front(), b.front());
  });
  return groups;
}

std::size_t eccentricity(const std::vector<std::vector<std::size_t>>& adj, std::size_t source,
                         std::vector<std::size_t>& dist) {
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::fill(dist.begin(), dist.end(), kUnseen);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  std::size_t farthest = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    farthest = std::max(farthest, dist[u]);
    for (std::size_t w : adj[u]) {
      if (dist[w] == kUnseen) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  return farthest;
}

}  // namespace

std::vector<std::vector<NodeId>> connected_components(const Graph& graph) {
  const auto nodes = graph.nodes();
  std::vector<std::vector<NodeId>> out;
  for (const auto& group : dense_components(graph)) {
    auto& comp = out.emplace_back();
    comp.reserve(group.size());
    for (std::size_t v : group) comp.push_back(nodes[v].id);
  }
  return out;
}

DiameterResult diameter(const Graph& graph) {
  if (graph.node_count() == 0) {
    throw Error(ErrorKind::EmptyGraph, "diameter needs at least one node");
  }
  const auto groups = dense_components(graph);
  const auto& largest = groups.front();
  const auto adj = detail::simple_undirected_adjacency(graph);

  // BFS sources split across workers; max() makes the result independent of
  // the split.
  constexpr std::size_t kSourcesPerWorker = 256;
  const std::size_t workers = std::clamp<std::size_t>(
      largest.size() / kSourcesPerWorker, 1, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::size_t> best(workers, 0);
  auto sweep = [&](std::size_t worker) {
    std::vector<std::size_t> dist(graph.node_count());
    for (std::size_t i = worker; i < largest.size(); i += workers) {
      best[worker] = std::max(best[worker], eccentricity(adj, largest[i], dist));
    }
  };
  if (workers == 1) {
    sweep(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(sweep, w);
  }

  return {*std::max_element(best.begin(), best.end()), groups.size() > 1};
}

double clustering_coefficient(const Graph& graph) {
  const std::size_t n = graph.node_count();
  if (n == 0) {
    throw Error(ErrorKind::EmptyGraph, "clustering coefficient needs at least one node");
  }
  const auto adj = detail::simple_undirected_adjacency(graph);
  std::vector<char> mark(n, 0);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = adj[v];
    const std::size_t k = nb.size();
    if (k < 2) continue;
    for (std::size_t w : nb) mark[w] = 1;
    std::size_t links = 0;
    for (std::size_t u : nb) {
      for (std::size_t w : adj[u]) {
        if (mark[w]) ++links;
      }
    }
    for (std::size_t w : nb) mark[w] = 0;
    // Each link between two neighbors was counted from both ends.
    total += static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return total / static_cast<double>(n);
}

}  // namespace grex
