#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace grex::testing {

namespace {

struct Indexed {
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> index;
};

Indexed index_nodes(const Graph& g) {
  Indexed out;
  for (const Node& n : g.nodes()) {
    out.index[n.id.str()] = out.ids.size();
    out.ids.push_back(n.id.str());
  }
  return out;
}

// Row-stochastic transition matrix; rows with no out-weight stay zero.
std::vector<std::vector<double>> transitions(const Graph& g, const Indexed& ix, std::vector<bool>& dangling) {
  const std::size_t n = ix.ids.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    const std::size_t s = ix.index.at(e.source.str());
    const std::size_t t = ix.index.at(e.target.str());
    const double weight = e.weight.value_or(1.0);
    w[s][t] += weight;
    if (!g.directed()) w[t][s] += weight;
  }
  dangling.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double row = std::accumulate(w[i].begin(), w[i].end(), 0.0);
    if (row == 0.0) {
      dangling[i] = true;
      continue;
    }
    for (double& x : w[i]) x /= row;
  }
  return w;
}

}  // namespace

std::map<std::string, double> dense_pagerank(const Graph& g, double damping) {
  const Indexed ix = index_nodes(g);
  const std::size_t n = ix.ids.size();
  std::vector<bool> dangling;
  const auto p = transitions(g, ix, dangling);
  const double nd = static_cast<double>(n);

  // x_j = (1-d)/n + d * sum_i x_i * G_ij, with G_ij = 1/n for dangling i.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    a[j][j] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gij = dangling[i] ? 1.0 / nd : p[i][j];
      a[j][i] -= damping * gij;
    }
    a[j][n] = (1.0 - damping) / nd;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a[i][n] / a[i][i];
    total += x[i];
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < n; ++i) out[ix.ids[i]] = x[i] / total;
  return out;
}

std::map<std::string, double> dense_power_iteration(const Graph& g, double damping, double tolerance,
                                                    int max_iterations) {
  const Indexed ix = index_nodes(g);
  const std::size_t n = ix.ids.size();
  std::vector<bool> dangling;
  const auto p = transitions(g, ix, dangling);
  const double nd = static_cast<double>(n);
  std::vector<double> x(n, 1.0 / nd), y(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x[i] * (dangling[i] ? 1.0 / nd : p[i][j]);
      y[j] = (1.0 - damping) / nd + damping * s;
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change += std::abs(y[j] - x[j]);
    x.swap(y);
    if (change < tolerance) break;
  }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < n; ++i) out[ix.ids[i]] = x[i] / total;
  return out;
}

std::vector<double> brute_force_local_clustering(const Graph& g) {
  const Indexed ix = index_nodes(g);
  const std::size_t n = ix.ids.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const Edge& e : g.edges()) {
    const std::size_t s = ix.index.at(e.source.str());
    const std::size_t t = ix.index.at(e.target.str());
    if (s != t) adj[s][t] = adj[t][s] = true;
  }
  std::vector<double> local(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t pairs = 0, closed = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (a == v || b == v || !adj[v][a] || !adj[v][b]) continue;
        ++pairs;
        if (adj[a][b]) ++closed;
      }
    }
    local[v] = pairs == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(pairs);
  }
  return local;
}

NaiveStats naive_stats(const Graph& g) {
  const Indexed ix = index_nodes(g);
  const std::size_t n = ix.ids.size();
  NaiveStats out;

  std::size_t m = 0;
  for (const Edge& e : g.edges()) {
    if (e.source != e.target) ++m;
  }
  if (n >= 2) {
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    out.density = (g.directed() ? 1.0 : 2.0) * static_cast<double>(m) / pairs;
  }

  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
  for (const Edge& e : g.edges()) {
    const std::size_t s = ix.index.at(e.source.str());
    const std::size_t t = ix.index.at(e.target.str());
    if (s == t) continue;
    dist[s][t] = dist[t][s] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
      }
    }
  }

  std::vector<bool> assigned(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::string> comp;
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] < kInf) {
        assigned[j] = true;
        comp.push_back(ix.ids[j]);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.components.push_back(std::move(comp));
  }
  std::sort(out.components.begin(), out.components.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  out.disconnected = out.components.size() > 1;

  if (!out.components.empty()) {
    const auto& largest = out.components.front();
    for (const auto& a : largest) {
      for (const auto& b : largest) {
        out.diameter = std::max(out.diameter, dist[ix.index.at(a)][ix.index.at(b)]);
      }
    }
  }

  const auto local = brute_force_local_clustering(g);
  if (n > 0) out.clustering = std::accumulate(local.begin(), local.end(), 0.0) / static_cast<double>(n);
  return out;
}

std::vector<Node> numbered_nodes(std::size_t n, const std::string& prefix) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(Node{NodeId(prefix + std::to_string(i)), {}});
  return nodes;
}

Graph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  auto nodes = numbered_nodes(o.nodes);
  std::vector<Edge> edges;
  if (o.nodes > 0) {
    std::uniform_int_distribution<std::size_t> pick(0, o.nodes - 1);
    std::uniform_real_distribution<double> weight(0.1, 5.0);
    while (edges.size() < o.edges) {
      const std::size_t s = pick(rng);
      const std::size_t t = pick(rng);
      if (s == t && !o.allow_self_loops) continue;
      std::optional<double> w;
      if (o.weighted) w = weight(rng);
      edges.push_back(Edge{nodes[s].id, nodes[t].id, w});
    }
  }
  return build_graph(std::move(nodes), std::move(edges), o.directed);
}

Graph make_graph(const std::vector<std::string>& ids,
                 const std::vector<std::pair<std::string, std::string>>& edges, bool directed) {
  std::vector<Node> nodes;
  for (const auto& id : ids) nodes.push_back(Node{NodeId(id), {}});
  std::vector<Edge> es;
  for (const auto& [s, t] : edges) es.push_back(Edge{NodeId(s), NodeId(t), std::nullopt});
  return build_graph(std::move(nodes), std::move(es), directed);
}

UnionFind::UnionFind(const std::vector<std::string>& ids) {
  for (const auto& id : ids) parent_[id] = id;
}

std::string UnionFind::root(const std::string& x) const {
  std::string r = x;
  while (parent_.at(r) != r) r = parent_.at(r);
  parent_[x] = r;
  return r;
}

void UnionFind::unite(const std::string& a, const std::string& b) {
  const std::string ra = root(a), rb = root(b);
  if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
}

std::vector<std::vector<std::string>> UnionFind::groups() const {
  std::map<std::string, std::vector<std::string>> by_root;
  for (const auto& [id, _] : parent_) by_root[root(id)].push_back(id);
  std::vector<std::vector<std::string>> out;
  for (auto& [_, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

}  // namespace grex::testing
