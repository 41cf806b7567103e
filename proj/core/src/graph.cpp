#include "grex/graph.hpp"

#include <algorithm>
#include <cmath>

#include "graph_access.hpp"
#include "grex/error.hpp"

namespace grex {

NodeId::NodeId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "node id must not be empty");
  }
}

bool Graph::contains(const NodeId& id) const { return index_.count(id.str()) != 0; }

std::size_t Graph::index_of(const NodeId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownNode, id.str());
  }
  return it->second;
}

const Node& Graph::node(const NodeId& id) const { return nodes_[index_of(id)]; }

std::span<const std::size_t> Graph::incident_edges(const NodeId& id) const {
  return incident_[index_of(id)];
}

Graph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, bool directed) {
  Graph g;
  g.directed_ = directed;
  g.index_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    for (const auto& [name, value] : n.attributes) {
      if (const double* d = std::get_if<double>(&value); d != nullptr && !std::isfinite(*d)) {
        throw Error(ErrorKind::InvalidAttribute,
                    "non-finite value for attribute '" + name + "' of node " + n.id.str());
      }
    }
    if (!g.index_.emplace(n.id.str(), i).second) {
      throw Error(ErrorKind::DuplicateNodeId, n.id.str());
    }
  }

  g.incident_.resize(nodes.size());
  g.endpoints_.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    for (const NodeId* end : {&edge.source, &edge.target}) {
      if (g.index_.count(end->str()) == 0) {
        throw Error(ErrorKind::DanglingEndpoint,
                    "edge " + std::to_string(e) + " references missing node " + end->str());
      }
    }
    if (edge.weight && !(std::isfinite(*edge.weight) && *edge.weight > 0.0)) {
      throw Error(ErrorKind::InvalidWeight, "edge " + std::to_string(e) + " weight must be finite and positive");
    }
    const std::size_t s = g.index_.at(edge.source.str());
    const std::size_t t = g.index_.at(edge.target.str());
    g.endpoints_.emplace_back(s, t);
    g.incident_[s].push_back(e);
    if (t != s) {
      g.incident_[t].push_back(e);
    }
  }

  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  return g;
}

std::size_t degree(const Graph& graph, const NodeId& id, DegreeMode mode) {
  const std::size_t v = detail::GraphAccess::index(graph, id);
  const auto ends = detail::GraphAccess::endpoints(graph);
  std::size_t in = 0;
  std::size_t out = 0;
  for (std::size_t e : detail::GraphAccess::incident(graph, v)) {
    if (ends[e].first == v) ++out;
    if (ends[e].second == v) ++in;
  }
  if (!graph.directed()) {
    return in + out;
  }
  switch (mode) {
    case DegreeMode::In: return in;
    case DegreeMode::Out: return out;
    case DegreeMode::Total: return in + out;
  }
  return in + out;
}

std::set<NodeId> neighbors(const Graph& graph, const NodeId& id) {
  const std::size_t v = detail::GraphAccess::index(graph, id);
  const auto ends = detail::GraphAccess::endpoints(graph);
  const auto nodes = graph.nodes();
  std::set<NodeId> out;
  for (std::size_t e : detail::GraphAccess::incident(graph, v)) {
    const std::size_t other = ends[e].first == v ? ends[e].second : ends[e].first;
    out.insert(nodes[other].id);
  }
  return out;
}

std::vector<Edge> induced_edges(const Graph& graph, const std::set<NodeId>& visible) {
  std::vector<bool> in_view(graph.node_count(), false);
  for (const NodeId& id : visible) {
    in_view[detail::GraphAccess::index(graph, id)] = true;
  }
  const auto ends = detail::GraphAccess::endpoints(graph);
  std::vector<Edge> out;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (in_view[ends[e].first] && in_view[ends[e].second]) {
      out.push_back(graph.edges()[e]);
    }
  }
  return out;
}

namespace detail {

std::vector<std::vector<std::size_t>> simple_undirected_adjacency(const Graph& g) {
  std::vector<std::vector<std::size_t>> adj(g.node_count());
  for (const auto& [s, t] : GraphAccess::endpoints(g)) {
    if (s == t) continue;
    adj[s].push_back(t);
    adj[t].push_back(s);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

}  // namespace detail
}  // namespace grex
