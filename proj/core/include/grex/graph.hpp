#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace grex {

/// Opaque, non-empty node identifier. Ordering is byte-wise.
class NodeId {
 public:
  explicit NodeId(std::string value);
  explicit NodeId(const char* value) : NodeId(std::string(value)) {}

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

using AttributeValue = std::variant<double, std::string, bool>;
using AttributeMap = std::map<std::string, AttributeValue>;

struct Node {
  NodeId id;
  AttributeMap attributes;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId source;
  NodeId target;
  std::optional<double> weight;

  double effective_weight() const noexcept { return weight.value_or(1.0); }
  bool is_self_loop() const noexcept { return source == target; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class DegreeMode { In, Out, Total };

namespace detail {
struct GraphAccess;
}

/// Validated, immutable node/edge store with an incidence index.
///
/// Nodes keep their construction order; that order defines the dense
/// internal indexing used by the algorithms but is never exposed as an id.
class Graph {
 public:
  Graph() = default;

  bool directed() const noexcept { return directed_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(const NodeId& id) const;
  /// Throws UnknownNode.
  const Node& node(const NodeId& id) const;
  /// Indices into edges() of every edge touching `id`. A self-loop appears once.
  std::span<const std::size_t> incident_edges(const NodeId& id) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.directed_ == b.directed_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend struct detail::GraphAccess;
  friend Graph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, bool directed);

  std::size_t index_of(const NodeId& id) const;

  bool directed_ = false;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
};

/// Throws DuplicateNodeId, DanglingEndpoint, InvalidWeight, InvalidAttribute.
Graph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, bool directed);

/// Undirected graphs report the same value for every mode; a self-loop adds
/// 2 there, and 1 in + 1 out on directed graphs.
std::size_t degree(const Graph& graph, const NodeId& id, DegreeMode mode = DegreeMode::Total);

/// In- and out-neighbors together. Contains `id` itself only for self-loops.
std::set<NodeId> neighbors(const Graph& graph, const NodeId& id);

/// Edges with both endpoints in `visible`, in graph order.
std::vector<Edge> induced_edges(const Graph& graph, const std::set<NodeId>& visible);

}  // namespace grex

template <>
struct std::hash<grex::NodeId> {
  std::size_t operator()(const grex::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
