#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "grex/graph.hpp"

namespace grex::detail {

/// Dense-index view used inside the library. Node index i is nodes()[i].
struct GraphAccess {
  static std::size_t index(const Graph& g, const NodeId& id) { return g.index_of(id); }

  static std::span<const std::pair<std::size_t, std::size_t>> endpoints(const Graph& g) {
    return g.endpoints_;
  }

  static std::span<const std::size_t> incident(const Graph& g, std::size_t node) {
    return g.incident_[node];
  }
};

/// Simple undirected adjacency (direction ignored, parallel edges and
/// self-loops dropped), neighbor lists sorted by dense index.
std::vector<std::vector<std::size_t>> simple_undirected_adjacency(const Graph& g);

}  // namespace grex::detail
