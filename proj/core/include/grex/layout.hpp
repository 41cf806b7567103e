#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>

#include "grex/graph.hpp"

namespace grex {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Fruchterman-Reingold constants. All are configurable; the defaults suit
/// a few hundred visible nodes in a 1000 x 1000 abstract area.
struct LayoutParams {
  double area_width = 1000.0;
  double area_height = 1000.0;
  /// Scales the ideal edge length k = c * sqrt(area / n).
  double c_constant = 1.0;
  double initial_temperature = 100.0;
  double cooling = 0.95;
  /// Cooling never takes the temperature below this floor.
  double min_temperature = 0.5;
  double min_separation = 1e-4;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when any constant is out of range.
  void validate() const;
};

struct LayoutState {
  std::map<NodeId, Point> positions;
  std::set<NodeId> pinned;
  double temperature = 0.0;
  std::uint64_t iteration = 0;

  friend bool operator==(const LayoutState&, const LayoutState&) = default;
};

/// Uniform positions in [0, width] x [0, height]. Each node's position
/// depends only on (seed, id), not on which other ids are present.
LayoutState seed_positions(const std::set<NodeId>& ids, const LayoutParams& params);

/// Uniform position for a single node, same generator as seed_positions().
Point seeded_position(const NodeId& id, const LayoutParams& params);

/// One force-directed iteration over the visible subgraph. Throws
/// MissingPosition when a visible node has no position.
LayoutState step(const Graph& graph, const std::set<NodeId>& visible, const LayoutState& state,
                 const LayoutParams& params);

/// Called after every step; return false to stop early.
using LayoutObserver = std::function<bool(const LayoutState&)>;

LayoutState run(const Graph& graph, const std::set<NodeId>& visible, LayoutState state,
                const LayoutParams& params, std::uint64_t iterations,
                const LayoutObserver& observer = {});

/// Throws MissingPosition.
LayoutState pin(LayoutState state, const NodeId& id);
LayoutState unpin(LayoutState state, const NodeId& id);

}  // namespace grex
