#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "grex/graph.hpp"

namespace grex {

struct PageRankParams {
  static constexpr double kDefaultDamping = 0.85;
  static constexpr double kDefaultTolerance = 1e-8;

  double damping = kDefaultDamping;
  /// Stop once the L1 change between iterates drops below this.
  double tolerance = kDefaultTolerance;
  int max_iterations = 200;
};

using ScoreMap = std::map<NodeId, double>;

struct PageRankResult {
  ScoreMap scores;
  bool converged = false;
  int iterations = 0;
};

/**
 * Power iteration with uniform teleport. Dangling mass is spread uniformly,
 * transitions are proportional to edge weight and undirected edges act as
 * two arcs. Hitting max_iterations is reported through `converged`, not
 * thrown. Throws EmptyGraph, InvalidArgument.
 */
PageRankResult pagerank(const Graph& graph, const PageRankParams& params = {});

/// m / (n(n-1)), doubled for undirected graphs; self-loops excluded from m.
/// Throws TooFewNodes when n < 2.
double density(const Graph& graph);

/// Weakly connected components, largest first, ties by smallest member id.
/// Members of each component are sorted ascending.
std::vector<std::vector<NodeId>> connected_components(const Graph& graph);

struct DiameterResult {
  std::size_t diameter = 0;
  /// More than one weakly connected component exists.
  bool disconnected = false;
};

/// Hop diameter of the largest weakly connected component. Throws EmptyGraph.
DiameterResult diameter(const Graph& graph);

/// Mean local clustering coefficient over all nodes on the simple undirected
/// projection; degree < 2 contributes 0. Throws EmptyGraph.
double clustering_coefficient(const Graph& graph);

}  // namespace grex
