#include <algorithm>

#include "grex/error.hpp"
#include "grex/ingest.hpp"

namespace grex {

ViewState initial_view(const Graph& graph, const InitialViewPolicy& policy,
                       const LayoutParams& params, const VizHints& hints) {
  ViewState view;
  if (policy.mode == InitialViewPolicy::Mode::WholeGraph) {
    for (const Node& n : graph.nodes()) view.visible.insert(n.id);
  } else {
    if (policy.k == 0) throw Error(ErrorKind::InvalidArgument, "top-pagerank needs k >= 1");
    if (graph.node_count() == 0) throw Error(ErrorKind::EmptyGraph, "top-pagerank on empty graph");
    const ScoreMap& ranks = ensure_pagerank(graph, view);
    std::vector<std::pair<double, const NodeId*>> order;
    order.reserve(ranks.size());
    for (const auto& [id, score] : ranks) order.emplace_back(score, &id);
    const std::size_t take = std::min(policy.k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return *a.second < *b.second;
                      });
    for (std::size_t i = 0; i < take; ++i) view.visible.insert(*order[i].second);
  }

  view.layout = seed_positions(view.visible, params);
  for (const auto& [id, p] : hints.positions) {
    if (graph.contains(id)) view.layout.positions.insert_or_assign(id, p);
  }
  for (const auto& [id, o] : hints.overrides) {
    if (graph.contains(id)) view.overrides.insert_or_assign(id, o);
  }
  return view;
}

}  // namespace grex
