#include "generators.hpp"

#include <cmath>

namespace grex::testing {

namespace {

const char* const kIdPieces[] = {"a", "Ω", "\"q\"", "back\\slash", " sp ", "tab\t", "日本", "x/y", "#", "{}"};
const char* const kAttrNames[] = {"label", "year", "venue", "score", "flag"};

double wide_double(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mantissa(1.0, 10.0);
  std::uniform_int_distribution<int> exponent(-12, 12);
  std::bernoulli_distribution negative(0.3);
  const double v = mantissa(rng) * std::pow(10.0, exponent(rng));
  return negative(rng) ? -v : v;
}

Color random_color(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(0, 255);
  return {static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
}

Selector random_selector(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      return Selector::pagerank();
    case 1:
      return Selector::degree();
    case 2:
      return Selector::by_attribute(kAttrNames[std::uniform_int_distribution<int>(0, 4)(rng)]);
    default:
      return Selector::constant();
  }
}

}  // namespace

Graph random_attributed_graph(std::mt19937_64& rng, std::size_t max_nodes, std::size_t max_edges) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_nodes)(rng);
  std::uniform_int_distribution<int> piece(0, std::size(kIdPieces) - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    Node node{NodeId(std::string(kIdPieces[piece(rng)]) + std::to_string(i)), {}};
    for (const char* name : kAttrNames) {
      if (!coin(rng)) continue;
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
          node.attributes[name] = wide_double(rng);
          break;
        case 1:
          node.attributes[name] = std::string(kIdPieces[piece(rng)]) + "\né";
          break;
        default:
          node.attributes[name] = coin(rng);
      }
    }
    nodes.push_back(std::move(node));
  }
  std::vector<Edge> edges;
  if (n > 0) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, max_edges)(rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < m; ++i) {
      std::optional<double> w;
      if (coin(rng)) w = std::abs(wide_double(rng));
      edges.push_back(Edge{nodes[pick(rng)].id, nodes[pick(rng)].id, w});
    }
  }
  return build_graph(std::move(nodes), std::move(edges), coin(rng));
}

ViewState random_view(std::mt19937_64& rng, const Graph& graph) {
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution rare(0.15);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  ViewState v;
  for (const Node& n : graph.nodes()) {
    const bool visible = coin(rng);
    if (visible) v.visible.insert(n.id);
    if (visible || rare(rng)) {
      const Point p{coord(rng), coord(rng)};
      v.layout.positions[n.id] = rare(rng) ? Point{wide_double(rng), -p.y} : p;
      if (rare(rng)) v.layout.pinned.insert(n.id);
    }
    if (rare(rng)) {
      StyleOverride o;
      if (coin(rng)) o.size = std::abs(wide_double(rng));
      if (coin(rng)) o.color = random_color(rng);
      if (coin(rng)) o.shape = static_cast<Shape>(std::uniform_int_distribution<int>(0, 2)(rng));
      if (coin(rng)) o.label = "label \"" + n.id.str() + "\"";
      v.overrides[n.id] = o;
    }
  }
  StyleMapping& s = v.global_style;
  s.size_by = random_selector(rng);
  s.color_by = random_selector(rng);
  const double lo = std::uniform_real_distribution<double>(0.5, 10.0)(rng);
  s.size_range = {lo, lo + std::uniform_real_distribution<double>(0.0, 30.0)(rng)};
  s.color_scale.clear();
  for (int i = std::uniform_int_distribution<int>(1, 4)(rng); i > 0; --i) s.color_scale.push_back(random_color(rng));
  s.shape = static_cast<Shape>(std::uniform_int_distribution<int>(0, 2)(rng));
  if (coin(rng)) s.label_by = kAttrNames[std::uniform_int_distribution<int>(0, 4)(rng)];
  s.label_size = std::uniform_real_distribution<double>(6.0, 30.0)(rng);
  return v;
}

ViewState persisted_part(ViewState view) {
  view.layout.temperature = 0.0;
  view.layout.iteration = 0;
  view.pagerank_cache.reset();
  return view;
}

}  // namespace grex::testing
