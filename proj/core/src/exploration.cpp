#include "grex/exploration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "graph_access.hpp"
#include "grex/error.hpp"
#include "hashing.hpp"

namespace grex {

namespace {

constexpr std::string_view kAttributePrefix = "attribute:";

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool graph_has_attribute(const Graph& graph, const std::string& name) {
  return std::any_of(graph.nodes().begin(), graph.nodes().end(),
                     [&](const Node& n) { return n.attributes.count(name) != 0; });
}

void require_attribute(const Graph& graph, const Selector& key) {
  if (key.kind == Selector::Kind::Attribute && !graph_has_attribute(graph, key.attribute)) {
    throw Error(ErrorKind::UnknownAttribute, key.attribute);
  }
}

// Sort value of a node under some selector. Present values order before
// missing ones; numbers order before text.
struct SortValue {
  enum class Rank { Number = 0, Text = 1, Missing = 2 };
  Rank rank = Rank::Missing;
  double number = 0.0;
  std::string text;
};

SortValue sort_value(const NeighborCandidate& c, const Selector& key) {
  switch (key.kind) {
    case Selector::Kind::PageRank: return {SortValue::Rank::Number, c.pagerank, {}};
    case Selector::Kind::Degree:
      return {SortValue::Rank::Number, static_cast<double>(c.degree), {}};
    case Selector::Kind::Constant: return {SortValue::Rank::Number, 0.0, {}};
    case Selector::Kind::Attribute: break;
  }
  auto it = c.attributes.find(key.attribute);
  if (it == c.attributes.end()) return {};
  if (const auto* d = std::get_if<double>(&it->second)) return {SortValue::Rank::Number, *d, {}};
  if (const auto* b = std::get_if<bool>(&it->second)) {
    return {SortValue::Rank::Number, *b ? 1.0 : 0.0, {}};
  }
  return {SortValue::Rank::Text, 0.0, std::get<std::string>(it->second)};
}

void sort_candidates(std::vector<NeighborCandidate>& rows, const Selector& key, bool descending) {
  std::vector<std::pair<SortValue, std::size_t>> keyed;
  keyed.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) keyed.emplace_back(sort_value(rows[i], key), i);

  auto before = [&](const auto& a, const auto& b) {
    const SortValue& x = a.first;
    const SortValue& y = b.first;
    const bool x_missing = x.rank == SortValue::Rank::Missing;
    const bool y_missing = y.rank == SortValue::Rank::Missing;
    if (x_missing != y_missing) return y_missing;
    if (!x_missing) {
      if (x.rank != y.rank) return descending ? x.rank > y.rank : x.rank < y.rank;
      if (x.rank == SortValue::Rank::Number && x.number != y.number) {
        return descending ? x.number > y.number : x.number < y.number;
      }
      if (x.rank == SortValue::Rank::Text && x.text != y.text) {
        return descending ? x.text > y.text : x.text < y.text;
      }
    }
    return rows[a.second].id < rows[b.second].id;
  };
  std::sort(keyed.begin(), keyed.end(), before);

  std::vector<NeighborCandidate> sorted;
  sorted.reserve(rows.size());
  for (auto& [_, i] : keyed) sorted.push_back(std::move(rows[i]));
  rows = std::move(sorted);
}

NeighborCandidate make_row(const Graph& graph, const ScoreMap& ranks, const ViewState& view,
                           const Node& node) {
  return {node.id, ranks.at(node.id), degree(graph, node.id), node.attributes,
          view.visible.count(node.id) != 0};
}

Point near_anchor(const Point& anchor, const NodeId& anchor_id, const NodeId& id,
                  const LayoutParams& params) {
  std::uint64_t h = detail::splitmix64(params.seed ^ detail::fnv1a(anchor_id.str()));
  h = detail::splitmix64(h ^ detail::fnv1a(id.str()));
  const double angle = detail::unit_interval(h) * 2.0 * std::numbers::pi;
  const double radius = (0.5 + 0.5 * detail::unit_interval(detail::splitmix64(h))) * 0.02 *
                        std::min(params.area_width, params.area_height);
  return {std::clamp(anchor.x + radius * std::cos(angle), 0.0, params.area_width),
          std::clamp(anchor.y + radius * std::sin(angle), 0.0, params.area_height)};
}

}  // namespace

std::string Selector::to_string() const {
  switch (kind) {
    case Kind::PageRank: return "pagerank";
    case Kind::Degree: return "degree";
    case Kind::Constant: return "constant";
    case Kind::Attribute: return std::string(kAttributePrefix) + attribute;
  }
  return "constant";
}

Selector Selector::parse(std::string_view text) {
  if (text == "pagerank") return pagerank();
  if (text == "degree") return degree();
  if (text == "constant") return constant();
  if (text.substr(0, kAttributePrefix.size()) == kAttributePrefix &&
      text.size() > kAttributePrefix.size()) {
    return by_attribute(std::string(text.substr(kAttributePrefix.size())));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown selector '" + std::string(text) + "'");
}

std::string Color::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "#";
  for (std::uint8_t c : {r, g, b}) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xf]);
  }
  return out;
}

Color Color::from_hex(std::string_view text) {
  if (text.size() != 7 || text[0] != '#') {
    throw Error(ErrorKind::InvalidArgument, "expected #rrggbb color, got '" + std::string(text) + "'");
  }
  std::uint8_t channels[3];
  for (int i = 0; i < 3; ++i) {
    const int hi = hex_digit(text[1 + 2 * i]);
    const int lo = hex_digit(text[2 + 2 * i]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorKind::InvalidArgument, "expected #rrggbb color, got '" + std::string(text) + "'");
    }
    channels[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return {channels[0], channels[1], channels[2]};
}

std::string_view to_string(Shape shape) noexcept {
  switch (shape) {
    case Shape::Circle: return "circle";
    case Shape::Square: return "square";
    case Shape::Triangle: return "triangle";
  }
  return "circle";
}

Shape parse_shape(std::string_view text) {
  if (text == "circle") return Shape::Circle;
  if (text == "square") return Shape::Square;
  if (text == "triangle") return Shape::Triangle;
  throw Error(ErrorKind::InvalidArgument, "unknown shape '" + std::string(text) + "'");
}

void StyleMapping::validate() const {
  const bool sizes_ok = std::isfinite(size_range.min) && std::isfinite(size_range.max) &&
                        size_range.min > 0.0 && size_range.min <= size_range.max;
  if (!sizes_ok) throw Error(ErrorKind::InvalidArgument, "size_range must satisfy 0 < min <= max");
  if (color_scale.empty()) throw Error(ErrorKind::InvalidArgument, "color_scale needs a stop");
  if (!(std::isfinite(label_size) && label_size > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "label_size must be positive");
  }
}

ViewState show(const Graph& graph, ViewState view, const std::set<NodeId>& ids,
               const LayoutParams& params, const std::optional<NodeId>& anchor) {
  for (const NodeId& id : ids) {
    if (!graph.contains(id)) throw Error(ErrorKind::UnknownNode, id.str());
  }
  std::optional<Point> anchor_at;
  if (anchor) {
    if (!graph.contains(*anchor)) throw Error(ErrorKind::UnknownNode, anchor->str());
    if (auto it = view.layout.positions.find(*anchor); it != view.layout.positions.end()) {
      anchor_at = it->second;
    }
  }
  for (const NodeId& id : ids) {
    view.visible.insert(id);
    if (view.layout.positions.count(id) != 0) continue;
    view.layout.positions.emplace(
        id, anchor_at ? near_anchor(*anchor_at, *anchor, id, params) : seeded_position(id, params));
  }
  return view;
}

ViewState hide(const Graph& graph, ViewState view, const std::set<NodeId>& ids) {
  for (const NodeId& id : ids) {
    if (!graph.contains(id)) throw Error(ErrorKind::UnknownNode, id.str());
  }
  for (const NodeId& id : ids) view.visible.erase(id);
  return view;
}

const ScoreMap& ensure_pagerank(const Graph& graph, ViewState& view) {
  if (!view.pagerank_cache) {
    view.pagerank_cache = graph.node_count() == 0 ? ScoreMap{} : pagerank(graph).scores;
  }
  return *view.pagerank_cache;
}

std::vector<NeighborCandidate> neighbor_candidates(const Graph& graph, ViewState& view,
                                                   const NodeId& id, const Selector& sort_key,
                                                   bool descending) {
  if (!graph.contains(id)) throw Error(ErrorKind::UnknownNode, id.str());
  if (view.visible.count(id) == 0) throw Error(ErrorKind::NodeNotVisible, id.str());
  require_attribute(graph, sort_key);
  const ScoreMap& ranks = ensure_pagerank(graph, view);

  std::vector<NeighborCandidate> rows;
  for (const NodeId& other : neighbors(graph, id)) {
    if (other == id) continue;
    rows.push_back(make_row(graph, ranks, view, graph.node(other)));
  }
  sort_candidates(rows, sort_key, descending);
  return rows;
}

ViewState expand(const Graph& graph, ViewState view, const NodeId& id, std::size_t k,
                 const Selector& sort_key, const LayoutParams& params) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "expand needs k >= 1");
  std::set<NodeId> chosen;
  for (const NeighborCandidate& c : neighbor_candidates(graph, view, id, sort_key, true)) {
    if (chosen.size() == k) break;
    if (!c.already_visible) chosen.insert(c.id);
  }
  return show(graph, std::move(view), chosen, params, id);
}

std::vector<NeighborCandidate> data_sheet(const Graph& graph, ViewState& view,
                                          const Selector& sort_key, bool descending, Page page) {
  require_attribute(graph, sort_key);
  const ScoreMap& ranks = ensure_pagerank(graph, view);
  std::vector<NeighborCandidate> rows;
  rows.reserve(graph.node_count());
  for (const Node& node : graph.nodes()) rows.push_back(make_row(graph, ranks, view, node));
  sort_candidates(rows, sort_key, descending);

  if (page.offset >= rows.size()) return {};
  const std::size_t end = page.offset + std::min(page.limit, rows.size() - page.offset);
  return {std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(page.offset)),
          std::make_move_iterator(rows.begin() + static_cast<std::ptrdiff_t>(end))};
}

StyleResolver::StyleResolver(const Graph& graph, const ViewState& view)
    : graph_(graph), view_(view) {
  view.global_style.validate();
  const auto needs_rank = [](const Selector& s) { return s.kind == Selector::Kind::PageRank; };
  if (needs_rank(view.global_style.size_by) || needs_rank(view.global_style.color_by)) {
    if (view.pagerank_cache) {
      pagerank_ = view.pagerank_cache;
    } else if (graph.node_count() > 0) {
      pagerank_ = pagerank(graph).scores;
    }
  }
  size_ = evaluate(view.global_style.size_by);
  color_ = evaluate(view.global_style.color_by);
}

StyleResolver::Channel StyleResolver::evaluate(const Selector& selector) const {
  Channel ch;
  ch.values.reserve(graph_.node_count());
  for (const Node& node : graph_.nodes()) {
    std::optional<double> q;
    switch (selector.kind) {
      case Selector::Kind::PageRank: q = pagerank_->at(node.id); break;
      case Selector::Kind::Degree: q = static_cast<double>(degree(graph_, node.id)); break;
      case Selector::Kind::Constant: break;
      case Selector::Kind::Attribute:
        if (auto it = node.attributes.find(selector.attribute); it != node.attributes.end()) {
          if (const auto* d = std::get_if<double>(&it->second)) q = *d;
          if (const auto* b = std::get_if<bool>(&it->second)) q = *b ? 1.0 : 0.0;
        }
        break;
    }
    ch.values.push_back(q);
  }
  bool first = true;
  for (const auto& q : ch.values) {
    if (!q) continue;
    ch.lo = first ? *q : std::min(ch.lo, *q);
    ch.hi = first ? *q : std::max(ch.hi, *q);
    first = false;
  }
  return ch;
}

double StyleResolver::Channel::unit(std::size_t node) const {
  const auto& q = values[node];
  if (!q || !(hi > lo)) return 0.0;
  return std::clamp((*q - lo) / (hi - lo), 0.0, 1.0);
}

ResolvedStyle StyleResolver::operator()(const NodeId& id) const {
  const std::size_t v = detail::GraphAccess::index(graph_, id);
  const StyleMapping& style = view_.global_style;

  ResolvedStyle out;
  const double t_size = size_.unit(v);
  out.size = style.size_range.min + t_size * (style.size_range.max - style.size_range.min);
  out.size = std::clamp(out.size, style.size_range.min, style.size_range.max);

  const auto& stops = style.color_scale;
  if (stops.size() == 1) {
    out.color = stops.front();
  } else {
    const double pos = color_.unit(v) * static_cast<double>(stops.size() - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), stops.size() - 2);
    const double f = pos - static_cast<double>(i);
    auto mix = [f](std::uint8_t a, std::uint8_t b) {
      return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * f));
    };
    out.color = {mix(stops[i].r, stops[i + 1].r), mix(stops[i].g, stops[i + 1].g),
                 mix(stops[i].b, stops[i + 1].b)};
  }
  out.shape = style.shape;

  if (style.label_by) {
    const Node& node = graph_.nodes()[v];
    if (auto it = node.attributes.find(*style.label_by); it != node.attributes.end()) {
      std::visit(
          [&](const auto& value) {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out.label = value;
            } else if constexpr (std::is_same_v<T, bool>) {
              out.label = value ? "true" : "false";
            } else {
              char buf[32];
              auto res = std::to_chars(buf, buf + sizeof buf, value);
              out.label.assign(buf, res.ptr);
            }
          },
          it->second);
    }
  }

  if (auto it = view_.overrides.find(id); it != view_.overrides.end()) {
    const StyleOverride& o = it->second;
    if (o.size) out.size = *o.size;
    if (o.color) out.color = *o.color;
    if (o.shape) out.shape = *o.shape;
    if (o.label) out.label = *o.label;
  }
  return out;
}

ResolvedStyle resolve_style(const Graph& graph, const ViewState& view, const NodeId& id) {
  return StyleResolver(graph, view)(id);
}

}  // namespace grex
