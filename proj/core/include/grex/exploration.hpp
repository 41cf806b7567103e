#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grex/algorithms.hpp"
#include "grex/graph.hpp"
#include "grex/layout.hpp"

namespace grex {

/// Node quantity driving a style channel or a sort order.
struct Selector {
  enum class Kind { PageRank, Degree, Attribute, Constant };

  Kind kind = Kind::Constant;
  std::string attribute;  // only for Kind::Attribute

  static Selector pagerank() { return {Kind::PageRank, {}}; }
  static Selector degree() { return {Kind::Degree, {}}; }
  static Selector constant() { return {Kind::Constant, {}}; }
  static Selector by_attribute(std::string name) { return {Kind::Attribute, std::move(name)}; }

  /// "pagerank", "degree", "constant" or "attribute:<name>".
  std::string to_string() const;
  /// Throws InvalidArgument.
  static Selector parse(std::string_view text);

  friend bool operator==(const Selector&, const Selector&) = default;
};

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  /// Lowercase "#rrggbb".
  std::string to_hex() const;
  /// Accepts "#rrggbb" in either case. Throws InvalidArgument.
  static Color from_hex(std::string_view text);

  friend bool operator==(const Color&, const Color&) = default;
};

enum class Shape { Circle, Square, Triangle };

std::string_view to_string(Shape shape) noexcept;
/// Throws InvalidArgument.
Shape parse_shape(std::string_view text);

struct SizeRange {
  double min = 3.0;
  double max = 15.0;

  friend bool operator==(const SizeRange&, const SizeRange&) = default;
};

/// Global rule mapping node quantities to visual channels. Quantities are
/// mapped linearly over their observed [min, max] across the whole graph.
struct StyleMapping {
  Selector size_by = Selector::constant();
  SizeRange size_range;
  Selector color_by = Selector::constant();
  std::vector<Color> color_scale{{0xc6, 0xdb, 0xef}, {0x08, 0x51, 0x9c}};
  Shape shape = Shape::Circle;
  /// Attribute whose value becomes the label; none means no label.
  std::optional<std::string> label_by;
  double label_size = 12.0;

  /// Throws InvalidArgument.
  void validate() const;

  friend bool operator==(const StyleMapping&, const StyleMapping&) = default;
};

/// Per-node field-wise replacement of the mapped style.
struct StyleOverride {
  std::optional<double> size;
  std::optional<Color> color;
  std::optional<Shape> shape;
  std::optional<std::string> label;

  bool empty() const noexcept { return !size && !color && !shape && !label; }

  friend bool operator==(const StyleOverride&, const StyleOverride&) = default;
};

struct ViewState {
  std::set<NodeId> visible;
  LayoutState layout;
  StyleMapping global_style;
  std::map<NodeId, StyleOverride> overrides;
  /// PageRank over the full graph, filled on first use.
  std::optional<ScoreMap> pagerank_cache;

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

struct NeighborCandidate {
  NodeId id;
  double pagerank = 0.0;
  std::size_t degree = 0;
  AttributeMap attributes;
  bool already_visible = false;

  friend bool operator==(const NeighborCandidate&, const NeighborCandidate&) = default;
};

struct ResolvedStyle {
  double size = 0.0;
  Color color;
  Shape shape = Shape::Circle;
  std::string label;

  friend bool operator==(const ResolvedStyle&, const ResolvedStyle&) = default;
};

struct Page {
  std::size_t offset = 0;
  std::size_t limit = static_cast<std::size_t>(-1);
};

/// Makes `ids` visible. Nodes that were visible before keep their old
/// position; new ones land next to `anchor` when given, otherwise at their
/// seeded position. Throws UnknownNode.
ViewState show(const Graph& graph, ViewState view, const std::set<NodeId>& ids,
               const LayoutParams& params = {}, const std::optional<NodeId>& anchor = std::nullopt);

/// Positions, pins and overrides are retained for hidden nodes.
ViewState hide(const Graph& graph, ViewState view, const std::set<NodeId>& ids);

/// Computes and caches full-graph PageRank with default parameters.
const ScoreMap& ensure_pagerank(const Graph& graph, ViewState& view);

/// All neighbors of a visible node in sort order; ties always go to the
/// smaller id and nodes lacking a sort attribute come last. Throws
/// UnknownNode, NodeNotVisible, UnknownAttribute.
std::vector<NeighborCandidate> neighbor_candidates(const Graph& graph, ViewState& view,
                                                   const NodeId& id, const Selector& sort_key,
                                                   bool descending = true);

/// Shows the first `k` hidden candidates around `id`. Throws as
/// neighbor_candidates, plus InvalidArgument for k == 0.
ViewState expand(const Graph& graph, ViewState view, const NodeId& id, std::size_t k,
                 const Selector& sort_key, const LayoutParams& params = {});

/// Every node of the graph, sorted like neighbor_candidates, paginated.
std::vector<NeighborCandidate> data_sheet(const Graph& graph, ViewState& view,
                                          const Selector& sort_key, bool descending, Page page);

/// Evaluates a view's styles for many nodes without recomputing the
/// quantity ranges each time.
class StyleResolver {
 public:
  StyleResolver(const Graph& graph, const ViewState& view);

  /// Throws UnknownNode.
  ResolvedStyle operator()(const NodeId& id) const;

 private:
  struct Channel {
    std::vector<std::optional<double>> values;  // dense node order
    double lo = 0.0;
    double hi = 0.0;

    // Position in [0, 1]; missing values and flat ranges give 0.
    double unit(std::size_t node) const;
  };

  Channel evaluate(const Selector& selector) const;

  const Graph& graph_;
  const ViewState& view_;
  std::optional<ScoreMap> pagerank_;
  Channel size_;
  Channel color_;
};

ResolvedStyle resolve_style(const Graph& graph, const ViewState& view, const NodeId& id);

}  // namespace grex
