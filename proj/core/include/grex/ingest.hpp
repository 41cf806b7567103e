#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grex/exploration.hpp"
#include "grex/graph.hpp"
#include "grex/layout.hpp"

namespace grex {

enum class Format { Csv, Tsv, Gexf };

/// Throws InvalidArgument.
Format parse_format(std::string_view text);

/// Zero-based column index or header name.
using ColumnRef = std::variant<std::size_t, std::string>;

/// How to read a delimited edge list. CSV follows RFC 4180 quoting; TSV
/// splits on hard tabs with no quoting. Lines starting with '#' are skipped.
struct ImportSpec {
  Format format = Format::Csv;
  bool has_header = true;
  ColumnRef source_column = std::size_t{0};
  ColumnRef target_column = std::size_t{1};
  std::optional<ColumnRef> weight_column;
  /// Values from these columns become attributes of the row's source node.
  std::vector<ColumnRef> node_attribute_columns;
  bool directed = false;
  std::size_t preview_rows = 10;

  char delimiter() const noexcept { return format == Format::Tsv ? '\t' : ','; }
  /// Throws InvalidArgument.
  void validate() const;
};

struct ImportPreview {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;
  std::size_t total_row_estimate = 0;
};

/// Reads the header (if any) and at most `spec.preview_rows` data rows,
/// nothing more. Throws EmptyInput, MalformedRowError.
ImportPreview preview(std::istream& in, const ImportSpec& spec);
ImportPreview preview(std::string_view bytes, const ImportSpec& spec);

/// One edge per data row; nodes are created from trimmed endpoint tokens in
/// first-seen order. Throws EmptyInput, MalformedRowError, RowError
/// (EmptyEndpoint, NonNumericWeight, InvalidWeight), UnknownColumn.
Graph parse_edge_list(std::istream& in, const ImportSpec& spec);
Graph parse_edge_list(std::string_view bytes, const ImportSpec& spec);

/// Canonical edge list: header "source,target,weight", edges sorted by
/// (source, target, weight). Isolated nodes are not representable.
std::string write_edge_list(const Graph& graph, Format format);

/// Layout and style hints carried by an input file (GEXF viz extension).
struct VizHints {
  std::map<NodeId, Point> positions;
  std::map<NodeId, StyleOverride> overrides;
};

struct GexfDocument {
  Graph graph;
  VizHints viz;
};

/// Static GEXF 1.2/1.3: nodes with labels and declared attvalues, edges with
/// optional weights, defaultedgetype, viz position/color/size/shape.
/// Throws XmlError, UnknownNodeReference, UnsupportedGexfFeature,
/// InvalidAttribute.
GexfDocument read_gexf(std::string_view bytes);
Graph parse_gexf(std::string_view bytes);

struct InitialViewPolicy {
  enum class Mode { WholeGraph, TopPageRank };
  static constexpr std::size_t kDefaultTopK = 250;

  Mode mode = Mode::WholeGraph;
  std::size_t k = kDefaultTopK;

  static InitialViewPolicy whole_graph() { return {Mode::WholeGraph, kDefaultTopK}; }
  static InitialViewPolicy top_pagerank(std::size_t k = kDefaultTopK) { return {Mode::TopPageRank, k}; }
};

/// First view after import: everything, or the k highest-PageRank nodes
/// (ties by ascending id). Throws EmptyGraph in top-pagerank mode on an
/// empty graph, InvalidArgument for k == 0.
ViewState initial_view(const Graph& graph, const InitialViewPolicy& policy,
                       const LayoutParams& params = {}, const VizHints& hints = {});

}  // namespace grex
