#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "grex/error.hpp"
#include "grex/ingest.hpp"

namespace grex {

namespace {

namespace pt = boost::property_tree;

// Element name without namespace prefix ("viz:position" -> "position").
std::string_view local_name(std::string_view key) {
  const auto colon = key.rfind(':');
  return colon == std::string_view::npos ? key : key.substr(colon + 1);
}

std::optional<std::string> attr(const pt::ptree& element, const std::string& name) {
  if (auto attrs = element.get_child_optional("<xmlattr>")) {
    for (const auto& [key, value] : *attrs) {
      if (local_name(key) == name) return value.data();
    }
  }
  return std::nullopt;
}

const pt::ptree* child(const pt::ptree& element, std::string_view name) {
  for (const auto& [key, value] : element) {
    if (local_name(key) == name) return &value;
  }
  return nullptr;
}

template <typename F>
void for_each_child(const pt::ptree& element, std::string_view name, F&& fn) {
  for (const auto& [key, value] : element) {
    if (local_name(key) == name) fn(value);
  }
}

std::optional<double> to_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

[[noreturn]] void unsupported(const std::string& feature) {
  throw Error(ErrorKind::UnsupportedGexfFeature, feature);
}

struct AttributeDecl {
  std::string title;
  std::string type;
  std::optional<std::string> default_value;
};

AttributeValue typed_value(const AttributeDecl& decl, const std::string& text, const std::string& node) {
  if (decl.type == "integer" || decl.type == "long" || decl.type == "float" ||
      decl.type == "double" || decl.type == "short" || decl.type == "byte") {
    if (auto d = to_number(text)) return *d;
    throw Error(ErrorKind::InvalidAttribute,
                "node " + node + ": '" + text + "' is not a " + decl.type + " for " + decl.title);
  }
  if (decl.type == "boolean") {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw Error(ErrorKind::InvalidAttribute,
                "node " + node + ": '" + text + "' is not a boolean for " + decl.title);
  }
  return text;
}

void check_static(const pt::ptree& element, const std::string& what) {
  for (const char* key : {"start", "end", "startopen", "endopen", "timeformat"}) {
    if (attr(element, key)) unsupported("dynamic " + what + " (" + key + ")");
  }
  if (child(element, "spells") != nullptr) unsupported("dynamic " + what + " (spells)");
}

}  // namespace

GexfDocument read_gexf(std::string_view bytes) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::XmlError, "line " + std::to_string(e.line()) + ": " + e.message());
  }

  const pt::ptree* root = child(tree, "gexf");
  if (root == nullptr) throw Error(ErrorKind::XmlError, "missing <gexf> root element");
  const pt::ptree* graph = child(*root, "graph");
  if (graph == nullptr) throw Error(ErrorKind::XmlError, "missing <graph> element");

  if (attr(*graph, "mode").value_or("static") != "static") unsupported("dynamic mode");
  check_static(*graph, "graph");
  const std::string edge_type = attr(*graph, "defaultedgetype").value_or("undirected");
  if (edge_type != "directed" && edge_type != "undirected") unsupported("defaultedgetype " + edge_type);
  const bool directed = edge_type == "directed";

  std::unordered_map<std::string, AttributeDecl> decls;
  std::vector<std::string> decl_order;
  for_each_child(*graph, "attributes", [&](const pt::ptree& block) {
    if (attr(block, "mode").value_or("static") != "static") unsupported("dynamic attributes");
    if (attr(block, "class").value_or("node") != "node") return;
    for_each_child(block, "attribute", [&](const pt::ptree& a) {
      const auto id = attr(a, "id");
      if (!id) throw Error(ErrorKind::XmlError, "<attribute> without id");
      AttributeDecl d{attr(a, "title").value_or(*id), attr(a, "type").value_or("string"), {}};
      if (const pt::ptree* def = child(a, "default")) d.default_value = def->data();
      decls.emplace(*id, std::move(d));
      decl_order.push_back(*id);
    });
  });

  GexfDocument doc;
  std::vector<Node> nodes;
  std::unordered_set<std::string> known;
  const pt::ptree* node_list = child(*graph, "nodes");
  if (node_list != nullptr) {
    for_each_child(*node_list, "node", [&](const pt::ptree& n) {
      if (attr(n, "pid") || child(n, "nodes") != nullptr) unsupported("hierarchical nodes");
      check_static(n, "node");
      const auto raw_id = attr(n, "id");
      if (!raw_id || raw_id->empty()) throw Error(ErrorKind::XmlError, "<node> without id");
      NodeId id(*raw_id);

      AttributeMap attributes;
      if (auto label = attr(n, "label")) attributes.emplace("label", *label);
      if (const pt::ptree* values = child(n, "attvalues")) {
        for_each_child(*values, "attvalue", [&](const pt::ptree& av) {
          check_static(av, "attribute value");
          const auto key = attr(av, "for").value_or(attr(av, "id").value_or(""));
          auto it = decls.find(key);
          if (it == decls.end()) {
            throw Error(ErrorKind::InvalidAttribute, "node " + id.str() + ": undeclared attribute '" + key + "'");
          }
          attributes.insert_or_assign(it->second.title,
                                      typed_value(it->second, attr(av, "value").value_or(""), id.str()));
        });
      }
      for (const auto& key : decl_order) {
        const AttributeDecl& d = decls.at(key);
        if (d.default_value && attributes.count(d.title) == 0) {
          attributes.emplace(d.title, typed_value(d, *d.default_value, id.str()));
        }
      }

      StyleOverride style;
      if (const pt::ptree* pos = child(n, "position")) {
        auto x = to_number(attr(*pos, "x").value_or(""));
        auto y = to_number(attr(*pos, "y").value_or(""));
        if (x && y) doc.viz.positions.emplace(id, Point{*x, *y});
      }
      if (const pt::ptree* color = child(n, "color")) {
        auto channel = [&](const char* name) -> std::optional<std::uint8_t> {
          auto v = to_number(attr(*color, name).value_or(""));
          if (!v || *v < 0 || *v > 255) return std::nullopt;
          return static_cast<std::uint8_t>(std::lround(*v));
        };
        auto r = channel("r"), g = channel("g"), b = channel("b");
        if (r && g && b) style.color = Color{*r, *g, *b};
      }
      if (const pt::ptree* size = child(n, "size")) {
        if (auto v = to_number(attr(*size, "value").value_or("")); v && *v > 0) style.size = *v;
      }
      if (const pt::ptree* shape = child(n, "shape")) {
        const auto v = attr(*shape, "value").value_or("");
        if (v == "disc") style.shape = Shape::Circle;
        if (v == "square") style.shape = Shape::Square;
        if (v == "triangle") style.shape = Shape::Triangle;
      }
      if (!style.empty()) doc.viz.overrides.emplace(id, style);

      known.insert(id.str());
      nodes.push_back(Node{std::move(id), std::move(attributes)});
    });
  }

  std::vector<Edge> edges;
  if (const pt::ptree* edge_list = child(*graph, "edges")) {
    for_each_child(*edge_list, "edge", [&](const pt::ptree& e) {
      check_static(e, "edge");
      const std::string label = attr(e, "id").value_or("#" + std::to_string(edges.size()));
      if (auto type = attr(e, "type"); type && *type != edge_type) unsupported("mixed edge types");
      const auto source = attr(e, "source");
      const auto target = attr(e, "target");
      if (!source || !target) throw Error(ErrorKind::XmlError, "edge " + label + " lacks source or target");
      if (known.count(*source) == 0 || known.count(*target) == 0) {
        throw Error(ErrorKind::UnknownNodeReference, "edge " + label);
      }
      std::optional<double> weight;
      if (auto w = attr(e, "weight")) {
        weight = to_number(*w);
        if (!weight) throw Error(ErrorKind::InvalidWeight, "edge " + label + " weight '" + *w + "'");
      }
      edges.push_back(Edge{NodeId(*source), NodeId(*target), weight});
    });
  }

  doc.graph = build_graph(std::move(nodes), std::move(edges), directed);
  return doc;
}

Graph parse_gexf(std::string_view bytes) { return read_gexf(bytes).graph; }

}  // namespace grex
