#include "grex/snapshot.hpp"

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <nlohmann/json.hpp>
#include <regex>
#include <unordered_set>

namespace grex {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::string key_path(const std::string& base, const std::string& key) { return base + "." + key; }

bool finite_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

// Walks a parsed document, recording every issue, and assembles a Snapshot
// when none were found. Shared by decode(), validate() and encode() so the
// three can never disagree.
class DocumentReader {
 public:
  std::optional<Snapshot> read(const Json& root) {
    if (!root.is_object()) {
      fail(ErrorKind::SchemaError, "", "expected an object");
      return std::nullopt;
    }
    if (!read_version(root)) return std::nullopt;
    read_metadata(root);
    const Json* graph = object_field(root, "graph", "graph");
    const Json* view = object_field(root, "view", "view");
    const bool graph_ok = graph != nullptr && read_graph(*graph);
    if (view != nullptr) read_view(*view, graph_ok);
    if (!issues_.empty()) return std::nullopt;

    try {
      out_.graph = build_graph(std::move(nodes_), std::move(edges_), directed_);
    } catch (const Error& e) {
      fail(ErrorKind::SchemaError, "graph", e.what());
      return std::nullopt;
    }
    out_.view.layout.temperature = LayoutParams{}.initial_temperature;
    return std::move(out_);
  }

  std::vector<SchemaIssue> take_issues() { return std::move(issues_); }

 private:
  void fail(ErrorKind kind, std::string path, std::string reason) {
    issues_.push_back({kind, std::move(path), std::move(reason)});
  }

  const Json* field(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(ErrorKind::SchemaError, path, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  const Json* typed_field(const Json& obj, const char* key, const std::string& path,
                          bool (Json::*is)() const noexcept, const char* what) {
    const Json* v = field(obj, key, path);
    if (v != nullptr && !((*v).*is)()) {
      fail(ErrorKind::SchemaError, path, std::string("expected ") + what);
      return nullptr;
    }
    return v;
  }

  const Json* object_field(const Json& obj, const char* key, const std::string& path) {
    return typed_field(obj, key, path, &Json::is_object, "an object");
  }
  const Json* array_field(const Json& obj, const char* key, const std::string& path) {
    return typed_field(obj, key, path, &Json::is_array, "an array");
  }
  const Json* string_field(const Json& obj, const char* key, const std::string& path) {
    return typed_field(obj, key, path, &Json::is_string, "a string");
  }

  bool read_version(const Json& root) {
    const Json* v = field(root, "version", "version");
    if (v == nullptr) return true;
    if (!v->is_number_integer()) {
      fail(ErrorKind::SchemaError, "version", "expected an integer");
      return true;
    }
    const auto version = v->get<long long>();
    if (version > kSnapshotVersion) {
      fail(ErrorKind::UnsupportedVersion, "version", std::to_string(version));
      return false;
    }
    if (version < 1) fail(ErrorKind::SchemaError, "version", "must be >= 1");
    return true;
  }

  void read_metadata(const Json& root) {
    const Json* meta = object_field(root, "metadata", "metadata");
    if (meta == nullptr) return;
    if (const Json* v = string_field(*meta, "name", "metadata.name")) {
      out_.metadata.name = v->get<std::string>();
    }
    if (const Json* v = string_field(*meta, "created", "metadata.created")) {
      static const std::regex kIso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z)");
      out_.metadata.created = v->get<std::string>();
      if (!std::regex_match(out_.metadata.created, kIso)) {
        fail(ErrorKind::SchemaError, "metadata.created", "expected ISO-8601 UTC timestamp");
      }
    }
    if (const Json* v = string_field(*meta, "generator", "metadata.generator")) {
      out_.metadata.generator = v->get<std::string>();
    }
  }

  std::optional<NodeId> node_id(const Json& v, const std::string& path) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
      fail(ErrorKind::SchemaError, path, "expected a non-empty string");
      return std::nullopt;
    }
    return NodeId(v.get<std::string>());
  }

  // Id that must name a graph node; only checked when the graph parsed.
  std::optional<NodeId> reference(const Json& v, const std::string& path, bool check) {
    auto id = node_id(v, path);
    if (id && check && ids_.count(id->str()) == 0) {
      fail(ErrorKind::DanglingReference, path, "unknown node '" + id->str() + "'");
      return std::nullopt;
    }
    return id;
  }

  std::optional<NodeId> reference_key(const std::string& key, const std::string& path, bool check) {
    if (key.empty()) {
      fail(ErrorKind::SchemaError, path, "empty node id");
      return std::nullopt;
    }
    if (check && ids_.count(key) == 0) {
      fail(ErrorKind::DanglingReference, path, "unknown node '" + key + "'");
      return std::nullopt;
    }
    return NodeId(key);
  }

  bool read_graph(const Json& graph) {
    const std::size_t before = issues_.size();
    if (const Json* v = typed_field(graph, "directed", "graph.directed", &Json::is_boolean, "a boolean")) {
      directed_ = v->get<bool>();
    }
    if (const Json* nodes = array_field(graph, "nodes", "graph.nodes")) {
      for (std::size_t i = 0; i < nodes->size(); ++i) read_node((*nodes)[i], index_path("graph.nodes", i));
    }
    if (const Json* edges = array_field(graph, "edges", "graph.edges")) {
      for (std::size_t i = 0; i < edges->size(); ++i) read_edge((*edges)[i], index_path("graph.edges", i));
    }
    return issues_.size() == before;
  }

  void read_node(const Json& n, const std::string& path) {
    if (!n.is_object()) {
      fail(ErrorKind::SchemaError, path, "expected an object");
      return;
    }
    std::optional<NodeId> id;
    if (const Json* v = field(n, "id", key_path(path, "id"))) id = node_id(*v, key_path(path, "id"));
    AttributeMap attributes;
    if (const Json* attrs = object_field(n, "attributes", key_path(path, "attributes"))) {
      for (const auto& [name, value] : attrs->items()) {
        const std::string apath = key_path(key_path(path, "attributes"), name);
        if (value.is_boolean()) {
          attributes.emplace(name, value.get<bool>());
        } else if (value.is_string()) {
          attributes.emplace(name, value.get<std::string>());
        } else if (finite_number(value)) {
          attributes.emplace(name, value.get<double>());
        } else {
          fail(ErrorKind::SchemaError, apath, "expected a finite number, string or boolean");
        }
      }
    }
    if (!id) return;
    if (!ids_.insert(id->str()).second) {
      fail(ErrorKind::SchemaError, key_path(path, "id"), "duplicate node id '" + id->str() + "'");
      return;
    }
    nodes_.push_back(Node{std::move(*id), std::move(attributes)});
  }

  void read_edge(const Json& e, const std::string& path) {
    if (!e.is_object()) {
      fail(ErrorKind::SchemaError, path, "expected an object");
      return;
    }
    std::optional<NodeId> source, target;
    if (const Json* v = field(e, "source", key_path(path, "source"))) {
      source = reference(*v, key_path(path, "source"), true);
    }
    if (const Json* v = field(e, "target", key_path(path, "target"))) {
      target = reference(*v, key_path(path, "target"), true);
    }
    std::optional<double> weight;
    if (auto it = e.find("weight"); it != e.end()) {
      if (!finite_number(*it) || it->get<double>() <= 0.0) {
        fail(ErrorKind::SchemaError, key_path(path, "weight"), "expected a finite positive number");
      } else {
        weight = it->get<double>();
      }
    }
    if (source && target) edges_.push_back(Edge{std::move(*source), std::move(*target), weight});
  }

  void read_view(const Json& view, bool check) {
    ViewState& out = out_.view;
    if (const Json* visible = array_field(view, "visible", "view.visible")) {
      for (std::size_t i = 0; i < visible->size(); ++i) {
        const std::string path = index_path("view.visible", i);
        if (auto id = reference((*visible)[i], path, check)) {
          if (!out.visible.insert(*id).second) fail(ErrorKind::SchemaError, path, "duplicate id");
        }
      }
    }
    if (const Json* positions = object_field(view, "positions", "view.positions")) {
      for (const auto& [key, value] : positions->items()) {
        const std::string path = key_path("view.positions", key);
        auto id = reference_key(key, path, check);
        if (!value.is_array() || value.size() != 2) {
          fail(ErrorKind::SchemaError, path, "expected 2 elements");
          continue;
        }
        if (!finite_number(value[0]) || !finite_number(value[1])) {
          fail(ErrorKind::SchemaError, path, "expected finite numbers");
          continue;
        }
        if (id) out.layout.positions.emplace(*id, Point{value[0].get<double>(), value[1].get<double>()});
      }
    }
    if (const Json* pinned = array_field(view, "pinned", "view.pinned")) {
      for (std::size_t i = 0; i < pinned->size(); ++i) {
        if (auto id = reference((*pinned)[i], index_path("view.pinned", i), check)) {
          out.layout.pinned.insert(*id);
        }
      }
    }
    if (const Json* overrides = object_field(view, "overrides", "view.overrides")) {
      for (const auto& [key, value] : overrides->items()) {
        const std::string path = key_path("view.overrides", key);
        auto id = reference_key(key, path, check);
        if (!value.is_object()) {
          fail(ErrorKind::SchemaError, path, "expected an object");
          continue;
        }
        StyleOverride o = read_override(value, path);
        if (id) out.overrides.emplace(*id, std::move(o));
      }
    }
    if (const Json* style = object_field(view, "global_style", "view.global_style")) {
      read_style(*style);
    }

    // Cross-field rules on the assembled view.
    if (const Json* visible = view.find("visible") != view.end() ? &view["visible"] : nullptr;
        visible != nullptr && visible->is_array()) {
      for (std::size_t i = 0; i < visible->size(); ++i) {
        const Json& v = (*visible)[i];
        if (v.is_string() && !v.get_ref<const std::string&>().empty() &&
            view.contains("positions") && view["positions"].is_object() &&
            !view["positions"].contains(v.get<std::string>())) {
          fail(ErrorKind::SchemaError, index_path("view.visible", i), "visible node has no position");
        }
      }
    }
    for (const NodeId& id : out.layout.pinned) {
      if (view.contains("positions") && view["positions"].is_object() &&
          !view["positions"].contains(id.str())) {
        fail(ErrorKind::SchemaError, "view.pinned", "pinned node '" + id.str() + "' has no position");
      }
    }
  }

  std::optional<Color> color(const Json& v, const std::string& path) {
    if (v.is_string()) {
      try {
        return Color::from_hex(v.get<std::string>());
      } catch (const Error&) {
      }
    }
    fail(ErrorKind::SchemaError, path, "expected #rrggbb color");
    return std::nullopt;
  }

  std::optional<Shape> shape(const Json& v, const std::string& path) {
    if (v.is_string()) {
      try {
        return parse_shape(v.get<std::string>());
      } catch (const Error&) {
      }
    }
    fail(ErrorKind::SchemaError, path, "expected circle, square or triangle");
    return std::nullopt;
  }

  std::optional<Selector> selector(const Json& v, const std::string& path) {
    if (v.is_string()) {
      try {
        return Selector::parse(v.get<std::string>());
      } catch (const Error&) {
      }
    }
    fail(ErrorKind::SchemaError, path, "expected pagerank, degree, constant or attribute:<name>");
    return std::nullopt;
  }

  std::optional<double> positive(const Json& v, const std::string& path) {
    if (finite_number(v) && v.get<double>() > 0.0) return v.get<double>();
    fail(ErrorKind::SchemaError, path, "expected a finite positive number");
    return std::nullopt;
  }

  StyleOverride read_override(const Json& o, const std::string& path) {
    StyleOverride out;
    if (auto it = o.find("size"); it != o.end()) out.size = positive(*it, key_path(path, "size"));
    if (auto it = o.find("color"); it != o.end()) out.color = color(*it, key_path(path, "color"));
    if (auto it = o.find("shape"); it != o.end()) out.shape = shape(*it, key_path(path, "shape"));
    if (auto it = o.find("label"); it != o.end()) {
      if (it->is_string()) {
        out.label = it->get<std::string>();
      } else {
        fail(ErrorKind::SchemaError, key_path(path, "label"), "expected a string");
      }
    }
    return out;
  }

  void read_style(const Json& s) {
    StyleMapping& out = out_.view.global_style;
    const std::string base = "view.global_style";
    if (const Json* v = field(s, "size_by", key_path(base, "size_by"))) {
      if (auto sel = selector(*v, key_path(base, "size_by"))) out.size_by = *sel;
    }
    if (const Json* v = field(s, "size_range", key_path(base, "size_range"))) {
      const std::string path = key_path(base, "size_range");
      if (!v->is_array() || v->size() != 2) {
        fail(ErrorKind::SchemaError, path, "expected 2 elements");
      } else {
        auto lo = positive((*v)[0], index_path(path, 0));
        auto hi = positive((*v)[1], index_path(path, 1));
        if (lo && hi) {
          if (*lo > *hi) fail(ErrorKind::SchemaError, path, "min exceeds max");
          out.size_range = {*lo, *hi};
        }
      }
    }
    if (const Json* v = field(s, "color_by", key_path(base, "color_by"))) {
      if (auto sel = selector(*v, key_path(base, "color_by"))) out.color_by = *sel;
    }
    if (const Json* v = array_field(s, "color_scale", key_path(base, "color_scale"))) {
      const std::string path = key_path(base, "color_scale");
      if (v->empty()) fail(ErrorKind::SchemaError, path, "expected at least one color stop");
      out.color_scale.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (auto c = color((*v)[i], index_path(path, i))) out.color_scale.push_back(*c);
      }
    }
    if (const Json* v = field(s, "shape", key_path(base, "shape"))) {
      if (auto sh = shape(*v, key_path(base, "shape"))) out.shape = *sh;
    }
    if (const Json* v = field(s, "label_by", key_path(base, "label_by"))) {
      if (v->is_null()) {
        out.label_by.reset();
      } else if (v->is_string() && !v->get_ref<const std::string&>().empty()) {
        out.label_by = v->get<std::string>();
      } else {
        fail(ErrorKind::SchemaError, key_path(base, "label_by"), "expected null or an attribute name");
      }
    }
    if (const Json* v = field(s, "label_size", key_path(base, "label_size"))) {
      if (auto size = positive(*v, key_path(base, "label_size"))) out.label_size = *size;
    }
  }

  Snapshot out_;
  std::vector<SchemaIssue> issues_;
  bool directed_ = false;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_set<std::string> ids_;
};

std::optional<Json> parse_json(std::string_view bytes, std::vector<SchemaIssue>& issues) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    issues.push_back({ErrorKind::JsonError, "", "byte " + std::to_string(e.byte) + ": " + e.what()});
    return std::nullopt;
  } catch (const Json::exception& e) {
    // Number overflow and similar.
    issues.push_back({ErrorKind::JsonError, "", e.what()});
    return std::nullopt;
  }
}

ErrorKind headline(const std::vector<SchemaIssue>& issues) {
  return issues.empty() ? ErrorKind::SchemaError : issues.front().kind;
}

std::string describe(const std::vector<SchemaIssue>& issues) {
  std::string out = std::to_string(issues.size()) + " issue(s)";
  for (const auto& i : issues) {
    out += "; " + std::string(to_string(i.kind)) + " at '" + i.path + "': " + i.reason;
  }
  return out;
}

OrderedJson attribute_json(const AttributeValue& value) {
  return std::visit([](const auto& v) { return OrderedJson(v); }, value);
}

OrderedJson override_json(const StyleOverride& o) {
  OrderedJson out = OrderedJson::object();
  if (o.size) out["size"] = *o.size;
  if (o.color) out["color"] = o.color->to_hex();
  if (o.shape) out["shape"] = std::string(to_string(*o.shape));
  if (o.label) out["label"] = *o.label;
  return out;
}

OrderedJson style_json(const StyleMapping& s) {
  OrderedJson out = OrderedJson::object();
  out["size_by"] = s.size_by.to_string();
  out["size_range"] = {s.size_range.min, s.size_range.max};
  out["color_by"] = s.color_by.to_string();
  out["color_scale"] = OrderedJson::array();
  for (const Color& c : s.color_scale) out["color_scale"].push_back(c.to_hex());
  out["shape"] = std::string(to_string(s.shape));
  out["label_by"] = s.label_by ? OrderedJson(*s.label_by) : OrderedJson(nullptr);
  out["label_size"] = s.label_size;
  return out;
}

}  // namespace

SnapshotError::SnapshotError(ErrorKind kind, std::vector<SchemaIssue> issues)
    : Error(kind, describe(issues)), issues_(std::move(issues)) {}

namespace {

// Keyed insertion into an ordered object scans every existing key. Callers
// iterate a std::map, so keys are already unique and can be appended.
void append_unique(OrderedJson& object, const std::string& key, OrderedJson value) {
  auto& members = static_cast<OrderedJson::object_t::Container&>(object.get_ref<OrderedJson::object_t&>());
  members.emplace_back(key, std::move(value));
}

}  // namespace

std::string encode(const Graph& graph, const ViewState& view, const SnapshotMetadata& metadata) {
  OrderedJson doc = OrderedJson::object();
  doc["version"] = kSnapshotVersion;
  doc["metadata"] = {{"name", metadata.name}, {"created", metadata.created}, {"generator", metadata.generator}};

  OrderedJson nodes = OrderedJson::array();
  for (const Node& n : graph.nodes()) {
    OrderedJson attrs = OrderedJson::object();
    for (const auto& [name, value] : n.attributes) attrs[name] = attribute_json(value);
    OrderedJson node = OrderedJson::object();
    node["id"] = n.id.str();
    node["attributes"] = std::move(attrs);
    nodes.push_back(std::move(node));
  }
  OrderedJson edges = OrderedJson::array();
  for (const Edge& e : graph.edges()) {
    OrderedJson edge = OrderedJson::object();
    edge["source"] = e.source.str();
    edge["target"] = e.target.str();
    if (e.weight) edge["weight"] = *e.weight;
    edges.push_back(std::move(edge));
  }
  OrderedJson& g = doc["graph"] = OrderedJson::object();
  g["directed"] = graph.directed();
  g["nodes"] = std::move(nodes);
  g["edges"] = std::move(edges);

  OrderedJson& v = doc["view"] = OrderedJson::object();
  v["visible"] = OrderedJson::array();
  for (const NodeId& id : view.visible) v["visible"].push_back(id.str());
  v["positions"] = OrderedJson::object();
  for (const auto& [id, p] : view.layout.positions) append_unique(v["positions"], id.str(), {p.x, p.y});
  v["pinned"] = OrderedJson::array();
  for (const NodeId& id : view.layout.pinned) v["pinned"].push_back(id.str());
  v["overrides"] = OrderedJson::object();
  for (const auto& [id, o] : view.overrides) append_unique(v["overrides"], id.str(), override_json(o));
  v["global_style"] = style_json(view.global_style);

  std::string bytes;
  try {
    bytes = doc.dump();
  } catch (const OrderedJson::type_error& e) {
    throw SnapshotError(ErrorKind::InconsistentView, {{ErrorKind::InconsistentView, "", e.what()}});
  }
  // Re-check the exact bytes produced; catches non-finite values, which
  // the JSON writer would otherwise emit as null.
  if (auto issues = validate(bytes); !issues.empty()) {
    throw SnapshotError(ErrorKind::InconsistentView, std::move(issues));
  }
  return bytes;
}

Snapshot decode(std::string_view bytes) {
  std::vector<SchemaIssue> issues;
  auto json = parse_json(bytes, issues);
  if (!json) throw SnapshotError(ErrorKind::JsonError, std::move(issues));
  DocumentReader reader;
  auto snapshot = reader.read(*json);
  if (!snapshot) {
    issues = reader.take_issues();
    const ErrorKind kind = headline(issues);
    throw SnapshotError(kind, std::move(issues));
  }
  return std::move(*snapshot);
}

std::vector<SchemaIssue> validate(std::string_view bytes) {
  std::vector<SchemaIssue> issues;
  auto json = parse_json(bytes, issues);
  if (!json) return issues;
  DocumentReader reader;
  reader.read(*json);
  return reader.take_issues();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SnapshotId SnapshotId::generate() {
  thread_local boost::uuids::random_generator gen;
  return SnapshotId(boost::uuids::to_string(gen()));
}

std::optional<SnapshotId> SnapshotId::parse(std::string_view text) {
  if (text.size() != 36) return std::nullopt;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return std::nullopt;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return std::nullopt;
    }
  }
  if (text[14] != '4') return std::nullopt;
  if (text[19] != '8' && text[19] != '9' && text[19] != 'a' && text[19] != 'b') return std::nullopt;
  return SnapshotId(std::string(text));
}

}  // namespace grex
