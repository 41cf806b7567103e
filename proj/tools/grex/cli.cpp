#include "cli.hpp"

#include <signal.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "grex/algorithms.hpp"
#include "grex/error.hpp"
#include "grex/exploration.hpp"
#include "grex/ingest.hpp"
#include "grex/layout.hpp"
#include "grex/server.hpp"
#include "grex/snapshot.hpp"

namespace grex::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kGenerator = "grex 0.1.0";
constexpr std::size_t kTopPageRankShown = 10;

// I/O failures map to exit code 3, everything else from the engine to 2.
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoFailure("cannot read " + path);
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + path);
    out << bytes;
    if (!out.flush()) throw IoFailure("cannot write " + path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoFailure("cannot write " + path);
  }
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return fs::exists(b, ec) && fs::equivalent(a, b, ec);
}

ColumnRef column_ref(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return static_cast<std::size_t>(std::stoull(text));
  }
  return text;
}

// SOURCE_DATE_EPOCH pins the timestamp for reproducible output.
std::string creation_time() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::time_t t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
  return utc_timestamp();
}

struct ImportOptions {
  std::string format = "csv";
  std::string source = "0";
  std::string target = "1";
  bool header = false;
  bool directed = false;
  std::string weight;
  std::vector<std::string> attributes;
  std::size_t top_pagerank = 0;
  std::uint64_t seed = 0;
  std::string name;
  std::string input;
  std::string output;
};

int do_import(const ImportOptions& o, std::ostream& out) {
  if (same_file(o.input, o.output)) throw CLI::ValidationError("output must differ from input");
  const std::string bytes = read_file(o.input);
  const Format format = parse_format(o.format);

  Graph graph;
  VizHints hints;
  if (format == Format::Gexf) {
    GexfDocument doc = read_gexf(bytes);
    graph = std::move(doc.graph);
    hints = std::move(doc.viz);
  } else {
    ImportSpec spec;
    spec.format = format;
    spec.has_header = o.header;
    spec.source_column = column_ref(o.source);
    spec.target_column = column_ref(o.target);
    if (!o.weight.empty()) spec.weight_column = column_ref(o.weight);
    for (const auto& a : o.attributes) spec.node_attribute_columns.push_back(column_ref(a));
    spec.directed = o.directed;
    graph = parse_edge_list(bytes, spec);
  }

  LayoutParams params;
  params.seed = o.seed;
  const InitialViewPolicy policy = o.top_pagerank > 0 ? InitialViewPolicy::top_pagerank(o.top_pagerank)
                                                      : InitialViewPolicy::whole_graph();
  const ViewState view = initial_view(graph, policy, params, hints);
  const std::string name = o.name.empty() ? fs::path(o.input).stem().string() : o.name;
  write_file(o.output, encode(graph, view, {name, creation_time(), kGenerator}));
  out << "nodes: " << graph.node_count() << " edges: " << graph.edge_count() << '\n';
  return kSuccess;
}

Json stats_json(const Graph& graph) {
  Json j;
  j["nodes"] = graph.node_count();
  j["edges"] = graph.edge_count();
  j["directed"] = graph.directed();
  j["density"] = graph.node_count() >= 2 ? Json(density(graph)) : Json(nullptr);
  if (graph.node_count() > 0) {
    const DiameterResult d = diameter(graph);
    j["diameter"] = d.diameter;
    j["disconnected"] = d.disconnected;
    j["clustering_coefficient"] = clustering_coefficient(graph);
  } else {
    j["diameter"] = nullptr;
    j["disconnected"] = false;
    j["clustering_coefficient"] = nullptr;
  }
  j["components"] = connected_components(graph).size();

  Json top = Json::array();
  if (graph.node_count() > 0) {
    PageRankResult pr = pagerank(graph);
    j["pagerank_converged"] = pr.converged;
    ViewState scratch;
    scratch.pagerank_cache = std::move(pr.scores);
    for (const NeighborCandidate& row :
         data_sheet(graph, scratch, Selector::pagerank(), true, {0, kTopPageRankShown})) {
      top.push_back({{"id", row.id.str()}, {"score", row.pagerank}});
    }
  }
  j["top_pagerank"] = std::move(top);
  return j;
}

int do_stats(const std::string& input, bool as_json, std::ostream& out) {
  const Snapshot snap = decode(read_file(input));
  const Json j = stats_json(snap.graph);
  if (as_json) {
    out << j.dump() << '\n';
    return kSuccess;
  }
  auto value = [](const Json& v) { return v.is_null() ? std::string("n/a") : v.dump(); };
  out << "nodes: " << j["nodes"] << '\n'
      << "edges: " << j["edges"] << '\n'
      << "directed: " << j["directed"] << '\n'
      << "density: " << value(j["density"]) << '\n'
      << "diameter: " << value(j["diameter"]) << (j["disconnected"].get<bool>() ? " (disconnected)" : "") << '\n'
      << "clustering_coefficient: " << value(j["clustering_coefficient"]) << '\n'
      << "components: " << j["components"] << '\n'
      << "top_pagerank:\n";
  std::size_t rank = 1;
  for (const auto& row : j["top_pagerank"]) {
    out << "  " << rank++ << ". " << row["id"].get<std::string>() << ' ' << row["score"].dump() << '\n';
  }
  return kSuccess;
}

int do_layout(const std::string& input, std::uint64_t iterations, std::uint64_t seed, double c_constant,
              const std::string& output) {
  if (same_file(input, output)) throw CLI::ValidationError("output must differ from input");
  Snapshot snap = decode(read_file(input));
  LayoutParams params;
  params.seed = seed;
  params.c_constant = c_constant;
  snap.view.layout.temperature = params.initial_temperature;
  snap.view.layout = run(snap.graph, snap.view.visible, std::move(snap.view.layout), params, iterations);
  write_file(output, encode(snap.graph, snap.view, snap.metadata));
  return kSuccess;
}

int do_expand(const std::string& input, const std::string& node, std::size_t k, const std::string& by,
              std::uint64_t seed, const std::string& output, std::ostream& out) {
  if (same_file(input, output)) throw CLI::ValidationError("output must differ from input");
  Snapshot snap = decode(read_file(input));
  LayoutParams params;
  params.seed = seed;
  const std::set<NodeId> before = snap.view.visible;
  ViewState next = expand(snap.graph, std::move(snap.view), NodeId(node), k, Selector::parse(by), params);
  write_file(output, encode(snap.graph, next, snap.metadata));
  for (const NodeId& id : next.visible) {
    if (before.count(id) == 0) out << id.str() << '\n';
  }
  return kSuccess;
}

struct ServeOptions {
  std::string dir;
  std::string bind;
  std::string token;
  std::size_t max_bytes = 0;
  std::string config;
};

int do_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  ServerConfig config = o.config.empty() ? ServerConfig::from_env() : ServerConfig::from_file(o.config);
  if (!o.dir.empty()) config.storage_dir = o.dir;
  if (!o.bind.empty()) config.bind_address = o.bind;
  if (!o.token.empty()) config.write_token = o.token;
  if (o.max_bytes > 0) config.max_snapshot_bytes = o.max_bytes;

  // Signals are taken synchronously by this thread; the server threads
  // inherit the blocked mask.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  SharingServer server(config, [&err](const std::string& line) { err << line << std::endl; });
  const int port = server.start();
  out << "listening on " << config.host() << ':' << port << " storing in " << config.storage_dir.string()
      << std::endl;
  int received = 0;
  sigwait(&stop_signals, &received);
  server.stop();
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"grex: graph import, analytics, layout, exploration and snapshot sharing"};
  app.require_subcommand(1);

  ImportOptions imp;
  auto* import_cmd = app.add_subcommand("import", "Import an edge list or GEXF file into a snapshot");
  import_cmd->add_option("--format", imp.format, "Input format")->check(CLI::IsMember({"csv", "tsv", "gexf"}));
  import_cmd->add_option("--source", imp.source, "Source column (index or header name)");
  import_cmd->add_option("--target", imp.target, "Target column (index or header name)");
  import_cmd->add_flag("--header", imp.header, "First row holds column names");
  import_cmd->add_flag("--directed", imp.directed, "Treat edges as directed");
  import_cmd->add_option("--weight", imp.weight, "Weight column");
  import_cmd->add_option("--attribute", imp.attributes, "Node attribute column (repeatable)");
  import_cmd->add_option("--top-pagerank", imp.top_pagerank, "Show only the K highest-PageRank nodes")
      ->check(CLI::PositiveNumber);
  import_cmd->add_option("--seed", imp.seed, "Layout seed");
  import_cmd->add_option("--name", imp.name, "Snapshot name");
  import_cmd->add_option("input", imp.input, "Input file")->required();
  import_cmd->add_option("-o,--output", imp.output, "Snapshot file to write")->required();

  std::string stats_input;
  bool stats_json_flag = false;
  auto* stats_cmd = app.add_subcommand("stats", "Print graph statistics for a snapshot");
  stats_cmd->add_option("snapshot", stats_input, "Snapshot file")->required();
  stats_cmd->add_flag("--json", stats_json_flag, "Emit JSON");

  std::string layout_input, layout_output;
  std::uint64_t layout_iterations = 0, layout_seed = 0;
  double layout_c = LayoutParams{}.c_constant;
  auto* layout_cmd = app.add_subcommand("layout", "Run force-directed layout iterations");
  layout_cmd->add_option("snapshot", layout_input, "Snapshot file")->required();
  layout_cmd->add_option("--iterations", layout_iterations, "Number of iterations")->required();
  layout_cmd->add_option("--seed", layout_seed, "Seed for coincident-node separation");
  layout_cmd->add_option("--c-constant", layout_c, "Scale of the ideal edge length")->check(CLI::PositiveNumber);
  layout_cmd->add_option("-o,--output", layout_output, "Snapshot file to write")->required();

  std::string expand_input, expand_output, expand_node, expand_by = "pagerank";
  std::size_t expand_k = 0;
  std::uint64_t expand_seed = 0;
  auto* expand_cmd = app.add_subcommand("expand", "Show the top-K hidden neighbors of a node");
  expand_cmd->add_option("snapshot", expand_input, "Snapshot file")->required();
  expand_cmd->add_option("--node", expand_node, "Anchor node id")->required();
  expand_cmd->add_option("--k", expand_k, "Number of neighbors to add")->required()->check(CLI::PositiveNumber);
  expand_cmd->add_option("--by", expand_by, "Ranking")->check(CLI::IsMember({"pagerank", "degree"}));
  expand_cmd->add_option("--seed", expand_seed, "Placement seed");
  expand_cmd->add_option("-o,--output", expand_output, "Snapshot file to write")->required();

  ServeOptions srv;
  auto* serve_cmd = app.add_subcommand("serve", "Run the snapshot sharing server");
  serve_cmd->add_option("--dir", srv.dir, "Storage directory");
  serve_cmd->add_option("--bind", srv.bind, "host:port to listen on");
  serve_cmd->add_option("--token", srv.token, "Bearer token required for uploads");
  serve_cmd->add_option("--max-bytes", srv.max_bytes, "Largest accepted snapshot")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--config", srv.config, "JSON config file (defaults to GREX_* environment)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*import_cmd) return do_import(imp, out);
    if (*stats_cmd) return do_stats(stats_input, stats_json_flag, out);
    if (*layout_cmd) return do_layout(layout_input, layout_iterations, layout_seed, layout_c, layout_output);
    if (*expand_cmd) {
      return do_expand(expand_input, expand_node, expand_k, expand_by, expand_seed, expand_output, out);
    }
    if (*serve_cmd) return do_serve(srv, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::Io) return kIoError;
    if (e.kind() == ErrorKind::InvalidArgument) return kUsageError;
    return kDataError;
  }
  return kUsageError;
}

}  // namespace grex::cli
