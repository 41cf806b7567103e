#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "grex/error.hpp"
#include "grex/ingest.hpp"

namespace grex {

namespace {

struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

// Pulls one record at a time straight from the stream buffer so that no
// byte past the current record is requested.
class RecordReader {
 public:
  RecordReader(std::istream& in, char delimiter, bool quoting)
      : buf_(in.rdbuf()), delimiter_(delimiter), quoting_(quoting) {}

  bool next(Record& out) {
    using Traits = std::char_traits<char>;
    while (true) {
      if (Traits::eq_int_type(buf_->sgetc(), Traits::eof())) return false;
      out.cells.clear();
      out.line = line_;
      read_record(out);
      const bool blank = out.cells.size() == 1 && out.cells.front().empty() && !quoted_first_;
      const bool comment = !out.cells.empty() && !quoted_first_ && !out.cells.front().empty() &&
                           out.cells.front().front() == '#';
      if (!blank && !comment) return true;
    }
  }

  std::size_t bytes_consumed() const noexcept { return consumed_; }

 private:
  int get() {
    ++consumed_;
    return buf_->sbumpc();
  }

  // Consumes "\n", "\r\n" or a lone "\r" after `c`.
  void end_line(int c) {
    if (c == '\r' && buf_->sgetc() == '\n') get();
    ++line_;
  }

  void read_record(Record& out) {
    using Traits = std::char_traits<char>;
    std::string cell;
    bool in_quotes = false;
    bool cell_quoted = false;
    quoted_first_ = false;
    const std::size_t start_line = line_;
    while (true) {
      const int c = get();
      if (Traits::eq_int_type(c, Traits::eof())) {
        if (in_quotes) {
          throw RowError(ErrorKind::MalformedRow, start_line, "unterminated quoted field");
        }
        break;
      }
      if (in_quotes) {
        if (c == '"') {
          if (buf_->sgetc() == '"') {
            get();
            cell.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n' || (c == '\r' && buf_->sgetc() != '\n')) ++line_;
          cell.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == '\n' || c == '\r') {
        end_line(c);
        break;
      }
      if (c == delimiter_) {
        if (out.cells.empty()) quoted_first_ = cell_quoted;
        out.cells.push_back(std::move(cell));
        cell.clear();
        cell_quoted = false;
        continue;
      }
      if (quoting_ && c == '"' && std::all_of(cell.begin(), cell.end(), [](char ch) {
            return ch == ' ' || ch == '\t';
          })) {
        cell.clear();
        in_quotes = true;
        cell_quoted = true;
        continue;
      }
      cell.push_back(static_cast<char>(c));
    }
    if (out.cells.empty()) quoted_first_ = cell_quoted;
    out.cells.push_back(std::move(cell));
  }

  std::streambuf* buf_;
  char delimiter_;
  bool quoting_;
  bool quoted_first_ = false;
  std::size_t line_ = 1;
  std::size_t consumed_ = 0;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

AttributeValue parse_scalar(const std::string& text) {
  if (auto d = parse_number(text); d && std::isfinite(*d)) return *d;
  if (text == "true") return true;
  if (text == "false") return false;
  return text;
}

std::vector<std::string> synthesized_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back("col" + std::to_string(i));
  return names;
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& names, bool has_header) {
  if (const auto* index = std::get_if<std::size_t>(&ref)) return *index;
  const auto& name = std::get<std::string>(ref);
  if (has_header) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  }
  throw Error(ErrorKind::UnknownColumn, "no column named '" + name + "'");
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "tsv") return Format::Tsv;
  if (text == "gexf") return Format::Gexf;
  throw Error(ErrorKind::InvalidArgument, "unknown format '" + std::string(text) + "'");
}

void ImportSpec::validate() const {
  if (source_column == target_column) {
    throw Error(ErrorKind::InvalidArgument, "source and target columns must differ");
  }
  if (preview_rows == 0) {
    throw Error(ErrorKind::InvalidArgument, "preview_rows must be positive");
  }
}

ImportPreview preview(std::istream& in, const ImportSpec& spec) {
  spec.validate();
  if (spec.format == Format::Gexf) {
    throw Error(ErrorKind::InvalidArgument, "preview supports csv and tsv only");
  }
  RecordReader reader(in, spec.delimiter(), spec.format == Format::Csv);
  Record rec;
  if (!reader.next(rec)) throw Error(ErrorKind::EmptyInput, "no rows");

  ImportPreview out;
  std::size_t header_bytes = 0;
  if (spec.has_header) {
    out.column_names = rec.cells;
    header_bytes = reader.bytes_consumed();
  } else {
    out.column_names = synthesized_names(rec.cells.size());
    out.rows.push_back(rec.cells);
  }
  while (out.rows.size() < spec.preview_rows && reader.next(rec)) {
    if (rec.cells.size() != out.column_names.size()) {
      throw MalformedRowError(rec.line, out.column_names.size(), rec.cells.size());
    }
    out.rows.push_back(rec.cells);
  }

  out.total_row_estimate = out.rows.size();
  // Extrapolate from the average row size when the stream can report how
  // much is left. Non-seekable streams just get the rows seen so far.
  std::streambuf* buf = in.rdbuf();
  const auto here = buf->pubseekoff(0, std::ios_base::cur, std::ios_base::in);
  if (here != std::streampos(-1) && !out.rows.empty()) {
    const auto end = buf->pubseekoff(0, std::ios_base::end, std::ios_base::in);
    buf->pubseekpos(here, std::ios_base::in);
    if (end != std::streampos(-1) && end > here) {
      const double per_row = static_cast<double>(reader.bytes_consumed() - header_bytes) /
                             static_cast<double>(out.rows.size());
      out.total_row_estimate += static_cast<std::size_t>(
          std::llround(static_cast<double>(end - here) / std::max(per_row, 1.0)));
    }
  }
  return out;
}

ImportPreview preview(std::string_view bytes, const ImportSpec& spec) {
  std::istringstream in{std::string(bytes)};
  return preview(in, spec);
}

Graph parse_edge_list(std::istream& in, const ImportSpec& spec) {
  spec.validate();
  if (spec.format == Format::Gexf) {
    throw Error(ErrorKind::InvalidArgument, "use parse_gexf for GEXF input");
  }
  RecordReader reader(in, spec.delimiter(), spec.format == Format::Csv);
  Record rec;
  if (!reader.next(rec)) throw Error(ErrorKind::EmptyInput, "no rows");

  std::vector<std::string> names;
  bool pending = false;
  if (spec.has_header) {
    names = rec.cells;
  } else {
    names = synthesized_names(rec.cells.size());
    pending = true;
  }
  for (auto& n : names) n = trim(n);
  const std::size_t width = names.size();
  const std::size_t src = resolve_column(spec.source_column, names, spec.has_header);
  const std::size_t dst = resolve_column(spec.target_column, names, spec.has_header);
  if (src == dst) throw Error(ErrorKind::InvalidArgument, "source and target columns must differ");
  std::optional<std::size_t> weight;
  if (spec.weight_column) weight = resolve_column(*spec.weight_column, names, spec.has_header);
  std::vector<std::size_t> attrs;
  for (const auto& ref : spec.node_attribute_columns) attrs.push_back(resolve_column(ref, names, spec.has_header));

  std::size_t needed = std::max(src, dst) + 1;
  if (weight) needed = std::max(needed, *weight + 1);
  for (std::size_t a : attrs) needed = std::max(needed, a + 1);
  if (needed > width) throw MalformedRowError(rec.line, needed, width);

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& token) -> const NodeId& {
    auto [it, inserted] = seen.emplace(token, nodes.size());
    if (inserted) nodes.push_back(Node{NodeId(token), {}});
    return nodes[it->second].id;
  };

  while (pending || reader.next(rec)) {
    pending = false;
    if (rec.cells.size() != width) throw MalformedRowError(rec.line, width, rec.cells.size());
    const std::string s = trim(rec.cells[src]);
    const std::string t = trim(rec.cells[dst]);
    if (s.empty() || t.empty()) throw RowError(ErrorKind::EmptyEndpoint, rec.line, "empty endpoint");

    std::optional<double> w;
    if (weight) {
      const std::string cell = trim(rec.cells[*weight]);
      if (!cell.empty()) {
        w = parse_number(cell);
        if (!w || !std::isfinite(*w)) {
          throw RowError(ErrorKind::NonNumericWeight, rec.line, "weight '" + cell + "'");
        }
        if (*w <= 0.0) throw RowError(ErrorKind::InvalidWeight, rec.line, "weight must be positive");
      }
    }

    Edge edge{intern(s), intern(t), w};
    Node& source = nodes[seen.at(s)];
    for (std::size_t a : attrs) {
      const std::string value = trim(rec.cells[a]);
      if (!value.empty()) source.attributes.emplace(names[a], parse_scalar(value));
    }
    edges.push_back(std::move(edge));
  }
  return build_graph(std::move(nodes), std::move(edges), spec.directed);
}

Graph parse_edge_list(std::string_view bytes, const ImportSpec& spec) {
  std::istringstream in{std::string(bytes)};
  return parse_edge_list(in, spec);
}

namespace {

std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos && (cell.empty() || cell.front() != '#')) {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_weight(double w) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string write_edge_list(const Graph& graph, Format format) {
  if (format == Format::Gexf) throw Error(ErrorKind::InvalidArgument, "edge lists are csv or tsv");
  const char delim = format == Format::Tsv ? '\t' : ',';
  auto cell = [&](const std::string& s) { return format == Format::Csv ? quote_csv(s) : s; };

  std::vector<const Edge*> order;
  for (const Edge& e : graph.edges()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) {
    if (a->source != b->source) return a->source < b->source;
    if (a->target != b->target) return a->target < b->target;
    return a->weight < b->weight;
  });

  std::string out = std::string("source") + delim + "target" + delim + "weight\n";
  for (const Edge* e : order) {
    out += cell(e->source.str());
    out += delim;
    out += cell(e->target.str());
    out += delim;
    if (e->weight) out += format_weight(*e->weight);
    out += '\n';
  }
  return out;
}

}  // namespace grex
