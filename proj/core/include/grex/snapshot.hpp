#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grex/error.hpp"
#include "grex/exploration.hpp"
#include "grex/graph.hpp"

namespace grex {

inline constexpr int kSnapshotVersion = 1;

struct SnapshotMetadata {
  std::string name;
  /// ISO-8601 UTC, e.g. "2020-06-01T12:00:00Z".
  std::string created = "1970-01-01T00:00:00Z";
  std::string generator;

  friend bool operator==(const SnapshotMetadata&, const SnapshotMetadata&) = default;
};

/// Graph plus exploration state. Layout temperature, iteration count and
/// the PageRank cache are session state and are not persisted.
struct Snapshot {
  Graph graph;
  ViewState view;
  SnapshotMetadata metadata;
};

struct SchemaIssue {
  /// JsonError, SchemaError, UnsupportedVersion or DanglingReference.
  ErrorKind kind;
  /// Dotted location such as "view.positions.a" or "graph.nodes[2].id".
  std::string path;
  std::string reason;

  friend bool operator==(const SchemaIssue&, const SchemaIssue&) = default;
};

class SnapshotError : public Error {
 public:
  SnapshotError(ErrorKind kind, std::vector<SchemaIssue> issues);

  const std::vector<SchemaIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

/**
 * Serializes to UTF-8 JSON. Output is deterministic: keys in schema order,
 * nodes and edges in graph order, maps sorted by id, doubles in shortest
 * round-trip form. Throws SnapshotError(InconsistentView) when the view
 * references unknown nodes or leaves a visible node without a position.
 */
std::string encode(const Graph& graph, const ViewState& view, const SnapshotMetadata& metadata);

/// Throws SnapshotError with the same issues validate() reports. Unknown
/// fields are ignored.
Snapshot decode(std::string_view bytes);

/// Empty when decode() would succeed.
std::vector<SchemaIssue> validate(std::string_view bytes);

/// Current UTC time, second resolution, ISO-8601 with trailing 'Z'.
std::string utc_timestamp();

/// Random (version 4) UUID in canonical lowercase hyphenated form.
class SnapshotId {
 public:
  static SnapshotId generate();
  /// Accepts only the canonical lowercase UUIDv4 spelling.
  static std::optional<SnapshotId> parse(std::string_view text);

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const SnapshotId&, const SnapshotId&) = default;
  friend auto operator<=>(const SnapshotId&, const SnapshotId&) = default;

 private:
  explicit SnapshotId(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

}  // namespace grex
