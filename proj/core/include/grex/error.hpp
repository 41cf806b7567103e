#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grex {

enum class ErrorKind {
  // graph-core
  DuplicateNodeId,
  DanglingEndpoint,
  UnknownNode,
  InvalidWeight,
  InvalidAttribute,
  // ingest
  EmptyInput,
  MalformedRow,
  EmptyEndpoint,
  NonNumericWeight,
  UnknownColumn,
  XmlError,
  UnknownNodeReference,
  UnsupportedGexfFeature,
  // algorithms
  EmptyGraph,
  TooFewNodes,
  // layout / exploration
  MissingPosition,
  UnknownAttribute,
  NodeNotVisible,
  // snapshot
  InconsistentView,
  JsonError,
  SchemaError,
  UnsupportedVersion,
  DanglingReference,
  // generic
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the engine. `kind()` is stable and meant for
/// programmatic dispatch; `what()` carries a human-readable detail line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Row-level ingest failure. `line` is the 1-based physical line where the
/// offending record starts.
class RowError : public Error {
 public:
  RowError(ErrorKind kind, std::size_t line, const std::string& detail);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MalformedRowError : public RowError {
 public:
  MalformedRowError(std::size_t line, std::size_t expected, std::size_t got);

  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

}  // namespace grex
