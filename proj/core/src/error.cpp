#include "grex/error.hpp"

namespace grex {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorKind::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::InvalidWeight: return "InvalidWeight";
    case ErrorKind::InvalidAttribute: return "InvalidAttribute";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::EmptyEndpoint: return "EmptyEndpoint";
    case ErrorKind::NonNumericWeight: return "NonNumericWeight";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::XmlError: return "XmlError";
    case ErrorKind::UnknownNodeReference: return "UnknownNodeReference";
    case ErrorKind::UnsupportedGexfFeature: return "UnsupportedGexfFeature";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::MissingPosition: return "MissingPosition";
    case ErrorKind::UnknownAttribute: return "UnknownAttribute";
    case ErrorKind::NodeNotVisible: return "NodeNotVisible";
    case ErrorKind::InconsistentView: return "InconsistentView";
    case ErrorKind::JsonError: return "JsonError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

RowError::RowError(ErrorKind kind, std::size_t line, const std::string& detail)
    : Error(kind, "line " + std::to_string(line) + ": " + detail), line_(line) {}

MalformedRowError::MalformedRowError(std::size_t line, std::size_t expected, std::size_t got)
    : RowError(ErrorKind::MalformedRow, line,
               "expected " + std::to_string(expected) + " cells, got " + std::to_string(got)),
      expected_(expected),
      got_(got) {}

}  // namespace grex
