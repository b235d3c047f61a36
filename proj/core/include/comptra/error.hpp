#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace comptra {

enum class ErrorKind {
  MissingFile,
  LineCountMismatch,
  MalformedRecord,
  MalformedConllu,
  MultipleRoots,
  NoRoot,
  UnknownLanguage,
  EmptyPool,
  DimensionMismatch,
  ZeroVector,
  TransportError,
  CassetteMiss,
  MalformedResponse,
  InvalidRequest,
  EmptyDemoField,
  NoPropositionsFound,
  MissingTree,
  LengthMismatch,
  ScorerFailure,
  InvalidConfig,
  PreconditionFailed,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by the library. `kind()` is stable and meant for
/// programmatic dispatch; `what()` is a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace comptra
