#include "comptra/error.hpp"

namespace comptra {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::LineCountMismatch: return "LineCountMismatch";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::MalformedConllu: return "MalformedConllu";
    case ErrorKind::MultipleRoots: return "MultipleRoots";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::UnknownLanguage: return "UnknownLanguage";
    case ErrorKind::EmptyPool: return "EmptyPool";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::CassetteMiss: return "CassetteMiss";
    case ErrorKind::MalformedResponse: return "MalformedResponse";
    case ErrorKind::InvalidRequest: return "InvalidRequest";
    case ErrorKind::EmptyDemoField: return "EmptyDemoField";
    case ErrorKind::NoPropositionsFound: return "NoPropositionsFound";
    case ErrorKind::MissingTree: return "MissingTree";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ScorerFailure: return "ScorerFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

}  // namespace comptra
