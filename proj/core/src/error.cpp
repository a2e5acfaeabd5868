#include "posetta/error.hpp"

namespace posetta {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingBlob: return "MissingBlob";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::DanglingPairRef: return "DanglingPairRef";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::UnknownTag: return "UnknownTag";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::IoFailure: return "IoFailure";
    case Errc::NonFiniteYaw: return "NonFiniteYaw";
    case Errc::UnknownSample: return "UnknownSample";
    case Errc::EmptyRepSet: return "EmptyRepSet";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::AllZeroWeight: return "AllZeroWeight";
    case Errc::DegenerateSum: return "DegenerateSum";
    case Errc::MissingRepresentation: return "MissingRepresentation";
    case Errc::TooFewPairs: return "TooFewPairs";
    case Errc::EmptyScores: return "EmptyScores";
    case Errc::ScoreOutOfRange: return "ScoreOutOfRange";
    case Errc::FoldMismatch: return "FoldMismatch";
    case Errc::ProtocolMismatch: return "ProtocolMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

ErrorClass error_class(Errc code) noexcept {
  switch (code) {
    case Errc::MissingBlob:
    case Errc::IoFailure:
      return ErrorClass::Io;
    case Errc::EmptyRepSet:
    case Errc::AllZeroWeight:
    case Errc::DegenerateSum:
      return ErrorClass::Computation;
    case Errc::MissingRepresentation:
      return ErrorClass::Coverage;
    default:
      return ErrorClass::Validation;
  }
}

int exit_code(ErrorClass cls) noexcept {
  switch (cls) {
    case ErrorClass::Validation: return 2;
    case ErrorClass::Io: return 3;
    case ErrorClass::Computation: return 4;
    case ErrorClass::Coverage: return 5;
  }
  return 1;
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace posetta
