#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace posetta {

enum class Errc {
  // manifest / core model
  MissingBlob,
  DimMismatch,
  DanglingPairRef,
  ZeroVector,
  UnknownTag,
  SchemaViolation,
  IoFailure,
  // selector
  NonFiniteYaw,
  UnknownSample,
  // aggregator
  EmptyRepSet,
  InvalidWeights,
  AllZeroWeight,
  DegenerateSum,
  MissingRepresentation,
  // protocol
  TooFewPairs,
  EmptyScores,
  ScoreOutOfRange,
  FoldMismatch,
  ProtocolMismatch,
  // synthetic world / config
  InvalidConfig,
};

/// Coarse grouping used to pick a process exit code.
enum class ErrorClass { Validation, Io, Computation, Coverage };

std::string_view errc_name(Errc code) noexcept;
ErrorClass error_class(Errc code) noexcept;

/// Exit code for an error class: 2 validation, 3 I/O, 4 computation, 5 coverage gap.
int exit_code(ErrorClass cls) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return posetta::error_class(code_); }

 private:
  Errc code_;
};

}  // namespace posetta
