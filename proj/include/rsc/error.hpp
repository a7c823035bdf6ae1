#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsc {

enum class ErrorCode {
  VertexOutOfRange,
  DimensionExceedsR,
  MalformedSimplex,
  ParseError,
  HeaderMismatch,
  NegativeExponent,
  InvalidProbability,
  TooLargeToEnumerate,
  InvalidModelRank,
  IndexOutOfRange,
  NotInOpenDomain,
  InvalidAxes,
  DimensionOutOfRange,
  NonPrimeModulus,
  EmptyComplex,
  BudgetExceeded,
  NotDegreeZero,
  NotAFace,
  BoundaryAlpha,
  InvalidConfig,
  ConsistencyGate,
};

std::string_view error_code_name(ErrorCode code);

/// All library failures are reported through this exception; `code()` tells
/// callers (and the CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::DimensionExceedsR: return "DimensionExceedsR";
    case ErrorCode::MalformedSimplex: return "MalformedSimplex";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::InvalidModelRank: return "InvalidModelRank";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotInOpenDomain: return "NotInOpenDomain";
    case ErrorCode::InvalidAxes: return "InvalidAxes";
    case ErrorCode::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::EmptyComplex: return "EmptyComplex";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotDegreeZero: return "NotDegreeZero";
    case ErrorCode::NotAFace: return "NotAFace";
    case ErrorCode::BoundaryAlpha: return "BoundaryAlpha";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConsistencyGate: return "ConsistencyGate";
  }
  return "Unknown";
}

}  // namespace rsc
