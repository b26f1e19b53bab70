#include "paramp/error.hpp"

namespace paramp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::AboveThreshold: return "AboveThreshold";
    case ErrorCode::InvalidEfficiency: return "InvalidEfficiency";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NearSingularDenominator: return "NearSingularDenominator";
    case ErrorCode::UnderResolvedKernel: return "UnderResolvedKernel";
    case ErrorCode::GridTooLargeForOracle: return "GridTooLargeForOracle";
    case ErrorCode::GridTooSmallForMode: return "GridTooSmallForMode";
    case ErrorCode::InvalidModeIndex: return "InvalidModeIndex";
    case ErrorCode::MaskedPixel: return "MaskedPixel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view module_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter:
    case ErrorCode::AboveThreshold:
    case ErrorCode::InvalidEfficiency:
    case ErrorCode::InvalidGrid:
    case ErrorCode::NonFiniteField:
    case ErrorCode::GridMismatch:
      return "params";
    case ErrorCode::NearSingularDenominator:
      return "transfer";
    case ErrorCode::UnderResolvedKernel:
    case ErrorCode::GridTooLargeForOracle:
      return "propagation";
    case ErrorCode::GridTooSmallForMode:
    case ErrorCode::InvalidModeIndex:
      return "modes";
    case ErrorCode::MaskedPixel:
      return "detection";
    case ErrorCode::InvalidConfig:
    case ErrorCode::Io:
      return "cli";
  }
  return "unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NearSingularDenominator:
    case ErrorCode::NonFiniteField:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Validation;
  }
}

std::string Error::qualified_code() const {
  std::string out(module_of(code_));
  out += '.';
  out += to_string(code_);
  return out;
}

}  // namespace paramp
