#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paramp {

enum class ErrorCode {
  NonPositiveParameter,
  AboveThreshold,
  InvalidEfficiency,
  InvalidGrid,
  NonFiniteField,
  GridMismatch,
  NearSingularDenominator,
  UnderResolvedKernel,
  GridTooLargeForOracle,
  GridTooSmallForMode,
  InvalidModeIndex,
  MaskedPixel,
  InvalidConfig,
  Io,
};

// Validation errors come from bad inputs; numeric errors from evaluating
// the model where it is singular or produces non-finite values.
enum class ErrorCategory { Validation, Numeric };

std::string_view to_string(ErrorCode code);
std::string_view module_of(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

  // e.g. "transfer.NearSingularDenominator"
  std::string qualified_code() const;

 private:
  ErrorCode code_;
};

}  // namespace paramp
