#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpcorr {

enum class ErrorCode {
  ParseError,
  HeaderMismatch,
  InvalidParameter,
  MissingParameter,
  InvalidDesign,
  InvalidSpec,
  DegenerateVariable,
  ZeroMean,
  DegenerateSample,
  NonPositiveRatio,
  SingularDenominator,
  ZeroCorrelation,
  NonPositiveVariance,
  TooManySamples,
  AllSamplesDegenerate,
  ExcessiveSkips,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

// Validation errors are caused by bad input; everything else is a failure
// of the computation itself. The CLI maps these to exit codes 1 and 2.
[[nodiscard]] bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tpcorr
