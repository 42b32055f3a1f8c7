#include "tpcorr/error.hpp"

namespace tpcorr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::InvalidDesign: return "InvalidDesign";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateVariable: return "DegenerateVariable";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::NonPositiveRatio: return "NonPositiveRatio";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::ZeroCorrelation: return "ZeroCorrelation";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::TooManySamples: return "TooManySamples";
    case ErrorCode::AllSamplesDegenerate: return "AllSamplesDegenerate";
    case ErrorCode::ExcessiveSkips: return "ExcessiveSkips";
  }
  return "UnknownError";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::HeaderMismatch:
    case ErrorCode::InvalidParameter:
    case ErrorCode::MissingParameter:
    case ErrorCode::InvalidDesign:
    case ErrorCode::InvalidSpec:
    case ErrorCode::DegenerateVariable:
    case ErrorCode::ZeroMean:
    case ErrorCode::TooManySamples:
      return true;
    default:
      return false;
  }
}

}  // namespace tpcorr
