#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spacelog {

enum class Errc {
  kNonDivisibleHorizon,
  kDanglingNodeReference,
  kDuplicateId,
  kNonPositiveIsp,
  kMissingCommodity,
  kNegativeDuration,
  kZeroPowerWorkingTime,
  kInvalidScenario,
  kRatiosIncomplete,
  kUnderdeterminedReference,
  kPlanModelMismatch,
  kNTooLarge,
  kInvalidAggregationMatrix,
  kConditionsViolated,
  kNumericalFailure,
  kIoFailure,
  kDimensionMismatch,
  kParseError,
  kValidationError,
  kUnknownVariant,
  kBoundOrderViolated,
};

const char* errc_name(Errc code);

/// Every failure the library reports. `code()` identifies the contract
/// violation; `diagnostics()` carries one line per offending item where a
/// single call can find several (scenario validation).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::vector<std::string> diagnostics = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        diagnostics_(std::move(diagnostics)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  Errc code_;
  std::vector<std::string> diagnostics_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kNonDivisibleHorizon: return "NonDivisibleHorizon";
    case Errc::kDanglingNodeReference: return "DanglingNodeReference";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kNonPositiveIsp: return "NonPositiveIsp";
    case Errc::kMissingCommodity: return "MissingCommodity";
    case Errc::kNegativeDuration: return "NegativeDuration";
    case Errc::kZeroPowerWorkingTime: return "ZeroPowerWorkingTime";
    case Errc::kInvalidScenario: return "InvalidScenario";
    case Errc::kRatiosIncomplete: return "RatiosIncomplete";
    case Errc::kUnderdeterminedReference: return "UnderdeterminedReference";
    case Errc::kPlanModelMismatch: return "PlanModelMismatch";
    case Errc::kNTooLarge: return "NTooLarge";
    case Errc::kInvalidAggregationMatrix: return "InvalidAggregationMatrix";
    case Errc::kConditionsViolated: return "ConditionsViolated";
    case Errc::kNumericalFailure: return "NumericalFailure";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kParseError: return "ParseError";
    case Errc::kValidationError: return "ValidationError";
    case Errc::kUnknownVariant: return "UnknownVariant";
    case Errc::kBoundOrderViolated: return "BoundOrderViolated";
  }
  return "Unknown";
}

}  // namespace spacelog
