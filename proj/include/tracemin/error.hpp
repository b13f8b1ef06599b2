#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracemin {

enum class ErrorCode {
  InvalidInput,
  DimensionMismatch,
  NotPositiveDefinite,
  NonConvergence,
  NotPsdPencil,
  InfeasibleConstraint,
  KTooLarge,
  UnsupportedSense,
  UnsupportedRoute,
  BlockStructureViolated,
  MissingOptimizer,
  BudgetExceeded,
  DegenerateDraw,
  DomainError,
  ParseError,
};

/// Stable machine-readable name, used verbatim in CLI reports.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tracemin
