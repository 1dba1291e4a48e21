#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lindbladkit {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  ShapeMismatch,
  NotSquare,
  BadDimension,
  InvalidDensity,
  NotLinear,
  NotTracePreserving,
  NotCompletelyPositive,
  IncompleteKraus,
  DimensionMismatch,
  StepTooLarge,
  ValidationFailure,
  InvalidSpec,
  NonDiagonalG,
  InvalidState,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type. `value` carries the
// numeric payload some codes have (the offending eigenvalue for
// NotCompletelyPositive, the step index for ValidationFailure).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

}  // namespace lindbladkit
