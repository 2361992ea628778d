#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perpetua {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteParameter,
  QuadratureFailure,
  PreconditionViolation,
  InversionUnstable,
  EvaluationError,
  StepTooCoarse,
  BandwidthTooSmall,
  NotReached,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace perpetua
