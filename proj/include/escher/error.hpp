#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace escher {

enum class ErrorCode {
  SingularPoint,
  NoConvergence,
  OffSurface,
  WrongSurfaceKind,
  LevelOutOfRange,
  DegenerateTriangle,
  UnsupportedDegree,
  SingularMatrix,
  IterativeBreakdown,
  IncompatibleRhs,
  NewtonDivergence,
  ZeroError,
  LengthMismatch,
  InvalidArgument,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by user input (configuration), as opposed to numerics.
  bool is_config_error() const noexcept {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::ValidationError;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace escher
