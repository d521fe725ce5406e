#include "escher/error.hpp"

namespace escher {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OffSurface: return "OffSurface";
    case ErrorCode::WrongSurfaceKind: return "WrongSurfaceKind";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::IterativeBreakdown: return "IterativeBreakdown";
    case ErrorCode::IncompatibleRhs: return "IncompatibleRHS";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::ZeroError: return "ZeroError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace escher
