#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evokit {

enum class ErrorCode {
  NonFiniteDerivative,
  DegenerateCurve,
  LiftFailure,
  NonFiniteCurvature,
  OutOfRange,
  ZeroCurvature,
  SingularInvolute,
  VanishingKappaPrime,
  AmbiguousOrder,
  NotACriticalPoint,
  NonInjectiveProjection,
  NonMonotonePrecondition,
  InvalidCurve,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::NonFiniteCurvature: return "NonFiniteCurvature";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroCurvature: return "ZeroCurvature";
    case ErrorCode::SingularInvolute: return "SingularInvolute";
    case ErrorCode::VanishingKappaPrime: return "VanishingKappaPrime";
    case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorCode::NotACriticalPoint: return "NotACriticalPoint";
    case ErrorCode::NonInjectiveProjection: return "NonInjectiveProjection";
    case ErrorCode::NonMonotonePrecondition: return "NonMonotonePrecondition";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// All library failures are reported through this one exception type; `code()`
/// names the gate that rejected the input.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw GeometryError(code, what); }

}  // namespace evokit
