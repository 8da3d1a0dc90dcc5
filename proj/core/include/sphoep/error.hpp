#pragma once

#include <stdexcept>
#include <string>

namespace sphoep {

enum class ErrorCode {
  ParameterOutOfRange,
  OutOfDomain,
  ValueOutOfRange,
  StencilUnavailable,
  DegenerateGradient,
  NoZeroBeforePole,
  EigenNotConverged,
  DegenerateNearTwo,
  InvalidDomain,
  NormalizationMissing,
  NoBoundaryContact,
  CriticalLevelSkipped,
  EmptyLevel,
  DegenerateLevel,
  TopCurveNotFound,
  DegenerateTriangle,
  OpenCurve,
  UnknownSuite,
  ParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sphoep
