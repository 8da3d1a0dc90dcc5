#include "sphoep/error.hpp"

namespace sphoep {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::StencilUnavailable: return "StencilUnavailable";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::NoZeroBeforePole: return "NoZeroBeforePole";
    case ErrorCode::EigenNotConverged: return "EigenNotConverged";
    case ErrorCode::DegenerateNearTwo: return "DegenerateNearTwo";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NormalizationMissing: return "NormalizationMissing";
    case ErrorCode::NoBoundaryContact: return "NoBoundaryContact";
    case ErrorCode::CriticalLevelSkipped: return "CriticalLevelSkipped";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::DegenerateLevel: return "DegenerateLevel";
    case ErrorCode::TopCurveNotFound: return "TopCurveNotFound";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::OpenCurve: return "OpenCurve";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sphoep
