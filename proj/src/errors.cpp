#include "slabqio/errors.hpp"

namespace slabqio {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAtResonance: return "PoleAtResonance";
    case ErrorCode::RootBracketingFailure: return "RootBracketingFailure";
    case ErrorCode::EdgeNotFound: return "EdgeNotFound";
    case ErrorCode::PoleDivergentFrequency: return "PoleDivergentFrequency";
    case ErrorCode::DetectorInsideMedium: return "DetectorInsideMedium";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::PulseFileError: return "PulseFileError";
    case ErrorCode::FixtureError: return "FixtureError";
    case ErrorCode::UnitarityViolation: return "UnitarityViolation";
  }
  return "UnknownError";
}

}  // namespace slabqio
