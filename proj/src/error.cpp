#include "dlraman/error.hpp"

namespace dlraman {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMatchingTwoPhotonDetuning: return "NonMatchingTwoPhotonDetuning";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::InvalidLevels: return "InvalidLevels";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidSweep: return "InvalidSweep";
    case ErrorCode::InconsistentCavity: return "InconsistentCavity";
    case ErrorCode::DegenerateSteadyState: return "DegenerateSteadyState";
    case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorCode::ZeroPump: return "ZeroPump";
    case ErrorCode::ZeroProbe: return "ZeroProbe";
    case ErrorCode::ZeroProbeDetuning: return "ZeroProbeDetuning";
    case ErrorCode::ProbeResonanceSingularity: return "ProbeResonanceSingularity";
    case ErrorCode::NonZeroTwoPhotonDetuning: return "NonZeroTwoPhotonDetuning";
    case ErrorCode::NoRelaxation: return "NoRelaxation";
    case ErrorCode::NoCrossings: return "NoCrossings";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMatchingTwoPhotonDetuning:
    case ErrorCode::NegativeRate:
    case ErrorCode::InvalidLevels:
    case ErrorCode::ConfigParse:
    case ErrorCode::InvalidSweep:
    case ErrorCode::InconsistentCavity:
      return true;
    default:
      return false;
  }
}

}  // namespace dlraman
