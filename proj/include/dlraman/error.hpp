#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dlraman {

enum class ErrorCode {
  // configuration errors
  NonMatchingTwoPhotonDetuning,
  NegativeRate,
  InvalidLevels,
  ConfigParse,
  InvalidSweep,
  InconsistentCavity,
  // solver / model errors
  DegenerateSteadyState,
  StepSizeTooLarge,
  ZeroPump,
  ZeroProbe,
  ZeroProbeDetuning,
  ProbeResonanceSingularity,
  NonZeroTwoPhotonDetuning,
  NoRelaxation,
  NoCrossings,
};

std::string_view to_string(ErrorCode code);

/// True for codes that describe bad input rather than a numerical failure.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dlraman
