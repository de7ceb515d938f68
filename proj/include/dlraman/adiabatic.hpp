#pragma once

#include <string>

#include "dlraman/liouville.hpp"

// Checks that the excited-state amplitudes follow the ground manifold as
// the adiabatic-elimination formulas predict, by evolving the exact
// master equation from |1><1|.

namespace dlraman {

struct DeviationStats {
  double mean_relative = 0.0;    // sum |exact - predicted| / sum |exact|, over samples
  double max_relative = 0.0;     // max over samples of |exact - predicted| / max |exact|
  double steady_relative = 0.0;  // same, last sample
  bool flagged = false;          // steady_relative above AdiabaticityOptions::flag_threshold
  bool active = false;           // false when that side is undriven
};

struct AdiabaticityReport {
  DeviationStats pump;   // level 3: rho_g3 vs -Omega3 rho_gB / (2 delta3 - i Gamma3)
  DeviationStats probe;  // level 4: rho_g4 vs sum_X rho_gX conj(A_X)
  double t_final = 0.0;
  double dt = 0.0;
  int samples = 0;
};

struct AdiabaticityOptions {
  double dt = 0.0;  // <= 0: half the stable step
  int sample_stride = 10;
  double flag_threshold = 0.05;
};

AdiabaticityReport verify_adiabaticity(const ValidatedConfig& cfg, double t_final,
                                       const AdiabaticityOptions& opts = {}, const DecayModel& decay = {});

std::string to_json_string(const AdiabaticityReport& r);

}  // namespace dlraman
