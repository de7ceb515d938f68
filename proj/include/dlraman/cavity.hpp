#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlraman/medium.hpp"

namespace dlraman {

/// L_c = 2 pi m c / splitting, splitting as an angular frequency (rad/s).
double cavity_length(double splitting, int mode_index);

struct CavitySpec {
  double splitting = 0.0;  // rad/s
  int mode_index = 1;
  double transmittivity = 0.0;  // output coupler, in (0, 1)

  double length() const { return cavity_length(splitting, mode_index); }
};

/// Throws InconsistentCavity on splitting <= 0, m < 1 or T outside [0, 1).
CavitySpec make_cavity(double splitting, int mode_index, double transmittivity);

struct Threshold {
  double alpha = 0.0;     // T / (2 L_c), m^-1
  double per_pass = 0.0;  // alpha * L_c = T / 2
};

Threshold threshold_gain(const CavitySpec& spec);

struct LasingPoint {
  double phi0 = 0.0;
  double delta4 = 0.0;
  double alpha14 = 0.0;
  double alpha24 = 0.0;
  double gain = 0.0;  // mean of alpha14 and alpha24 at the root
  std::optional<double> margin;    // gain - threshold, when a cavity was given
  std::optional<double> per_pass;  // gain * L_c
  ValidatedConfig pump_context;
};

struct EqualGainOptions {
  int samples = 720;
  double phi_lo = 0.0;
  double phi_hi = kTwoPi;
  Engine engine = Engine::Exact;
  DecayModel decay{};
  int parallel = 1;
  double gain_tolerance = 1e-6;   // m^-1, on alpha14 - alpha24
  double phase_tolerance = 1e-6;  // rad
  std::optional<CavitySpec> cavity;
};

struct EqualGainSearch {
  /// Roots of alpha14 - alpha24 with a nonzero common response.
  std::vector<LasingPoint> points;
  /// Roots where both alphas vanish to within the gain tolerance (trapped,
  /// transparent medium); not equal-gain points.
  std::vector<LasingPoint> transparency_points;
  std::vector<double> phi;
  std::vector<double> alpha14;
  std::vector<double> alpha24;
};

/// Dense sampling of g(Phi0) = alpha14 - alpha24 followed by bisection on
/// each sign change. A full 2pi range is treated as periodic. Throws
/// NoCrossings (with the sampled extrema) when no equal-gain point exists.
EqualGainSearch find_equal_gain_points(const ValidatedConfig& cfg_template, double delta4,
                                       const MediumParams& medium, const EqualGainOptions& opts = {});

/// Same search but never throws NoCrossings.
EqualGainSearch scan_equal_gain(const ValidatedConfig& cfg_template, double delta4,
                                const MediumParams& medium, const EqualGainOptions& opts = {});

/// Equal-gain point with both alphas positive and the largest common gain.
std::optional<LasingPoint> best_gain_point(const EqualGainSearch& search);

/// Rescales medium.calibration so that the best both-gain point has common
/// gain target (m^-1). Throws NoCrossings if no such point exists.
MediumParams calibrate_medium(const ValidatedConfig& cfg_template, double delta4, const MediumParams& medium,
                              double target_gain, const EqualGainOptions& opts = {});

struct FeasibilityReport {
  double phi0 = 0.0;
  double gain = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  double shortfall = 0.0;
  double max_transmittivity = 0.0;  // 2 gain L_c
  double per_pass = 0.0;            // gain L_c
  double cavity_length = 0.0;
  int mode_index = 1;
  double transmittivity = 0.0;
  bool feasible = false;
  /// Output phase relation phi24 - phi14 = Phi0 + phi23 - phi13 (mod 2pi).
  double required_output_phase_difference = 0.0;
  double beat_frequency = 0.0;  // omega14 - omega24, rad/s
};

/// Throws InconsistentCavity when the cavity splitting disagrees with the
/// atom's ground splitting (relative 1e-9) or the probe beat frequency does
/// not match the pump beat.
FeasibilityReport lasing_feasibility(const LasingPoint& point, const CavitySpec& spec);

std::string to_json_string(const FeasibilityReport& r);
std::string to_text(const FeasibilityReport& r);

}  // namespace dlraman
