#pragma once

#include <numbers>
#include <optional>

#include "dlraman/error.hpp"

// Domain model of the four-level double-Lambda atom.
//
// Unit system: every rate, Rabi frequency and detuning stored in a
// configuration is dimensionless, measured in units of the |3> decay rate
// Gamma3 (so Gamma3 == 1 and hbar == 1 internally). Absolute atomic level
// frequencies and Gamma3 itself are kept in SI (rad/s); they only matter at
// the medium/cavity boundary.

namespace dlraman {

namespace si {
inline constexpr double c = 299'792'458.0;          // m/s
inline constexpr double mu0 = 1.25663706212e-6;     // N/A^2
inline constexpr double hbar = 1.054571817e-34;     // J s
}  // namespace si

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance on Delta3 == Delta4, in units of Gamma3.
inline constexpr double kTwoPhotonTolerance = 1e-9;

/// Reduce an angle to [0, 2pi).
double wrap_phase(double phi);

struct AtomLevels {
  // Level angular frequencies (rad/s, SI). omega1 <= omega2 < omega3, omega4.
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double omega4 = 0.0;
  double gamma3_si = 1.0;  // rad/s; defines the internal rate unit
  double gamma4 = 1.0;     // units of Gamma3

  double gamma3() const { return 1.0; }
  double ground_splitting() const { return omega2 - omega1; }

  /// 87Rb-like defaults: |1>,|2> = 5S1/2 F=1,2; |3> on D1, |4> on D2.
  static AtomLevels rubidium87();

  bool operator==(const AtomLevels&) const = default;
};

struct DriveField {
  double rabi = 0.0;      // >= 0, units of Gamma3
  double detuning = 0.0;  // laser minus atomic frequency, units of Gamma3
  double phase0 = 0.0;    // rad
  std::optional<double> wavevector;  // rad/m, phase-matching checks only

  bool operator==(const DriveField&) const = default;
};

struct DoubleLambdaConfig {
  AtomLevels levels = AtomLevels::rubidium87();
  DriveField d13;  // pump leg 1-3
  DriveField d23;  // pump leg 2-3
  DriveField d14;  // probe leg 1-4
  DriveField d24;  // probe leg 2-4
  double ground_decoherence = 0.0;  // |1>-|2> coherence decay rate, units of Gamma3

  bool operator==(const DoubleLambdaConfig&) const = default;
};

/// A configuration that passed validate_config. Immutable; derived
/// detunings are populated once.
class ValidatedConfig {
 public:
  const DoubleLambdaConfig& raw() const { return cfg_; }
  const AtomLevels& levels() const { return cfg_.levels; }
  const DriveField& d13() const { return cfg_.d13; }
  const DriveField& d23() const { return cfg_.d23; }
  const DriveField& d14() const { return cfg_.d14; }
  const DriveField& d24() const { return cfg_.d24; }

  double delta3() const { return delta3_; }
  double delta4() const { return delta4_; }
  double two_photon3() const { return two_photon3_; }
  double two_photon4() const { return two_photon4_; }
  /// Common two-photon detuning Delta used to build the rotating frame.
  double two_photon() const { return 0.5 * (two_photon3_ + two_photon4_); }

  double gamma3() const { return 1.0; }
  double gamma4() const { return cfg_.levels.gamma4; }
  double ground_decoherence() const { return cfg_.ground_decoherence; }

  /// Effective pump / probe Rabi frequencies Omega3, Omega4.
  double omega3() const;
  double omega4() const;

  /// Omega14^2 + Omega24^2 << Omega13^2 + Omega23^2 (factor 10 margin).
  /// Recorded only; the exact solver does not depend on it.
  bool probe_perturbative() const { return probe_perturbative_; }

  bool operator==(const ValidatedConfig&) const = default;

 private:
  friend ValidatedConfig validate_config(const DoubleLambdaConfig& raw);
  ValidatedConfig() = default;

  DoubleLambdaConfig cfg_;
  double delta3_ = 0.0;
  double delta4_ = 0.0;
  double two_photon3_ = 0.0;
  double two_photon4_ = 0.0;
  bool probe_perturbative_ = false;
};

/// Throws Error{NegativeRate | InvalidLevels | NonMatchingTwoPhotonDetuning}.
ValidatedConfig validate_config(const DoubleLambdaConfig& raw);
inline ValidatedConfig validate_config(const ValidatedConfig& cfg) { return cfg; }

/// (phi24 - phi23) - (phi14 - phi13) reduced to [0, 2pi).
double closed_loop_phase(const ValidatedConfig& cfg);

// Derived configurations. Each returns a freshly validated copy.

/// Sets phi0_24 so that the closed-loop phase equals phi0; other phases untouched.
ValidatedConfig with_closed_loop_phase(const ValidatedConfig& cfg, double phi0);
/// Shifts delta14 and delta24 so the probe common detuning equals delta4,
/// keeping Delta4.
ValidatedConfig with_probe_detuning(const ValidatedConfig& cfg, double delta4);
/// Same for the pump pair.
ValidatedConfig with_pump_detuning(const ValidatedConfig& cfg, double delta3);

/// Optical angular frequency of each laser (rad/s, SI).
struct LaserFrequencies {
  double w13, w23, w14, w24;
};
LaserFrequencies laser_frequencies(const ValidatedConfig& cfg);

/// Compact description of the four beams, all in units of Gamma3.
struct BeamSet {
  double omega13 = 0.0, omega23 = 0.0, omega14 = 0.0, omega24 = 0.0;
  double delta3 = 0.0, delta4 = 0.0;
  double phi0 = 0.0;
  double two_photon = 0.0;
  double gamma4 = 1.05;
  double ground_decoherence = 0.0;
};

/// All phases zero except phi0_24 = phi0; symmetric split of Delta.
ValidatedConfig make_config(const BeamSet& beams);

/// Equal pumps (Omega13 = Omega23 = Omega3/sqrt2) and equal probes.
ValidatedConfig equal_beams(double omega3, double delta3, double omega4, double delta4,
                            double phi0, double gamma4 = 1.05);

/// Exact-vs-effective validation scenario: Omega13=10, Omega23=7,
/// Omega14=1/5, Omega24=1/2, delta3=1, Gamma4=1.05.
ValidatedConfig fig2_config(double delta4, double phi0);

/// Bi-lasing scenario: Omega3=10 (equal pumps), delta3=10, Omega4=1 (equal
/// probes), Gamma4=1.05, Delta=0.
ValidatedConfig fig4_config(double delta4, double phi0);

}  // namespace dlraman
