#pragma once

#include "dlraman/effective.hpp"
#include "dlraman/liouville.hpp"

namespace dlraman {

/// Which model produces the probe coherences.
enum class Engine { Exact, Effective };

std::string_view to_string(Engine e);

struct ProbeCoherences {
  cd rho14;
  cd rho24;
};

/// rho~14, rho~24 from the exact 4-level steady state or the effective chain.
ProbeCoherences probe_coherences(const ValidatedConfig& cfg, Engine engine, const DecayModel& decay = {});

/// Phase attached to rho~24 when forming xi24. Conjugate multiplies by
/// exp(-i Phi0) and is the default; Direct uses exp(+i Phi0), which makes
/// alpha24(Phi0) = alpha14(-Phi0) for equal beams.
enum class ProbePhaseFactor { Conjugate, Direct };

/// 87Rb D2 reduced dipole matrix element (C m).
inline constexpr double kRb87D2Dipole = 3.584e-29;

struct MediumParams {
  double density = 1e15;  // m^-3
  double dipole14 = kRb87D2Dipole;  // C m
  double dipole24 = kRb87D2Dipole;
  /// Common dimensionless multiplier on both coupling prefactors; 1 for
  /// plain SI dipoles, set by calibrate_medium otherwise.
  double calibration = 1.0;
  ProbePhaseFactor phase_factor = ProbePhaseFactor::Conjugate;

  /// kappa_mn = calibration * mu0 N |M_mn|^2 c^2 / hbar, in rad/s.
  double coupling14() const;
  double coupling24() const;
};

/// Throws NegativeRate on density <= 0 or negative dipoles.
void validate_medium(const MediumParams& m);

struct MediumResponse {
  cd xi14;
  cd xi24;
  double alpha14 = 0.0;  // m^-1, > 0 means gain
  double alpha24 = 0.0;
};

/// xi14 = kappa14 rho~14 / Omega14, xi24 = kappa24 rho~24 e^{-/+ i Phi0} / Omega24
/// (Rabi frequencies converted to rad/s); alpha = Im(xi) omega / c.
/// Throws ZeroProbe if either probe Rabi frequency is zero.
MediumResponse susceptibility(const ValidatedConfig& cfg, const ProbeCoherences& coherences,
                              const MediumParams& medium);

/// probe_coherences followed by susceptibility.
MediumResponse medium_response(const ValidatedConfig& cfg, const MediumParams& medium, Engine engine,
                               const DecayModel& decay = {});

struct PhaseMatching {
  double residual = 0.0;  // |(k24 - k14) - (k23 - k13)|, rad/m
  bool ok = false;
};

/// Default tolerance: 1e-9 of the largest wavevector.
PhaseMatching phase_matching_check(double k13, double k23, double k14, double k24,
                                   double tolerance = -1.0);

struct Wavevectors {
  double k13, k23, k14, k24;
};

/// Pumps undepleted (vacuum k = omega/c); probes k = (omega/c)(1 + Re xi).
Wavevectors medium_wavevectors(const ValidatedConfig& cfg, const MediumResponse& response);

/// omega14 xi14 - omega24 xi24 (rad/s). Diagnostic only.
cd self_consistency_check(const MediumResponse& response, double omega14, double omega24);

}  // namespace dlraman
