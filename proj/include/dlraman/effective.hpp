#pragma once

#include <Eigen/Dense>

#include "dlraman/liouville.hpp"

// Reduction of the double-Lambda atom to an effective two-level system:
// dark/bright basis of the pump pair, adiabatic elimination of |3>, then of
// |4>, analytic steady state for equal beams, and reconstruction of the
// probe coherences from the two-level density matrix.
//
// All operators here act in the {|D>, |B>} (or {|D>, |B'>, |4~>}) ordering.
// The light-shifted |D'>, |B''> are identified with |D>, |B>.

namespace dlraman {

using Matrix2c = Eigen::Matrix2cd;
using Matrix3c = Eigen::Matrix3cd;

struct DarkBrightBasis {
  double theta3 = 0.0;  // cos = Omega23 / Omega3
  double theta4 = 0.0;  // cos = Omega24 / Omega4 (0 when the probes are off)
  double omega3_eff = 0.0;
  double omega4_eff = 0.0;
  // Rows are <D| and <B| expressed on {|1~>, |2~>}:
  // |D> = cos t3 |1~> - sin t3 |2~>,  |B> = sin t3 |1~> + cos t3 |2~>.
  Matrix2c transform;
};

/// Throws ZeroPump if Omega3 == 0.
DarkBrightBasis dark_bright(const ValidatedConfig& cfg);

struct PumpEffective {
  double l3 = 0.0;       // Omega3^2 / (Gamma3^2 + 4 delta3^2)
  Matrix2c hamiltonian;  // (1/2) L3 (2 delta3 - i Gamma3) |B'><B'|
};

PumpEffective pump_effective(const ValidatedConfig& cfg);

/// Couplings h_D4, h_B'4 such that <D|H|4~> = h_D4 / 2 and <B'|H|4~> = h_B'4 / 2.
struct ProbeCouplings {
  cd h_d4;
  cd h_b4;
};

/// Throws ZeroPump.
ProbeCouplings probe_couplings(const ValidatedConfig& cfg);

/// Non-Hermitian Hamiltonian on {|D>, |B'>, |4~>}; throws ZeroPump.
Matrix3c three_state_hamiltonian(const ValidatedConfig& cfg);

struct AdiabaticCoefficients {
  cd a_d;  // h_D4^* / (2 delta4 + i Gamma4)
  cd a_b;  // h_B'4^* / (2 delta4 + i Gamma4)
};

/// c4 = A_D c_D + A_B' c_B'. Throws ProbeResonanceSingularity if
/// |2 delta4 + i Gamma4| is below 1e-300 (cannot happen for Gamma4 > 0).
AdiabaticCoefficients adiabatic_coefficients(const ValidatedConfig& cfg);

struct EffectiveTwoLevel {
  double l3 = 0.0;
  double gamma_eq = 0.0;  // L3 * Gamma3
  cd h_d4;
  cd h_b4;
  /// Effective Rabi frequency -2i <D'|H|B''>; real, (Omega4^2 / 4 delta4) sin Phi0,
  /// for equal beams.
  cd omega_eq;
  /// Level energies with omega1 = 0: omega2 = Re(H_BB - H_DD).
  double omega1 = 0.0;
  double omega2 = 0.0;
  /// Light shifts and coupling in {|D'>, |B''>}, Gamma4 dropped; the
  /// anti-Hermitian part is -(i/2) L3 Gamma3 |B''><B''|.
  Matrix2c hamiltonian2;
};

/// Throws ZeroPump, ZeroProbeDetuning (delta4 == 0), NonZeroTwoPhotonDetuning.
EffectiveTwoLevel final_two_level(const ValidatedConfig& cfg);

/// Equal-beams form with the D' level as energy reference:
/// (1/2)[ (Omega4^2/2delta4) cos Phi0 + L3 (2 delta3 - i Gamma3) ] |B''><B''|
///   + (i/2)(Omega4^2/4delta4) sin Phi0 |D'><B''| + h.c.
Matrix2c equal_beams_hamiltonian(double omega3, double delta3, double omega4, double delta4,
                                 double phi0, double gamma3 = 1.0);

/// Steady state of the two-level Lindblad problem: Hermitian part of
/// hamiltonian2 plus the jump |D'><B''| at rate gamma_eq. Throws NoRelaxation
/// when gamma_eq <= 0.
DensityMatrix two_level_steady_state(const EffectiveTwoLevel& eff, double gamma_eq);
inline DensityMatrix two_level_steady_state(const EffectiveTwoLevel& eff) {
  return two_level_steady_state(eff, eff.gamma_eq);
}

/// Closed-form equal-beams steady state (rho_B''B'', rho_D'B'').
struct AnalyticTwoLevel {
  double rho_bb = 0.0;
  cd rho_db;
};
AnalyticTwoLevel analytic_equal_beams_state(double omega3, double delta3, double omega4,
                                            double delta4, double phi0, double gamma3 = 1.0);

struct ReconstructedCoherences {
  cd rho11, rho22, rho12;  // ground block
  cd rho14, rho24;         // probe coherences, Gamma4 kept in the prefactor
};

/// rho2 in {D, B} ordering.
ReconstructedCoherences reconstruct_coherences(const DensityMatrix& rho2, const DarkBrightBasis& basis,
                                               const ValidatedConfig& cfg);

/// The whole chain for one configuration.
struct EffectiveSolution {
  EffectiveTwoLevel model;
  DensityMatrix rho2;
  ReconstructedCoherences coherences;
};
EffectiveSolution solve_effective(const ValidatedConfig& cfg);

}  // namespace dlraman
