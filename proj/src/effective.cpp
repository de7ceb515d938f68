#include "dlraman/effective.hpp"

#include <cmath>
#include <sstream>

namespace dlraman {

namespace {

constexpr cd kI{0.0, 1.0};

void require_pump(const ValidatedConfig& cfg) {
  if (cfg.omega3() == 0.0) throw Error(ErrorCode::ZeroPump, "Omega3 = 0, dark/bright basis undefined");
}

void require_zero_two_photon(const ValidatedConfig& cfg) {
  if (std::abs(cfg.two_photon()) > kTwoPhotonTolerance) {
    std::ostringstream os;
    os << "effective model assumes Delta = 0 (got " << cfg.two_photon() << ")";
    throw Error(ErrorCode::NonZeroTwoPhotonDetuning, os.str());
  }
}

double l3_factor(double omega3, double delta3, double gamma3) {
  return omega3 * omega3 / (gamma3 * gamma3 + 4.0 * delta3 * delta3);
}

}  // namespace

DarkBrightBasis dark_bright(const ValidatedConfig& cfg) {
  require_pump(cfg);
  DarkBrightBasis b;
  b.omega3_eff = cfg.omega3();
  b.omega4_eff = cfg.omega4();
  b.theta3 = std::atan2(cfg.d13().rabi, cfg.d23().rabi);
  b.theta4 = std::atan2(cfg.d14().rabi, cfg.d24().rabi);
  const double c = cfg.d23().rabi / b.omega3_eff;
  const double s = cfg.d13().rabi / b.omega3_eff;
  b.transform << c, -s, s, c;
  return b;
}

PumpEffective pump_effective(const ValidatedConfig& cfg) {
  PumpEffective p;
  p.l3 = l3_factor(cfg.omega3(), cfg.delta3(), cfg.gamma3());
  p.hamiltonian = Matrix2c::Zero();
  p.hamiltonian(1, 1) = 0.5 * p.l3 * cd(2.0 * cfg.delta3(), -cfg.gamma3());
  return p;
}

ProbeCouplings probe_couplings(const ValidatedConfig& cfg) {
  require_pump(cfg);
  const double o3 = cfg.omega3();
  const double o13 = cfg.d13().rabi, o23 = cfg.d23().rabi;
  const double o14 = cfg.d14().rabi, o24 = cfg.d24().rabi;
  const cd e = std::polar(1.0, -closed_loop_phase(cfg));
  return {(-o23 * o14 + o13 * o24 * e) / o3, -(o13 * o14 + o23 * o24 * e) / o3};
}

Matrix3c three_state_hamiltonian(const ValidatedConfig& cfg) {
  const ProbeCouplings h = probe_couplings(cfg);
  const double l3 = l3_factor(cfg.omega3(), cfg.delta3(), cfg.gamma3());
  Matrix3c m = Matrix3c::Zero();
  m(1, 1) = 0.5 * l3 * cd(2.0 * cfg.delta3(), -cfg.gamma3());
  m(2, 2) = -0.5 * cd(2.0 * cfg.delta4(), cfg.gamma4());
  m(0, 2) = 0.5 * h.h_d4;
  m(2, 0) = std::conj(m(0, 2));
  m(1, 2) = 0.5 * h.h_b4;
  m(2, 1) = std::conj(m(1, 2));
  return m;
}

AdiabaticCoefficients adiabatic_coefficients(const ValidatedConfig& cfg) {
  const cd den(2.0 * cfg.delta4(), cfg.gamma4());
  if (std::abs(den) < 1e-300) {
    throw Error(ErrorCode::ProbeResonanceSingularity, "|2 delta4 + i Gamma4| vanishes");
  }
  const ProbeCouplings h = probe_couplings(cfg);
  return {std::conj(h.h_d4) / den, std::conj(h.h_b4) / den};
}

EffectiveTwoLevel final_two_level(const ValidatedConfig& cfg) {
  require_zero_two_photon(cfg);
  if (cfg.delta4() == 0.0) {
    throw Error(ErrorCode::ZeroProbeDetuning, "final two-level Hamiltonian is singular at delta4 = 0");
  }
  const ProbeCouplings h = probe_couplings(cfg);
  EffectiveTwoLevel e;
  e.l3 = l3_factor(cfg.omega3(), cfg.delta3(), cfg.gamma3());
  e.gamma_eq = e.l3 * cfg.gamma3();
  e.h_d4 = h.h_d4;
  e.h_b4 = h.h_b4;

  const double two_d4 = 2.0 * cfg.delta4();
  Matrix2c m;
  m(0, 0) = std::norm(h.h_d4) / two_d4;
  m(1, 1) = std::norm(h.h_b4) / two_d4 + e.l3 * cd(2.0 * cfg.delta3(), -cfg.gamma3());
  m(0, 1) = h.h_d4 * std::conj(h.h_b4) / two_d4;
  m(1, 0) = std::conj(m(0, 1));
  e.hamiltonian2 = 0.5 * m;

  e.omega_eq = -2.0 * kI * e.hamiltonian2(0, 1);
  e.omega1 = 0.0;
  e.omega2 = (e.hamiltonian2(1, 1) - e.hamiltonian2(0, 0)).real();
  return e;
}

Matrix2c equal_beams_hamiltonian(double omega3, double delta3, double omega4, double delta4,
                                 double phi0, double gamma3) {
  const double l3 = l3_factor(omega3, delta3, gamma3);
  const double o4sq = omega4 * omega4;
  Matrix2c m = Matrix2c::Zero();
  m(1, 1) = 0.5 * (o4sq / (2.0 * delta4) * std::cos(phi0) + l3 * cd(2.0 * delta3, -gamma3));
  m(0, 1) = 0.5 * kI * (o4sq / (4.0 * delta4)) * std::sin(phi0);
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

DensityMatrix two_level_steady_state(const EffectiveTwoLevel& eff, double gamma_eq) {
  if (!(gamma_eq > 0.0)) {
    throw Error(ErrorCode::NoRelaxation, "Gamma_eq must be positive for a unique steady state");
  }
  const CMatrix herm = 0.5 * (eff.hamiltonian2 + eff.hamiltonian2.adjoint());
  CMatrix jump = CMatrix::Zero(2, 2);
  jump(0, 1) = 1.0;  // |D'><B''|
  return steady_state(lindbladian(herm, {{jump, gamma_eq}}));
}

AnalyticTwoLevel analytic_equal_beams_state(double omega3, double delta3, double omega4,
                                            double delta4, double phi0, double gamma3) {
  const double l3 = l3_factor(omega3, delta3, gamma3);
  const double o4_2 = omega4 * omega4;
  const double o4_4 = o4_2 * o4_2;
  const double c = std::cos(phi0);
  const double s = std::sin(phi0);
  const double den = 2.0 * o4_4 * (1.0 + c * c) + 16.0 * l3 * omega3 * omega3 * delta4 * delta4 +
                     32.0 * l3 * o4_2 * delta3 * delta4 * c;
  AnalyticTwoLevel a;
  a.rho_bb = o4_4 * s * s / den;
  a.rho_db = -(4.0 * o4_2 * delta4 * s * l3 * cd(gamma3, 2.0 * delta3) + kI * o4_4 * std::sin(2.0 * phi0)) /
             den;
  return a;
}

ReconstructedCoherences reconstruct_coherences(const DensityMatrix& rho2, const DarkBrightBasis& basis,
                                               const ValidatedConfig& cfg) {
  if (rho2.dim() != 2) throw Error(ErrorCode::InvalidLevels, "reconstruction needs a 2-level state");
  const cd dd = rho2(0, 0), db = rho2(0, 1), bd = rho2(1, 0), bb = rho2(1, 1);
  const double c3 = std::cos(basis.theta3), s3 = std::sin(basis.theta3);
  const double c4 = std::cos(basis.theta4), s4 = std::sin(basis.theta4);
  const cd e = std::polar(1.0, -closed_loop_phase(cfg));

  ReconstructedCoherences r;
  r.rho11 = c3 * c3 * dd + s3 * c3 * (db + bd) + s3 * s3 * bb;
  r.rho22 = s3 * s3 * dd - s3 * c3 * (db + bd) + c3 * c3 * bb;
  r.rho12 = c3 * c3 * db + s3 * c3 * (bb - dd) - s3 * s3 * bd;

  const cd pre = basis.omega4_eff / cd(2.0 * cfg.delta4(), -cfg.gamma4());
  const cd dark_factor = -c3 * s4 + s3 * c4 * e;   // h_D4 / Omega4
  const cd bright_factor = s3 * s4 + c3 * c4 * e;  // -h_B'4 / Omega4
  r.rho14 = pre * (dark_factor * (c3 * dd + s3 * bd) - bright_factor * (c3 * db + s3 * bb));
  r.rho24 = pre * (dark_factor * (c3 * bd - s3 * dd) - bright_factor * (c3 * bb - s3 * db));
  return r;
}

EffectiveSolution solve_effective(const ValidatedConfig& cfg) {
  EffectiveTwoLevel model = final_two_level(cfg);
  DensityMatrix rho2 = two_level_steady_state(model);
  ReconstructedCoherences coh = reconstruct_coherences(rho2, dark_bright(cfg), cfg);
  return {std::move(model), std::move(rho2), coh};
}

}  // namespace dlraman
