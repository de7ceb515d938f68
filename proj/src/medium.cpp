#include "dlraman/medium.hpp"

#include <algorithm>
#include <cmath>

namespace dlraman {

std::string_view to_string(Engine e) { return e == Engine::Exact ? "exact" : "effective"; }

ProbeCoherences probe_coherences(const ValidatedConfig& cfg, Engine engine, const DecayModel& decay) {
  if (engine == Engine::Exact) {
    const ExactCoherences c = exact_coherences(exact_steady_state(cfg, decay));
    return {c.rho14, c.rho24};
  }
  const EffectiveSolution s = solve_effective(cfg);
  return {s.coherences.rho14, s.coherences.rho24};
}

namespace {

double coupling(const MediumParams& m, double dipole) {
  return m.calibration * si::mu0 * m.density * dipole * dipole * si::c * si::c / si::hbar;
}

}  // namespace

double MediumParams::coupling14() const { return coupling(*this, dipole14); }
double MediumParams::coupling24() const { return coupling(*this, dipole24); }

void validate_medium(const MediumParams& m) {
  if (!(m.density > 0.0) || !(m.dipole14 >= 0.0) || !(m.dipole24 >= 0.0) || !(m.calibration > 0.0)) {
    throw Error(ErrorCode::NegativeRate, "medium density and calibration must be > 0, dipoles >= 0");
  }
}

MediumResponse susceptibility(const ValidatedConfig& cfg, const ProbeCoherences& coherences,
                              const MediumParams& medium) {
  if (cfg.d14().rabi == 0.0 || cfg.d24().rabi == 0.0) {
    throw Error(ErrorCode::ZeroProbe, "susceptibility needs both probe Rabi frequencies > 0");
  }
  const double g = cfg.levels().gamma3_si;
  const double phi0 = closed_loop_phase(cfg);
  const cd phase = std::polar(1.0, medium.phase_factor == ProbePhaseFactor::Conjugate ? -phi0 : phi0);
  MediumResponse r;
  r.xi14 = medium.coupling14() * coherences.rho14 / (cfg.d14().rabi * g);
  r.xi24 = medium.coupling24() * coherences.rho24 * phase / (cfg.d24().rabi * g);
  const LaserFrequencies w = laser_frequencies(cfg);
  r.alpha14 = r.xi14.imag() * w.w14 / si::c;
  r.alpha24 = r.xi24.imag() * w.w24 / si::c;
  return r;
}

MediumResponse medium_response(const ValidatedConfig& cfg, const MediumParams& medium, Engine engine,
                               const DecayModel& decay) {
  return susceptibility(cfg, probe_coherences(cfg, engine, decay), medium);
}

PhaseMatching phase_matching_check(double k13, double k23, double k14, double k24, double tolerance) {
  if (tolerance < 0.0) {
    tolerance = 1e-9 * std::max({std::abs(k13), std::abs(k23), std::abs(k14), std::abs(k24)});
  }
  PhaseMatching pm;
  pm.residual = std::abs((k24 - k14) - (k23 - k13));
  pm.ok = pm.residual <= tolerance;
  return pm;
}

Wavevectors medium_wavevectors(const ValidatedConfig& cfg, const MediumResponse& response) {
  const LaserFrequencies w = laser_frequencies(cfg);
  return {w.w13 / si::c, w.w23 / si::c, w.w14 / si::c * (1.0 + response.xi14.real()),
          w.w24 / si::c * (1.0 + response.xi24.real())};
}

cd self_consistency_check(const MediumResponse& response, double omega14, double omega24) {
  return omega14 * response.xi14 - omega24 * response.xi24;
}

}  // namespace dlraman
