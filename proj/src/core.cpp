#include "dlraman/core.hpp"

#include <cmath>
#include <sstream>

namespace dlraman {

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

AtomLevels AtomLevels::rubidium87() {
  AtomLevels l;
  l.omega1 = 0.0;
  l.omega2 = kTwoPi * 6.834682610904290e9;
  l.omega3 = kTwoPi * 377.107463380e12;
  l.omega4 = kTwoPi * 384.2304844685e12;
  l.gamma3_si = kTwoPi * 5.7500e6;
  l.gamma4 = 1.05;
  return l;
}

double ValidatedConfig::omega3() const { return std::hypot(cfg_.d13.rabi, cfg_.d23.rabi); }
double ValidatedConfig::omega4() const { return std::hypot(cfg_.d14.rabi, cfg_.d24.rabi); }

namespace {

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and >= 0 (got " << v << ")";
    throw Error(ErrorCode::NegativeRate, os.str());
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidLevels, std::string(name) + " must be finite");
  }
}

}  // namespace

ValidatedConfig validate_config(const DoubleLambdaConfig& raw) {
  const AtomLevels& lv = raw.levels;
  if (!(lv.gamma3_si > 0.0) || !(lv.gamma4 > 0.0) || !std::isfinite(lv.gamma3_si) ||
      !std::isfinite(lv.gamma4)) {
    throw Error(ErrorCode::NegativeRate, "gamma3 and gamma4 must be positive");
  }
  for (double w : {lv.omega1, lv.omega2, lv.omega3, lv.omega4}) require_finite(w, "level frequency");
  if (!(lv.omega1 <= lv.omega2 && lv.omega2 < lv.omega3 && lv.omega2 < lv.omega4)) {
    throw Error(ErrorCode::InvalidLevels, "require omega1 <= omega2 < omega3, omega4");
  }
  require_non_negative(raw.d13.rabi, "omega13_rabi");
  require_non_negative(raw.d23.rabi, "omega23_rabi");
  require_non_negative(raw.d14.rabi, "omega14_rabi");
  require_non_negative(raw.d24.rabi, "omega24_rabi");
  require_non_negative(raw.ground_decoherence, "ground_decoherence");
  for (const DriveField* f : {&raw.d13, &raw.d23, &raw.d14, &raw.d24}) {
    require_finite(f->detuning, "detuning");
    require_finite(f->phase0, "phase0");
  }

  ValidatedConfig v;
  v.cfg_ = raw;
  v.delta3_ = 0.5 * (raw.d13.detuning + raw.d23.detuning);
  v.delta4_ = 0.5 * (raw.d14.detuning + raw.d24.detuning);
  v.two_photon3_ = raw.d13.detuning - raw.d23.detuning;
  v.two_photon4_ = raw.d14.detuning - raw.d24.detuning;
  if (std::abs(v.two_photon3_ - v.two_photon4_) > kTwoPhotonTolerance) {
    std::ostringstream os;
    os << "Delta3 = " << v.two_photon3_ << " but Delta4 = " << v.two_photon4_
       << "; no rotating frame without pulsations exists";
    throw Error(ErrorCode::NonMatchingTwoPhotonDetuning, os.str());
  }
  const double pump2 = raw.d13.rabi * raw.d13.rabi + raw.d23.rabi * raw.d23.rabi;
  const double probe2 = raw.d14.rabi * raw.d14.rabi + raw.d24.rabi * raw.d24.rabi;
  v.probe_perturbative_ = pump2 > 0.0 && probe2 * 10.0 <= pump2;
  return v;
}

double closed_loop_phase(const ValidatedConfig& cfg) {
  return wrap_phase((cfg.d24().phase0 - cfg.d23().phase0) - (cfg.d14().phase0 - cfg.d13().phase0));
}

ValidatedConfig with_closed_loop_phase(const ValidatedConfig& cfg, double phi0) {
  DoubleLambdaConfig raw = cfg.raw();
  raw.d24.phase0 = phi0 + raw.d23.phase0 + raw.d14.phase0 - raw.d13.phase0;
  return validate_config(raw);
}

ValidatedConfig with_probe_detuning(const ValidatedConfig& cfg, double delta4) {
  DoubleLambdaConfig raw = cfg.raw();
  const double half = 0.5 * cfg.two_photon4();
  raw.d14.detuning = delta4 + half;
  raw.d24.detuning = delta4 - half;
  return validate_config(raw);
}

ValidatedConfig with_pump_detuning(const ValidatedConfig& cfg, double delta3) {
  DoubleLambdaConfig raw = cfg.raw();
  const double half = 0.5 * cfg.two_photon3();
  raw.d13.detuning = delta3 + half;
  raw.d23.detuning = delta3 - half;
  return validate_config(raw);
}

LaserFrequencies laser_frequencies(const ValidatedConfig& cfg) {
  const AtomLevels& lv = cfg.levels();
  const double g = lv.gamma3_si;
  return {lv.omega3 - lv.omega1 + cfg.d13().detuning * g, lv.omega3 - lv.omega2 + cfg.d23().detuning * g,
          lv.omega4 - lv.omega1 + cfg.d14().detuning * g, lv.omega4 - lv.omega2 + cfg.d24().detuning * g};
}

ValidatedConfig make_config(const BeamSet& b) {
  DoubleLambdaConfig raw;
  raw.levels.gamma4 = b.gamma4;
  raw.d13 = {b.omega13, b.delta3 + 0.5 * b.two_photon, 0.0, std::nullopt};
  raw.d23 = {b.omega23, b.delta3 - 0.5 * b.two_photon, 0.0, std::nullopt};
  raw.d14 = {b.omega14, b.delta4 + 0.5 * b.two_photon, 0.0, std::nullopt};
  raw.d24 = {b.omega24, b.delta4 - 0.5 * b.two_photon, b.phi0, std::nullopt};
  raw.ground_decoherence = b.ground_decoherence;
  return validate_config(raw);
}

ValidatedConfig equal_beams(double omega3, double delta3, double omega4, double delta4, double phi0,
                            double gamma4) {
  const double s = 1.0 / std::numbers::sqrt2;
  BeamSet b;
  b.omega13 = b.omega23 = omega3 * s;
  b.omega14 = b.omega24 = omega4 * s;
  b.delta3 = delta3;
  b.delta4 = delta4;
  b.phi0 = phi0;
  b.gamma4 = gamma4;
  return make_config(b);
}

ValidatedConfig fig2_config(double delta4, double phi0) {
  BeamSet b;
  b.omega13 = 10.0;
  b.omega23 = 7.0;
  b.omega14 = 0.2;
  b.omega24 = 0.5;
  b.delta3 = 1.0;
  b.delta4 = delta4;
  b.phi0 = phi0;
  b.gamma4 = 1.05;
  return make_config(b);
}

ValidatedConfig fig4_config(double delta4, double phi0) {
  return equal_beams(10.0, 10.0, 1.0, delta4, phi0, 1.05);
}

}  // namespace dlraman
