#include "dlraman/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dlraman/parallel.hpp"

namespace dlraman {

double cavity_length(double splitting, int mode_index) {
  return kTwoPi * mode_index * si::c / splitting;
}

CavitySpec make_cavity(double splitting, int mode_index, double transmittivity) {
  if (!(splitting > 0.0) || mode_index < 1 || !(transmittivity >= 0.0 && transmittivity < 1.0)) {
    throw Error(ErrorCode::InconsistentCavity, "need splitting > 0, mode index >= 1, 0 <= T < 1");
  }
  return {splitting, mode_index, transmittivity};
}

Threshold threshold_gain(const CavitySpec& spec) {
  const double lc = spec.length();
  return {spec.transmittivity / (2.0 * lc), 0.5 * spec.transmittivity};
}

namespace {

struct Sample {
  double a14 = 0.0;
  double a24 = 0.0;
  double g() const { return a14 - a24; }
};

Sample evaluate(const ValidatedConfig& base, double phi, const MediumParams& medium,
                const EqualGainOptions& opts) {
  const MediumResponse r =
      medium_response(with_closed_loop_phase(base, phi), medium, opts.engine, opts.decay);
  return {r.alpha14, r.alpha24};
}

LasingPoint make_point(const ValidatedConfig& base, double phi, const Sample& s, double delta4,
                       const EqualGainOptions& opts) {
  LasingPoint p{wrap_phase(phi), delta4, s.a14, s.a24, 0.5 * (s.a14 + s.a24), std::nullopt, std::nullopt,
                with_closed_loop_phase(base, phi)};
  if (opts.cavity) {
    p.margin = p.gain - threshold_gain(*opts.cavity).alpha;
    p.per_pass = p.gain * opts.cavity->length();
  }
  return p;
}

}  // namespace

EqualGainSearch scan_equal_gain(const ValidatedConfig& cfg_template, double delta4, const MediumParams& medium,
                                const EqualGainOptions& opts) {
  validate_medium(medium);
  const int n = std::max(opts.samples, 2);
  const double span = opts.phi_hi - opts.phi_lo;
  const bool periodic = std::abs(span - kTwoPi) < 1e-12;
  const double step = periodic ? span / n : span / (n - 1);
  const ValidatedConfig base = with_probe_detuning(cfg_template, delta4);

  EqualGainSearch out;
  out.phi.resize(n);
  std::vector<Sample> samples(n);
  for (int i = 0; i < n; ++i) out.phi[i] = opts.phi_lo + step * i;
  parallel_for(static_cast<std::size_t>(n), opts.parallel,
               [&](std::size_t i) { samples[i] = evaluate(base, out.phi[i], medium, opts); });
  out.alpha14.reserve(n);
  out.alpha24.reserve(n);
  for (const Sample& s : samples) {
    out.alpha14.push_back(s.a14);
    out.alpha24.push_back(s.a24);
  }

  const double tol = opts.gain_tolerance;
  auto is_zero = [&](int i) { return std::abs(samples[i].g()) <= tol; };
  auto add_root = [&](double phi, const Sample& s) {
    LasingPoint p = make_point(base, phi, s, delta4, opts);
    if (std::max(std::abs(s.a14), std::abs(s.a24)) <= tol) {
      out.transparency_points.push_back(std::move(p));
    } else {
      out.points.push_back(std::move(p));
    }
  };

  auto bisect = [&](int i, int j) {
    double a = out.phi[i];
    double b = out.phi[j];
    if (j < i) b += span;  // wrapped pair of a periodic scan
    double ga = samples[i].g();
    Sample mid_s;
    double mid = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (a + b);
      mid_s = evaluate(base, mid, medium, opts);
      const double gm = mid_s.g();
      if (gm == 0.0 || ((b - a) <= opts.phase_tolerance && std::abs(gm) <= tol)) break;
      if ((gm > 0.0) == (ga > 0.0)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    add_root(mid, mid_s);
  };

  // Walk the samples starting on one with g != 0, so a periodic scan never
  // splits a run of zero samples. Each run of |g| <= tol counts as one root.
  int start = 0;
  if (periodic) {
    while (start < n && is_zero(start)) ++start;
    if (start == n) return out;  // g vanishes everywhere
  }
  int prev = -1;  // previous sample with g != 0, only if directly adjacent
  int run_best = -1;
  for (int pos = 0; pos < n; ++pos) {
    const int idx = (start + pos) % n;
    if (is_zero(idx)) {
      if (run_best < 0 || std::abs(samples[idx].g()) < std::abs(samples[run_best].g())) run_best = idx;
      prev = -1;
      continue;
    }
    if (run_best >= 0) {
      add_root(out.phi[run_best], samples[run_best]);
      run_best = -1;
    } else if (prev >= 0 && (samples[prev].g() > 0.0) != (samples[idx].g() > 0.0)) {
      bisect(prev, idx);
    }
    prev = idx;
  }
  if (run_best >= 0) {
    add_root(out.phi[run_best], samples[run_best]);
  } else if (periodic && prev >= 0 && (samples[prev].g() > 0.0) != (samples[start].g() > 0.0)) {
    bisect(prev, start);
  }

  auto by_phase = [](const LasingPoint& x, const LasingPoint& y) { return x.phi0 < y.phi0; };
  std::sort(out.points.begin(), out.points.end(), by_phase);
  std::sort(out.transparency_points.begin(), out.transparency_points.end(), by_phase);
  return out;
}

EqualGainSearch find_equal_gain_points(const ValidatedConfig& cfg_template, double delta4,
                                       const MediumParams& medium, const EqualGainOptions& opts) {
  EqualGainSearch s = scan_equal_gain(cfg_template, delta4, medium, opts);
  if (s.points.empty()) {
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = -gmin;
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
      gmin = std::min(gmin, s.alpha14[i] - s.alpha24[i]);
      gmax = std::max(gmax, s.alpha14[i] - s.alpha24[i]);
    }
    std::ostringstream os;
    os << "alpha14 - alpha24 has no equal-gain crossing; sampled range [" << gmin << ", " << gmax
       << "] m^-1, " << s.transparency_points.size() << " transparency point(s)";
    throw Error(ErrorCode::NoCrossings, os.str());
  }
  return s;
}

std::optional<LasingPoint> best_gain_point(const EqualGainSearch& search) {
  std::optional<LasingPoint> best;
  for (const LasingPoint& p : search.points) {
    if (p.alpha14 > 0.0 && p.alpha24 > 0.0 && (!best || p.gain > best->gain)) best = p;
  }
  return best;
}

MediumParams calibrate_medium(const ValidatedConfig& cfg_template, double delta4, const MediumParams& medium,
                              double target_gain, const EqualGainOptions& opts) {
  const EqualGainSearch s = find_equal_gain_points(cfg_template, delta4, medium, opts);
  const std::optional<LasingPoint> best = best_gain_point(s);
  if (!best) throw Error(ErrorCode::NoCrossings, "no equal-gain point with both alphas positive");
  MediumParams out = medium;
  out.calibration *= target_gain / best->gain;
  return out;
}

FeasibilityReport lasing_feasibility(const LasingPoint& point, const CavitySpec& spec) {
  const ValidatedConfig& cfg = point.pump_context;
  const double atom_split = cfg.levels().ground_splitting();
  if (std::abs(spec.splitting - atom_split) > 1e-9 * atom_split) {
    std::ostringstream os;
    os << std::setprecision(12) << "cavity splitting " << spec.splitting << " rad/s differs from the atom's "
       << atom_split << " rad/s";
    throw Error(ErrorCode::InconsistentCavity, os.str());
  }
  const LaserFrequencies w = laser_frequencies(cfg);
  const double probe_beat = w.w14 - w.w24;
  const double pump_beat = w.w13 - w.w23;
  if (std::abs(probe_beat - pump_beat) > 1e-9 * std::abs(pump_beat)) {
    throw Error(ErrorCode::InconsistentCavity, "probe beat frequency does not match the pump beat");
  }

  const Threshold th = threshold_gain(spec);
  FeasibilityReport r;
  r.phi0 = point.phi0;
  r.gain = point.gain;
  r.threshold = th.alpha;
  r.margin = r.gain - r.threshold;
  r.shortfall = std::max(0.0, -r.margin);
  r.cavity_length = spec.length();
  r.max_transmittivity = 2.0 * r.gain * r.cavity_length;
  r.per_pass = r.gain * r.cavity_length;
  r.mode_index = spec.mode_index;
  r.transmittivity = spec.transmittivity;
  r.feasible = r.margin >= 0.0 && point.alpha14 > 0.0 && point.alpha24 > 0.0;
  r.required_output_phase_difference = wrap_phase(point.phi0 + cfg.d23().phase0 - cfg.d13().phase0);
  r.beat_frequency = probe_beat;
  return r;
}

std::string to_json_string(const FeasibilityReport& r) {
  nlohmann::ordered_json j;
  j["phi0"] = r.phi0;
  j["gain_m^-1"] = r.gain;
  j["threshold_m^-1"] = r.threshold;
  j["margin"] = r.margin;
  j["shortfall"] = r.shortfall;
  j["per_pass"] = r.per_pass;
  j["max_T"] = r.max_transmittivity;
  j["cavity_length_m"] = r.cavity_length;
  j["mode_index"] = r.mode_index;
  j["transmittivity"] = r.transmittivity;
  j["feasible"] = r.feasible;
  j["phi24_minus_phi14"] = r.required_output_phase_difference;
  j["beat_frequency_rad_s"] = r.beat_frequency;
  return j.dump(2);
}

std::string to_text(const FeasibilityReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "closed-loop phase Phi0   : " << r.phi0 << " rad\n"
     << "common gain              : " << r.gain << " m^-1\n"
     << "threshold (T/2L_c)       : " << r.threshold << " m^-1\n"
     << "margin                   : " << r.margin << " m^-1\n"
     << "per-pass gain            : " << r.per_pass << "\n"
     << "max output coupling T    : " << r.max_transmittivity << "\n"
     << "cavity length            : " << r.cavity_length << " m (mode " << r.mode_index << ")\n"
     << "output coupler T         : " << r.transmittivity << "\n"
     << "phase lock               : phi24 - phi14 = " << r.required_output_phase_difference
     << " rad (mod 2pi)\n"
     << "status                   : "
     << (r.feasible ? "feasible" : "below threshold, shortfall " + std::to_string(r.shortfall) + " m^-1")
     << "\n";
  return os.str();
}

}  // namespace dlraman
