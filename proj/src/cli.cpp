#include "dlraman/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlraman/adiabatic.hpp"
#include "dlraman/cavity.hpp"
#include "dlraman/sweep.hpp"

namespace dlraman {

namespace {

using nlohmann::ordered_json;

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::string format;
  std::string engine = "exact";
  int parallel = 1;
};

Scenario load(const Common& c) {
  if (!c.config.empty() && !c.preset.empty()) {
    throw Error(ErrorCode::ConfigParse, "give either --config or --preset, not both");
  }
  if (!c.config.empty()) return load_scenario(c.config);
  if (!c.preset.empty()) return preset_scenario(c.preset);
  return default_scenario();
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty() || c.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigParse, "cannot write " + c.out);
  f << text;
}

ordered_json complex_json(cd z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json matrix_json(const CMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json r = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(complex_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

ordered_json engine_json(const ValidatedConfig& cfg, const Scenario& s, Engine e) {
  ordered_json j;
  ProbeCoherences pc{};
  if (e == Engine::Exact) {
    const DensityMatrix rho = exact_steady_state(cfg, s.decay);
    const ExactCoherences ec = exact_coherences(rho);
    pc = {ec.rho14, ec.rho24};
    j["rho14"] = complex_json(ec.rho14);
    j["rho24"] = complex_json(ec.rho24);
    j["rho13"] = complex_json(ec.rho13);
    j["rho23"] = complex_json(ec.rho23);
    j["rho12"] = complex_json(rho(0, 1));
    j["populations"] = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(3, 3).real()};
  } else {
    const EffectiveSolution sol = solve_effective(cfg);
    pc = {sol.coherences.rho14, sol.coherences.rho24};
    j["rho14"] = complex_json(sol.coherences.rho14);
    j["rho24"] = complex_json(sol.coherences.rho24);
    j["rho12"] = complex_json(sol.coherences.rho12);
    j["populations"] = {sol.coherences.rho11.real(), sol.coherences.rho22.real()};
    j["pop_D"] = sol.rho2(0, 0).real();
    j["pop_B"] = sol.rho2(1, 1).real();
    j["rho_DB"] = complex_json(sol.rho2(0, 1));
    j["L3"] = sol.model.l3;
    j["gamma_eq"] = sol.model.gamma_eq;
    j["omega_eq"] = complex_json(sol.model.omega_eq);
  }
  if (cfg.d14().rabi > 0.0 && cfg.d24().rabi > 0.0) {
    const MediumResponse r = susceptibility(cfg, pc, s.medium);
    j["xi14"] = complex_json(r.xi14);
    j["xi24"] = complex_json(r.xi24);
    j["alpha14"] = r.alpha14;
    j["alpha24"] = r.alpha24;
  }
  return j;
}

std::string point_csv(const ValidatedConfig& cfg, const Scenario& s, EngineSelection sel, const std::string& hash) {
  std::vector<std::string> outputs;
  for (const std::string& o : known_observables()) {
    if (sel != EngineSelection::Exact && (o == "pop3" || o == "pop4")) continue;
    if ((o == "alpha14" || o == "alpha24") && !(cfg.d14().rabi > 0.0 && cfg.d24().rabi > 0.0)) continue;
    outputs.push_back(o);
  }
  SweepResult r;
  r.config_hash = hash;
  r.axis_names = {"delta4", "phi0"};
  auto add_row = [&](Engine e) {
    SweepRow row{{cfg.delta4(), closed_loop_phase(cfg)}, std::string(to_string(e)), {}, {}};
    row.values = evaluate_point(cfg, s, e, outputs);
    r.rows.push_back(row);
  };
  r.columns = outputs;
  if (sel != EngineSelection::Effective) add_row(Engine::Exact);
  if (sel != EngineSelection::Exact) add_row(Engine::Effective);
  return to_csv(r);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-Lambda bi-frequency Raman laser simulator", "dlraman"};
  app.require_subcommand(1);
  app.footer("\n" + schema_help());

  Common c;
  auto add_common = [&](CLI::App* sub, bool with_engine, bool with_format) {
    sub->add_option("--config", c.config, "scenario file");
    sub->add_option("--preset", c.preset, "shipped scenario: fig2 | fig3 | fig4");
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--parallel", c.parallel, "worker threads")->check(CLI::PositiveNumber);
    if (with_engine) sub->add_option("--engine", c.engine, "exact | effective | both");
    if (with_format) sub->add_option("--format", c.format, "csv | json");
  };

  // point
  auto* point = app.add_subcommand("point", "steady state at one configuration");
  add_common(point, true, true);
  std::optional<double> p_delta4, p_phi0;
  bool dump_ops = false;
  point->add_option("--delta4", p_delta4, "override the probe common detuning");
  point->add_option("--phi0", p_phi0, "override the closed-loop phase (rad)");
  point->add_flag("--dump-operators", dump_ops, "include H and the Liouvillian (row-major [re, im])");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "1-D or 2-D parameter sweep");
  add_common(sweep, true, true);
  std::vector<std::string> axes;
  std::string outputs;
  sweep->add_option("--axis", axes, "name:lo:hi:n (repeat for a 2-D grid)");
  sweep->add_option("--outputs", outputs, "comma-separated observables");

  // lasing-search
  auto* lasing = app.add_subcommand("lasing-search", "equal-gain crossings over the closed-loop phase");
  add_common(lasing, true, true);
  std::optional<double> l_delta4, calibrate;
  int samples = 720;
  int mode_index = 1;
  double transmittivity = 0.16;
  lasing->add_option("--delta4", l_delta4, "probe common detuning (default: from the scenario)");
  lasing->add_option("--samples", samples, "phase samples on [0, 2pi)")->check(CLI::Range(4, 10000000));
  lasing->add_option("--mode-index", mode_index, "cavity mode index m")->check(CLI::PositiveNumber);
  lasing->add_option("--transmittivity", transmittivity, "output coupler T");
  lasing->add_option("--calibrate-gain", calibrate, "rescale the coupling so the best point has this gain (m^-1)");

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution of the exact master equation from |1><1|");
  add_common(evolve_cmd, false, true);
  double t_final = 100.0;
  double dt = 0.0;
  int stride = 10;
  evolve_cmd->add_option("--t-final", t_final, "final time, units of 1/Gamma3");
  evolve_cmd->add_option("--dt", dt, "step (default: largest stable step)");
  evolve_cmd->add_option("--stride", stride, "keep every n-th step")->check(CLI::PositiveNumber);

  // verify-adiabatic
  auto* verify = app.add_subcommand("verify-adiabatic", "compare excited-state coherences with adiabatic elimination");
  add_common(verify, false, false);
  double v_t_final = 20.0;
  double v_dt = 0.0;
  verify->add_option("--t-final", v_t_final, "final time, units of 1/Gamma3");
  verify->add_option("--dt", v_dt, "step (default: largest stable step)");

  // cavity
  auto* cavity = app.add_subcommand("cavity", "cavity length and threshold gain");
  add_common(cavity, false, true);
  int c_mode = 1;
  double c_t = 0.16;
  std::optional<double> c_split_hz;
  cavity->add_option("--mode-index", c_mode, "cavity mode index m")->check(CLI::PositiveNumber);
  cavity->add_option("--transmittivity", c_t, "output coupler T");
  cavity->add_option("--splitting-hz", c_split_hz, "ground splitting / 2pi (default: from the scenario)");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const Scenario s = load(c);
    const std::string hash = fnv1a_hex(serialize(s));

    if (point->parsed()) {
      ValidatedConfig cfg = s.config;
      if (p_delta4) cfg = with_probe_detuning(cfg, *p_delta4);
      if (p_phi0) cfg = with_closed_loop_phase(cfg, *p_phi0);
      const EngineSelection sel = parse_engine(c.engine);
      if (c.format == "csv") {
        emit(c, point_csv(cfg, s, sel, hash), out);
        return 0;
      }
      if (!c.format.empty() && c.format != "json") throw Error(ErrorCode::ConfigParse, "--format must be csv or json");
      ordered_json j;
      j["config_hash"] = hash;
      j["delta4"] = cfg.delta4();
      j["phi0"] = closed_loop_phase(cfg);
      j["probe_perturbative"] = cfg.probe_perturbative();
      if (sel != EngineSelection::Effective) j["exact"] = engine_json(cfg, s, Engine::Exact);
      if (sel != EngineSelection::Exact) j["effective"] = engine_json(cfg, s, Engine::Effective);
      if (dump_ops) {
        const Liouvillian l = build_liouvillian(cfg, s.decay);
        j["hamiltonian"] = matrix_json(l.hamiltonian);
        j["liouvillian"] = matrix_json(l.matrix);
      }
      emit(c, j.dump(2) + "\n", out);
      return 0;
    }

    if (sweep->parsed()) {
      SweepSpec spec;
      if (!c.preset.empty()) spec = preset_sweep(c.preset);
      if (!axes.empty()) {
        if (axes.size() > 2) throw Error(ErrorCode::InvalidSweep, "at most two --axis options");
        spec.axis1 = parse_axis(axes[0]);
        spec.axis2.reset();
        if (axes.size() == 2) spec.axis2 = parse_axis(axes[1]);
      } else if (c.preset.empty()) {
        throw Error(ErrorCode::InvalidSweep, "sweep needs --axis or --preset");
      }
      if (sweep->count("--engine") > 0) spec.engine = parse_engine(c.engine);
      if (!outputs.empty()) {
        spec.outputs.clear();
        std::stringstream ss(outputs);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (!item.empty()) spec.outputs.push_back(item);
        }
      }
      const SweepResult r = run_sweep(spec, s, c.parallel);
      if (c.format == "json") {
        emit(c, to_json(r) + "\n", out);
      } else if (c.format.empty() || c.format == "csv") {
        emit(c, to_csv(r), out);
      } else {
        throw Error(ErrorCode::ConfigParse, "--format must be csv or json");
      }
      return 0;
    }

    if (lasing->parsed()) {
      EqualGainOptions opts;
      opts.samples = samples;
      opts.parallel = c.parallel;
      opts.decay = s.decay;
      const EngineSelection sel = parse_engine(c.engine);
      if (sel == EngineSelection::Both) throw Error(ErrorCode::InvalidSweep, "lasing-search takes one engine");
      opts.engine = sel == EngineSelection::Exact ? Engine::Exact : Engine::Effective;
      const CavitySpec spec = make_cavity(s.config.levels().ground_splitting(), mode_index, transmittivity);
      opts.cavity = spec;
      const double delta4 = l_delta4.value_or(s.config.delta4());
      MediumParams medium = s.medium;
      if (calibrate) medium = calibrate_medium(s.config, delta4, medium, *calibrate, opts);
      const EqualGainSearch search = find_equal_gain_points(s.config, delta4, medium, opts);
      const std::optional<LasingPoint> best = best_gain_point(search);

      ordered_json j;
      j["config_hash"] = hash;
      j["delta4"] = delta4;
      j["engine"] = to_string(opts.engine);
      j["samples"] = samples;
      j["calibration"] = medium.calibration;
      ordered_json pts = ordered_json::array();
      for (std::size_t i = 0; i < search.points.size(); ++i) {
        const LasingPoint& p = search.points[i];
        ordered_json jp;
        jp["index"] = i + 1;
        jp["phi0"] = p.phi0;
        jp["alpha14"] = p.alpha14;
        jp["alpha24"] = p.alpha24;
        jp["gain"] = p.gain;
        jp["both_gain"] = p.alpha14 > 0.0 && p.alpha24 > 0.0;
        pts.push_back(jp);
      }
      j["crossings"] = pts;
      ordered_json tps = ordered_json::array();
      for (const LasingPoint& p : search.transparency_points) tps.push_back(p.phi0);
      j["transparency_points"] = tps;
      if (best) {
        const FeasibilityReport rep = lasing_feasibility(*best, spec);
        j["best"] = ordered_json::parse(to_json_string(rep));
        if (c.format == "text") {
          std::ostringstream os;
          os << search.points.size() << " equal-gain crossing(s) at delta4 = " << delta4 << "\n";
          for (const LasingPoint& p : search.points) {
            os << "  Phi0 = " << p.phi0 << "  alpha14 = " << p.alpha14 << "  alpha24 = " << p.alpha24 << "\n";
          }
          os << to_text(rep);
          emit(c, os.str(), out);
          return 0;
        }
      } else {
        j["best"] = nullptr;
      }
      emit(c, j.dump(2) + "\n", out);
      return 0;
    }

    if (evolve_cmd->parsed()) {
      const Liouvillian l = build_liouvillian(s.config, s.decay);
      const double step = dt > 0.0 ? dt : max_stable_step(l);
      EvolveOptions eo;
      eo.sample_stride = stride;
      const Trajectory tr = evolve(l, DensityMatrix::basis_state(4, 0), t_final, step, eo);
      if (c.format == "json") {
        ordered_json j;
        j["config_hash"] = hash;
        j["dt"] = step;
        j["times"] = tr.times;
        ordered_json states = ordered_json::array();
        for (const DensityMatrix& r : tr.states) states.push_back(matrix_json(r.matrix()));
        j["states"] = states;
        emit(c, j.dump(1) + "\n", out);
      } else {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "# config-hash=" << hash << "\n";
        os << "t,pop1,pop2,pop3,pop4,rho12_re,rho12_im,rho14_re,rho14_im,rho24_re,rho24_im\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
          const DensityMatrix& r = tr.states[i];
          os << tr.times[i];
          for (int k = 0; k < 4; ++k) os << "," << r(k, k).real();
          for (cd z : {r(0, 1), r(0, 3), r(1, 3)}) os << "," << z.real() << "," << z.imag();
          os << "\n";
        }
        emit(c, os.str(), out);
      }
      return 0;
    }

    if (verify->parsed()) {
      AdiabaticityOptions ao;
      ao.dt = v_dt;
      const AdiabaticityReport r = verify_adiabaticity(s.config, v_t_final, ao, s.decay);
      emit(c, to_json_string(r) + "\n", out);
      return 0;
    }

    if (cavity->parsed()) {
      const double split = c_split_hz ? kTwoPi * *c_split_hz : s.config.levels().ground_splitting();
      const CavitySpec spec = make_cavity(split, c_mode, c_t);
      const Threshold th = threshold_gain(spec);
      ordered_json j;
      j["splitting_rad_s"] = split;
      j["mode_index"] = c_mode;
      j["cavity_length_m"] = spec.length();
      j["transmittivity"] = c_t;
      j["threshold_m^-1"] = th.alpha;
      j["threshold_per_pass"] = th.per_pass;
      emit(c, j.dump(2) + "\n", out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (is_config_error(e.code())) {
      if (e.code() == ErrorCode::ConfigParse) err << "\n" << schema_help();
      return 1;
    }
    return 2;
  }
  return 1;
}

}  // namespace dlraman
