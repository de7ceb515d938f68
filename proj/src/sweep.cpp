#include "dlraman/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "dlraman/parallel.hpp"

namespace dlraman {

namespace {

const std::vector<std::string> kAxisNames{"delta4", "phi0",    "delta3",  "omega3",  "omega4",     "omega13",
                                          "omega23", "omega14", "omega24", "gamma4", "two_photon", "ground_decoherence"};

const std::vector<std::string> kExactOnly{"pop3", "pop4"};

[[noreturn]] void sweep_error(const std::string& msg) { throw Error(ErrorCode::InvalidSweep, msg); }

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

double strict_number(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    sweep_error("not a number: '" + s + "'");
  }
  if (used != s.size()) sweep_error("not a number: '" + s + "'");
  return x;
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Rescales a pair of Rabi frequencies to a new quadrature sum, keeping their
// ratio (equal split when both are zero).
void set_pair(DriveField& a, DriveField& b, double total) {
  if (total < 0.0) throw Error(ErrorCode::NegativeRate, "Rabi frequency must be >= 0");
  const double norm = std::hypot(a.rabi, b.rabi);
  if (norm > 0.0) {
    a.rabi *= total / norm;
    b.rabi *= total / norm;
  } else {
    a.rabi = b.rabi = total / std::numbers::sqrt2;
  }
}

cd rotate_to_db(const CMatrix& ground, const Matrix2c& t, int x, int y) {
  // <X|rho|Y> with real transform rows <X|g>
  cd s = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) s += t(x, i) * ground(i, j) * t(y, j);
  }
  return s;
}

}  // namespace

double SweepAxis::value(int i) const {
  if (points <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

double parse_angle_or_number(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  const auto p = s.find("pi");
  if (p == std::string::npos) return strict_number(s);
  std::string head = s.substr(0, p);
  std::string tail = s.substr(p + 2);
  double k = 1.0;
  if (head == "-") {
    k = -1.0;
  } else if (head == "+") {
    k = 1.0;
  } else if (!head.empty()) {
    if (head.back() == '*') head.pop_back();
    k = strict_number(head);
  }
  double d = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') sweep_error("bad angle '" + std::string(text) + "'");
    d = strict_number(tail.substr(1));
    if (d == 0.0) sweep_error("division by zero in '" + std::string(text) + "'");
  }
  return k * std::numbers::pi / d;
}

SweepAxis parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) sweep_error("axis must be name:lo:hi:n, got '" + std::string(text) + "'");
  SweepAxis a;
  a.name = parts[0];
  a.lo = parse_angle_or_number(parts[1]);
  a.hi = parse_angle_or_number(parts[2]);
  const double n = strict_number(parts[3]);
  if (n != std::floor(n) || n < 1 || n > 1e7) sweep_error("bad point count '" + parts[3] + "'");
  a.points = static_cast<int>(n);
  return a;
}

EngineSelection parse_engine(std::string_view text) {
  if (text == "exact") return EngineSelection::Exact;
  if (text == "effective") return EngineSelection::Effective;
  if (text == "both") return EngineSelection::Both;
  sweep_error("engine must be exact, effective or both");
}

std::string_view to_string(EngineSelection e) {
  switch (e) {
    case EngineSelection::Exact: return "exact";
    case EngineSelection::Effective: return "effective";
    case EngineSelection::Both: return "both";
  }
  return "?";
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names{"rho14_re", "rho14_im", "rho24_re", "rho24_im", "alpha14",
                                              "alpha24",  "pop_D",    "pop_B",    "pop1",     "pop2",
                                              "pop3",     "pop4",     "rho12_re", "rho12_im"};
  return names;
}

void validate_sweep(const SweepSpec& spec) {
  auto check_axis = [](const SweepAxis& a) {
    if (!contains(kAxisNames, a.name)) sweep_error("unknown axis '" + a.name + "'");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) sweep_error("axis '" + a.name + "' range not finite");
    if (a.points < 2 && !(a.points == 1 && a.lo == a.hi)) {
      sweep_error("axis '" + a.name + "' needs >= 2 points (1 only when lo == hi)");
    }
  };
  check_axis(spec.axis1);
  if (spec.axis2) {
    check_axis(*spec.axis2);
    if (spec.axis2->name == spec.axis1.name) sweep_error("both axes are '" + spec.axis1.name + "'");
  }
  if (spec.outputs.empty()) sweep_error("no outputs requested");
  for (const std::string& o : spec.outputs) {
    if (!contains(known_observables(), o)) sweep_error("unknown observable '" + o + "'");
    if (spec.engine != EngineSelection::Exact && contains(kExactOnly, o)) {
      sweep_error("observable '" + o + "' is only available from the exact engine");
    }
  }
}

ValidatedConfig apply_axis(const ValidatedConfig& cfg, std::string_view name, double value) {
  if (name == "delta4") return with_probe_detuning(cfg, value);
  if (name == "delta3") return with_pump_detuning(cfg, value);
  if (name == "phi0") return with_closed_loop_phase(cfg, value);
  DoubleLambdaConfig raw = cfg.raw();
  if (name == "omega3") {
    set_pair(raw.d13, raw.d23, value);
  } else if (name == "omega4") {
    set_pair(raw.d14, raw.d24, value);
  } else if (name == "omega13") {
    raw.d13.rabi = value;
  } else if (name == "omega23") {
    raw.d23.rabi = value;
  } else if (name == "omega14") {
    raw.d14.rabi = value;
  } else if (name == "omega24") {
    raw.d24.rabi = value;
  } else if (name == "gamma4") {
    raw.levels.gamma4 = value;
  } else if (name == "ground_decoherence") {
    raw.ground_decoherence = value;
  } else if (name == "two_photon") {
    raw.d13.detuning = cfg.delta3() + 0.5 * value;
    raw.d23.detuning = cfg.delta3() - 0.5 * value;
    raw.d14.detuning = cfg.delta4() + 0.5 * value;
    raw.d24.detuning = cfg.delta4() - 0.5 * value;
  } else {
    sweep_error("unknown axis '" + std::string(name) + "'");
  }
  return validate_config(raw);
}

std::vector<double> evaluate_point(const ValidatedConfig& cfg, const Scenario& scenario, Engine engine,
                                   const std::vector<std::string>& outputs) {
  ProbeCoherences pc{};
  cd rho12 = 0.0;
  double pop[4] = {0, 0, 0, 0};
  double pop_d = NAN, pop_b = NAN;
  const bool need_db = contains(outputs, "pop_D") || contains(outputs, "pop_B");

  if (engine == Engine::Exact) {
    const DensityMatrix rho = exact_steady_state(cfg, scenario.decay);
    const ExactCoherences ec = exact_coherences(rho);
    pc = {ec.rho14, ec.rho24};
    rho12 = rho(0, 1);
    for (int k = 0; k < 4; ++k) pop[k] = rho(k, k).real();
    if (need_db) {
      const DarkBrightBasis b = dark_bright(cfg);
      const CMatrix g = rho.matrix().topLeftCorner(2, 2);
      pop_d = rotate_to_db(g, b.transform, 0, 0).real();
      pop_b = rotate_to_db(g, b.transform, 1, 1).real();
    }
  } else {
    const EffectiveSolution sol = solve_effective(cfg);
    pc = {sol.coherences.rho14, sol.coherences.rho24};
    rho12 = sol.coherences.rho12;
    pop[0] = sol.coherences.rho11.real();
    pop[1] = sol.coherences.rho22.real();
    pop[2] = pop[3] = NAN;
    pop_d = sol.rho2(0, 0).real();
    pop_b = sol.rho2(1, 1).real();
  }

  std::optional<MediumResponse> resp;
  if (contains(outputs, "alpha14") || contains(outputs, "alpha24")) {
    resp = susceptibility(cfg, pc, scenario.medium);
  }

  std::vector<double> v;
  v.reserve(outputs.size());
  for (const std::string& o : outputs) {
    if (o == "rho14_re") v.push_back(pc.rho14.real());
    else if (o == "rho14_im") v.push_back(pc.rho14.imag());
    else if (o == "rho24_re") v.push_back(pc.rho24.real());
    else if (o == "rho24_im") v.push_back(pc.rho24.imag());
    else if (o == "alpha14") v.push_back(resp->alpha14);
    else if (o == "alpha24") v.push_back(resp->alpha24);
    else if (o == "pop_D") v.push_back(pop_d);
    else if (o == "pop_B") v.push_back(pop_b);
    else if (o == "pop1") v.push_back(pop[0]);
    else if (o == "pop2") v.push_back(pop[1]);
    else if (o == "pop3") v.push_back(pop[2]);
    else if (o == "pop4") v.push_back(pop[3]);
    else if (o == "rho12_re") v.push_back(rho12.real());
    else if (o == "rho12_im") v.push_back(rho12.imag());
    else sweep_error("unknown observable '" + o + "'");
  }
  return v;
}

SweepResult run_sweep(const SweepSpec& spec, const Scenario& scenario, int parallel) {
  validate_sweep(spec);
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult out;
  out.config_text = serialize(scenario);
  out.config_hash = fnv1a_hex(out.config_text);
  out.axis_names.push_back(spec.axis1.name);
  if (spec.axis2) out.axis_names.push_back(spec.axis2->name);

  const bool both = spec.engine == EngineSelection::Both;
  if (both) {
    for (const char* prefix : {"exact_", "effective_", "dev_"}) {
      for (const std::string& o : spec.outputs) out.columns.push_back(prefix + o);
    }
  } else {
    out.columns = spec.outputs;
  }

  const int n1 = spec.axis1.points;
  const int n2 = spec.axis2 ? spec.axis2->points : 1;
  const std::size_t total = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  out.rows.resize(total);

  parallel_for(total, parallel, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / n2);
    const int j = static_cast<int>(idx % n2);
    SweepRow& row = out.rows[idx];
    row.engine = std::string(to_string(spec.engine));
    row.coords.push_back(spec.axis1.value(i));
    if (spec.axis2) row.coords.push_back(spec.axis2->value(j));
    row.values.assign(out.columns.size(), NAN);
    try {
      ValidatedConfig cfg = apply_axis(scenario.config, spec.axis1.name, row.coords[0]);
      if (spec.axis2) cfg = apply_axis(cfg, spec.axis2->name, row.coords[1]);
      if (both) {
        const std::size_t k = spec.outputs.size();
        std::vector<double> ex, ef;
        std::string err;
        try {
          ex = evaluate_point(cfg, scenario, Engine::Exact, spec.outputs);
          std::copy(ex.begin(), ex.end(), row.values.begin());
        } catch (const Error& e) {
          err = std::string("exact: ") + e.what();
        }
        try {
          ef = evaluate_point(cfg, scenario, Engine::Effective, spec.outputs);
          std::copy(ef.begin(), ef.end(), row.values.begin() + static_cast<long>(k));
        } catch (const Error& e) {
          if (!err.empty()) err += "; ";
          err += std::string("effective: ") + e.what();
        }
        if (!ex.empty() && !ef.empty()) {
          for (std::size_t c = 0; c < k; ++c) row.values[2 * k + c] = std::abs(ex[c] - ef[c]);
        }
        row.error = err;
      } else {
        const Engine e = spec.engine == EngineSelection::Exact ? Engine::Exact : Engine::Effective;
        row.values = evaluate_point(cfg, scenario, e, spec.outputs);
      }
    } catch (const Error& e) {
      row.values.assign(out.columns.size(), NAN);
      row.error = e.what();
    }
  });

  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string to_csv(const SweepResult& r) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "# config-hash=" << r.config_hash << "\n";
  for (const std::string& a : r.axis_names) os << a << ",";
  os << "engine";
  for (const std::string& c : r.columns) os << "," << c;
  os << ",error\n";
  for (const SweepRow& row : r.rows) {
    for (double x : row.coords) os << fmt17(x) << ",";
    os << row.engine;
    for (double x : row.values) os << "," << fmt17(x);
    os << "," << quote(row.error) << "\n";
  }
  return os.str();
}

std::string to_json(const SweepResult& r) {
  using nlohmann::ordered_json;
  auto num = [](double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(x); };
  ordered_json j;
  j["config_hash"] = r.config_hash;
  j["config"] = r.config_text;
  j["engine_version"] = "dlraman 0.1.0";
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["axes"] = r.axis_names;
  j["columns"] = r.columns;
  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : r.rows) {
    ordered_json jr;
    jr["coords"] = row.coords;
    jr["engine"] = row.engine;
    ordered_json vals = ordered_json::array();
    for (double x : row.values) vals.push_back(num(x));
    jr["values"] = vals;
    jr["error"] = row.error.empty() ? ordered_json(nullptr) : ordered_json(row.error);
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j.dump(1);
}

SweepSpec preset_sweep(std::string_view name) {
  SweepSpec s;
  if (name == "fig2") {
    s.axis1 = {"delta4", -50.0, 50.0, 501};
    s.axis2 = SweepAxis{"phi0", 0.0, std::numbers::pi / 4.0, 2};
    s.engine = EngineSelection::Both;
    s.outputs = {"rho14_re", "rho14_im", "rho24_re", "rho24_im"};
  } else if (name == "fig3") {
    s.axis1 = {"delta4", -50.0, 50.0, 201};
    s.axis2 = SweepAxis{"phi0", 0.0, kTwoPi, 181};
    s.engine = EngineSelection::Exact;
    s.outputs = {"alpha14", "alpha24"};
  } else if (name == "fig4") {
    s.axis1 = {"phi0", 0.0, kTwoPi, 721};
    s.engine = EngineSelection::Exact;
    s.outputs = {"alpha14", "alpha24"};
  } else {
    sweep_error("unknown preset '" + std::string(name) + "' (fig2, fig3, fig4)");
  }
  return s;
}

}  // namespace dlraman
