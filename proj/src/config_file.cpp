#include "dlraman/config_file.hpp"
#include "dlraman/presets_data.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace dlraman {

namespace {

// Raw scenario values before normalization.
struct Fields {
  double gamma3 = 1.0;
  double gamma3_hz = 5.7500e6;
  double gamma4 = 1.05;
  double ground_splitting_hz = 6.834682610904290e9;
  double transition13_hz = 377.107463380e12;
  double transition14_hz = 384.2304844685e12;
  double omega_rabi[4] = {0, 0, 0, 0};  // 13, 23, 14, 24
  double delta[4] = {0, 0, 0, 0};
  double phi0[4] = {0, 0, 0, 0};
  double k_si[4] = {NAN, NAN, NAN, NAN};
  double ground_decoherence = 0.0;
  double branch3 = 0.5;
  double branch4 = 0.5;
  double density_m3 = 1e15;
  double dipole14_si = kRb87D2Dipole;
  double dipole24_si = kRb87D2Dipole;
  double calibration = 1.0;
  std::string probe_phase_factor = "conjugate";
};

constexpr const char* kLegs[4] = {"13", "23", "14", "24"};

struct Key {
  std::string name;
  std::function<double&(Fields&)> num;
};

std::vector<Key> numeric_keys() {
  std::vector<Key> keys{
      {"gamma3", [](Fields& f) -> double& { return f.gamma3; }},
      {"gamma3_hz", [](Fields& f) -> double& { return f.gamma3_hz; }},
      {"gamma4", [](Fields& f) -> double& { return f.gamma4; }},
      {"ground_splitting_hz", [](Fields& f) -> double& { return f.ground_splitting_hz; }},
      {"transition13_hz", [](Fields& f) -> double& { return f.transition13_hz; }},
      {"transition14_hz", [](Fields& f) -> double& { return f.transition14_hz; }},
  };
  for (int l = 0; l < 4; ++l) {
    keys.push_back({std::string("omega") + kLegs[l] + "_rabi", [l](Fields& f) -> double& { return f.omega_rabi[l]; }});
    keys.push_back({std::string("delta") + kLegs[l], [l](Fields& f) -> double& { return f.delta[l]; }});
    keys.push_back({std::string("phi0_") + kLegs[l], [l](Fields& f) -> double& { return f.phi0[l]; }});
    keys.push_back({std::string("k") + kLegs[l] + "_si", [l](Fields& f) -> double& { return f.k_si[l]; }});
  }
  keys.push_back({"ground_decoherence", [](Fields& f) -> double& { return f.ground_decoherence; }});
  keys.push_back({"branch3", [](Fields& f) -> double& { return f.branch3; }});
  keys.push_back({"branch4", [](Fields& f) -> double& { return f.branch4; }});
  keys.push_back({"density_m3", [](Fields& f) -> double& { return f.density_m3; }});
  keys.push_back({"dipole14_si", [](Fields& f) -> double& { return f.dipole14_si; }});
  keys.push_back({"dipole24_si", [](Fields& f) -> double& { return f.dipole24_si; }});
  keys.push_back({"calibration", [](Fields& f) -> double& { return f.calibration; }});
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_error(int line, const std::string& msg) {
  throw Error(ErrorCode::ConfigParse, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& v, int line) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    parse_error(line, "not a number: '" + v + "'");
  }
  if (used != v.size()) parse_error(line, "trailing characters in '" + v + "'");
  return x;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Scenario build(const Fields& f) {
  if (!(f.gamma3 > 0.0)) throw Error(ErrorCode::NegativeRate, "gamma3 must be > 0");
  if (!(f.branch3 >= 0.0 && f.branch3 <= 1.0 && f.branch4 >= 0.0 && f.branch4 <= 1.0)) {
    throw Error(ErrorCode::NegativeRate, "branching ratios must lie in [0, 1]");
  }
  const double u = 1.0 / f.gamma3;
  DoubleLambdaConfig raw;
  raw.levels.omega1 = 0.0;
  raw.levels.omega2 = kTwoPi * f.ground_splitting_hz;
  raw.levels.omega3 = kTwoPi * f.transition13_hz;
  raw.levels.omega4 = kTwoPi * f.transition14_hz;
  raw.levels.gamma3_si = kTwoPi * f.gamma3_hz;
  raw.levels.gamma4 = f.gamma4 * u;
  DriveField* legs[4] = {&raw.d13, &raw.d23, &raw.d14, &raw.d24};
  for (int l = 0; l < 4; ++l) {
    legs[l]->rabi = f.omega_rabi[l] * u;
    legs[l]->detuning = f.delta[l] * u;
    legs[l]->phase0 = f.phi0[l];
    if (!std::isnan(f.k_si[l])) legs[l]->wavevector = f.k_si[l];
  }
  raw.ground_decoherence = f.ground_decoherence * u;

  MediumParams m;
  m.density = f.density_m3;
  m.dipole14 = f.dipole14_si;
  m.dipole24 = f.dipole24_si;
  m.calibration = f.calibration;
  if (f.probe_phase_factor == "conjugate") {
    m.phase_factor = ProbePhaseFactor::Conjugate;
  } else if (f.probe_phase_factor == "direct") {
    m.phase_factor = ProbePhaseFactor::Direct;
  } else {
    throw Error(ErrorCode::ConfigParse, "probe_phase_factor must be 'conjugate' or 'direct'");
  }
  validate_medium(m);
  return Scenario{validate_config(raw), DecayModel{f.branch3, f.branch4}, m};
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Fields f;
  const std::vector<Key> keys = numeric_keys();
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    std::string l = raw_line.substr(0, raw_line.find('#'));
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos) parse_error(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const std::string value = trim(std::string_view(l).substr(eq + 1));
    if (key.empty() || value.empty()) parse_error(line, "empty key or value");
    if (seen.count(key)) parse_error(line, "duplicate key '" + key + "'");
    seen[key] = line;
    if (key == "probe_phase_factor") {
      f.probe_phase_factor = value;
      continue;
    }
    bool found = false;
    for (const Key& k : keys) {
      if (k.name == key) {
        k.num(f) = parse_number(value, line);
        found = true;
        break;
      }
    }
    if (!found) parse_error(line, "unknown key '" + key + "'");
  }
  return build(f);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize(const Scenario& s) {
  const ValidatedConfig& c = s.config;
  const AtomLevels& lv = c.levels();
  std::ostringstream os;
  auto kv = [&](const std::string& k, double v) { os << k << " = " << fmt17(v) << "\n"; };
  kv("gamma3", 1.0);
  kv("gamma3_hz", lv.gamma3_si / kTwoPi);
  kv("gamma4", lv.gamma4);
  kv("ground_splitting_hz", (lv.omega2 - lv.omega1) / kTwoPi);
  kv("transition13_hz", (lv.omega3 - lv.omega1) / kTwoPi);
  kv("transition14_hz", (lv.omega4 - lv.omega1) / kTwoPi);
  const DriveField* legs[4] = {&c.d13(), &c.d23(), &c.d14(), &c.d24()};
  for (int l = 0; l < 4; ++l) kv(std::string("omega") + kLegs[l] + "_rabi", legs[l]->rabi);
  for (int l = 0; l < 4; ++l) kv(std::string("delta") + kLegs[l], legs[l]->detuning);
  for (int l = 0; l < 4; ++l) kv(std::string("phi0_") + kLegs[l], legs[l]->phase0);
  for (int l = 0; l < 4; ++l) {
    if (legs[l]->wavevector) kv(std::string("k") + kLegs[l] + "_si", *legs[l]->wavevector);
  }
  kv("ground_decoherence", c.ground_decoherence());
  kv("branch3", s.decay.branch3);
  kv("branch4", s.decay.branch4);
  kv("density_m3", s.medium.density);
  kv("dipole14_si", s.medium.dipole14);
  kv("dipole24_si", s.medium.dipole24);
  kv("calibration", s.medium.calibration);
  os << "probe_phase_factor = "
     << (s.medium.phase_factor == ProbePhaseFactor::Conjugate ? "conjugate" : "direct") << "\n";
  return os.str();
}

Scenario default_scenario() { return Scenario{fig4_config(20.0, 0.0), DecayModel{}, MediumParams{}}; }

std::string schema_help() {
  return R"(Scenario file: one `key = value` per line, '#' comments.
Rates, Rabi frequencies and detunings are in units of `gamma3` (default 1,
meaning units of the |3> decay rate). Keys ending in _hz / _si are absolute.

  gamma3               unit of the rate keys (default 1)
  gamma3_hz            Gamma3 / 2pi in Hz (default 5.75e6)
  gamma4               |4> decay rate (default 1.05)
  ground_splitting_hz  (E2 - E1) / h (default 6.83468261090429e9)
  transition13_hz      |1>-|3> atomic frequency (default 377.10746338e12)
  transition14_hz      |1>-|4> atomic frequency (default 384.2304844685e12)
  omegaMN_rabi         Rabi frequency of leg MN in {13, 23, 14, 24}
  deltaMN              detuning (laser - atom) of leg MN
  phi0_MN              constant phase of leg MN (rad)
  kMN_si               optional wavevector of leg MN (rad/m)
  ground_decoherence   |1>-|2> coherence decay rate (default 0)
  branch3, branch4     fraction of |3>, |4> decay into |1> (default 0.5)
  density_m3           atomic density N (default 1e15)
  dipole14_si          |M14| in C m (default 3.584e-29)
  dipole24_si          |M24| in C m (default 3.584e-29)
  calibration          common multiplier on both coupling prefactors (default 1)
  probe_phase_factor   conjugate | direct: phase on rho24 in xi24 (default conjugate)

delta13 - delta23 must equal delta14 - delta24.
)";
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string preset_text(std::string_view name) {
  if (name == "fig2") return presets::kFig2;
  if (name == "fig3") return presets::kFig3;
  if (name == "fig4") return presets::kFig4;
  throw Error(ErrorCode::ConfigParse, "unknown preset '" + std::string(name) + "' (fig2, fig3, fig4)");
}

Scenario preset_scenario(std::string_view name) { return parse_scenario(preset_text(name)); }

}  // namespace dlraman
