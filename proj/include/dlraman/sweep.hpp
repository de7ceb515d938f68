#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlraman/config_file.hpp"

namespace dlraman {

struct SweepAxis {
  std::string name;  // delta4 | phi0 | delta3 | omega3 | omega4 | omega13 | ... | gamma4 | two_photon | ground_decoherence
  double lo = 0.0;
  double hi = 0.0;
  int points = 2;

  double value(int i) const;
};

/// "name:lo:hi:n". lo/hi accept plain numbers and multiples of pi
/// ("pi", "2pi", "-pi/2", "1.5pi"). Throws Error{InvalidSweep}.
SweepAxis parse_axis(std::string_view text);
double parse_angle_or_number(std::string_view text);

enum class EngineSelection { Exact, Effective, Both };
EngineSelection parse_engine(std::string_view text);
std::string_view to_string(EngineSelection e);

/// Observables a sweep can emit, in canonical order.
const std::vector<std::string>& known_observables();

struct SweepSpec {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  EngineSelection engine = EngineSelection::Exact;
  std::vector<std::string> outputs{"rho14_re", "rho14_im", "rho24_re", "rho24_im"};
};

/// Throws Error{InvalidSweep} for unknown axes/observables, non-finite
/// ranges, fewer than 2 points (1 point is allowed only when lo == hi), or
/// exact-only observables requested from the effective engine.
void validate_sweep(const SweepSpec& spec);

/// Applies one axis value to a configuration.
ValidatedConfig apply_axis(const ValidatedConfig& cfg, std::string_view name, double value);

struct SweepRow {
  std::vector<double> coords;  // one per axis
  std::string engine;          // tag of the engine(s) that produced the row
  std::vector<double> values;  // one per column in SweepResult::columns
  std::string error;           // empty on success
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;  // row-major, axis2 varies fastest
  std::string config_hash;
  std::string config_text;
  double elapsed_seconds = 0.0;
};

/// Per-engine observable values at one configuration. Throws on solver errors.
std::vector<double> evaluate_point(const ValidatedConfig& cfg, const Scenario& scenario, Engine engine,
                                   const std::vector<std::string>& outputs);

/// Never throws for per-point failures; they land in SweepRow::error.
SweepResult run_sweep(const SweepSpec& spec, const Scenario& scenario, int parallel = 1);

/// Deterministic CSV: "# config-hash=<hex>", header, rows at 17 significant digits.
std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

/// Named default grids: fig2, fig3, fig4.
SweepSpec preset_sweep(std::string_view name);

}  // namespace dlraman
