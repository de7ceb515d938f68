#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dlraman/medium.hpp"

// Flat `key = value` scenario files. '#' starts a comment; blank lines are
// ignored; unknown keys are an error. Rates, Rabi frequencies and detunings
// are in units of `gamma3` (default 1, i.e. already in units of Gamma3);
// keys suffixed _hz or _si are absolute. Schema: see schema_help().

namespace dlraman {

struct Scenario {
  ValidatedConfig config;
  DecayModel decay;
  MediumParams medium;
};

/// Throws Error{ConfigParse} on syntax errors / unknown keys, and the
/// validate_config errors on physically inconsistent values.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form (every key, fixed order, 17 significant digits).
/// parse_scenario(serialize(s)) reproduces s exactly.
std::string serialize(const Scenario& s);

/// Default scenario: the bi-lasing parameter set with Phi0 = 0, delta4 = 20.
Scenario default_scenario();

std::string schema_help();

/// Scenario text of the shipped presets fig2, fig3, fig4 (identical to
/// presets/<name>.cfg). Throws Error{ConfigParse} for other names.
std::string preset_text(std::string_view name);
Scenario preset_scenario(std::string_view name);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace dlraman
