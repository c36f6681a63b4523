#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rungscope/params.hpp"
#include "rungscope/simulation.hpp"
#include "rungscope/spectra.hpp"

namespace rungscope {

enum class SweepKind { none, pump_frequency, pump_intensity, dephasing };
enum class Spacing { linear, log };

std::string to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view text);

/// Scenario plus optional per-field overrides of the preset.
struct SystemOverrides {
  std::optional<double> g;
  std::optional<double> omega_c_eV;
  std::optional<double> Q;
  std::optional<double> gamma_cav;
  std::optional<double> gamma_P;
  std::optional<double> delta;
  std::optional<double> n_dot;
  std::optional<double> S;
  std::optional<int> N_dot;
  std::optional<double> d;

  bool operator==(const SystemOverrides&) const = default;
};

struct SweepSpec {
  SweepKind kind = SweepKind::none;
  double from = 0.0;
  double to = 0.0;
  int count = 0;
  Spacing spacing = Spacing::linear;

  bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  IntensityMode intensity_mode = IntensityMode::incoherent;
  double g2_floor = kDefaultG2Floor;
  /// Peak-list threshold as a fraction of the spectrum maximum. The upper
  /// second-rung line of a narrow cavity sits near 1e-4 of the maximum.
  double peak_prominence = 1e-5;
  bool svg = false;
  bool trajectory = true;

  bool operator==(const OutputSpec&) const = default;
};

struct OracleSpec {
  int n_max = 8;
  /// Rabi periods pi / g covered by the equivalence check.
  double periods = 3.0;

  bool operator==(const OracleSpec&) const = default;
};

/// Everything one CLI invocation needs. No field is random; equal RunSpecs
/// give identical output bytes.
struct RunSpec {
  std::string scenario = "disk";
  FrequencyConvention convention = FrequencyConvention::ordinary;
  SystemOverrides system;
  SetupKnobs knobs;
  SweepSpec sweep;
  OutputSpec output;
  OracleSpec oracle;

  bool operator==(const RunSpec&) const = default;
};

/// Known keys with the section each belongs to, in rendering order.
struct KeyInfo {
  std::string_view key;
  std::string_view section;
  std::string_view help;
};
const std::vector<KeyInfo>& config_keys();

/// Applies one `key = value` setting. Throws ConfigError for an unknown key
/// or a malformed value (the message names the key).
void apply_setting(RunSpec& spec, std::string_view key, std::string_view value);

/// Parses `key = value` lines, optional `[section]` headers and `#`
/// comments. Keys may appear at top level or under their own section.
/// Throws ParseError (with line) on syntax and value errors. No validation.
RunSpec parse_document(std::string_view text);

/// parse_document followed by validate: throws ConfigError naming
/// `section.key` when the resolved configuration is invalid.
RunSpec parse_config(std::string_view text);

/// Checks every referenced field before any computation; throws ConfigError.
void validate(const RunSpec& spec);

/// Canonical document; parse_config(render(spec)) == spec.
std::string render(const RunSpec& spec);

/// Preset plus overrides. A Q override rederives gamma_cav and a gamma_cav
/// override rederives Q; the dot count follows n_dot and S unless given.
SystemParams resolve_params(const RunSpec& spec);

}  // namespace rungscope
