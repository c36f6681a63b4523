#include "rungscope/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/errors.hpp"
#include "rungscope/jc_analytics.hpp"

namespace rungscope {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" +
                      std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" +
                    std::string(text) + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

const KeyInfo* find_key(std::string_view key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

[[noreturn]] void fail(std::string_view path, const std::string& message) {
  throw ConfigError(std::string(path) + ": " + message);
}

void require(bool ok, std::string_view path, const std::string& message) {
  if (!ok) fail(path, message);
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::none: return "none";
    case SweepKind::pump_frequency: return "pump_frequency";
    case SweepKind::pump_intensity: return "pump_intensity";
    case SweepKind::dephasing: return "dephasing";
  }
  return "none";
}

SweepKind parse_sweep_kind(std::string_view text) {
  for (auto k : {SweepKind::none, SweepKind::pump_frequency, SweepKind::pump_intensity,
                 SweepKind::dephasing}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown sweep kind '" + std::string(text) +
                    "' (valid: none, pump_frequency, pump_intensity, dephasing)");
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"scenario", "system", "preset: pillar, crystal or disk"},
      {"convention", "system", "eV to GHz conversion: ordinary (E/h) or angular (E/hbar)"},
      {"g", "system", "coupling g (GHz)"},
      {"omega_c_eV", "system", "cavity photon energy (eV)"},
      {"Q", "system", "quality factor"},
      {"gamma_cav", "system", "cavity half width (GHz)"},
      {"gamma_P", "system", "polarization dephasing (GHz)"},
      {"delta", "system", "dot-cavity detuning (GHz)"},
      {"n_dot", "system", "dot density (cm^-2)"},
      {"S", "system", "cavity area (um^2)"},
      {"N_dot", "system", "dot count"},
      {"d", "system", "dipole matrix element (e*Angstrom)"},
      {"pump_carrier_offset", "pump", "carrier offset from omega_c (GHz) or auto"},
      {"pump_sigma_over_g", "pump", "Gaussian amplitude-spectrum std in units of g"},
      {"alpha", "pump", "coherent amplitude, sum |beta|^2 = alpha^2"},
      {"t_peak", "pump", "arrival of the envelope maximum (ns)"},
      {"mode_count", "grid", "number of continuum modes"},
      {"half_width_over_g", "grid", "grid half width in units of g"},
      {"dt", "integrator", "time step (ns)"},
      {"t_end", "integrator", "horizon (ns), overrides the horizon key"},
      {"record_every", "integrator", "steps between trajectory records"},
      {"horizon", "integrator", "late or pump_peak"},
      {"sweep_kind", "sweep", "none, pump_frequency, pump_intensity or dephasing"},
      {"sweep_from", "sweep", "first knob value"},
      {"sweep_to", "sweep", "last knob value"},
      {"sweep_count", "sweep", "number of knob values"},
      {"sweep_spacing", "sweep", "linear or log"},
      {"output_dir", "output", "directory for CSV, SVG and manifest files"},
      {"intensity_mode", "output", "incoherent or total"},
      {"g2_floor", "output", "n_qq below which g2 is masked"},
      {"peak_prominence", "output", "peak-list threshold relative to the maximum"},
      {"svg", "output", "also render SVG plots"},
      {"trajectory", "output", "also write the trajectory CSV"},
      {"oracle_n_max", "oracle", "Fock cutoff of the exact model"},
      {"oracle_periods", "oracle", "Rabi periods pi/g in the equivalence check"},
  };
  return keys;
}

void apply_setting(RunSpec& spec, std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  auto& o = spec.system;
  auto& k = spec.knobs;
  auto num = [&] { return parse_double(key, value); };
  auto integer = [&] { return parse_int(key, value); };

  if (key == "scenario") spec.scenario = std::string(value);
  else if (key == "convention") spec.convention = parse_frequency_convention(value);
  else if (key == "g") o.g = num();
  else if (key == "omega_c_eV") o.omega_c_eV = num();
  else if (key == "Q") o.Q = num();
  else if (key == "gamma_cav") o.gamma_cav = num();
  else if (key == "gamma_P") o.gamma_P = num();
  else if (key == "delta") o.delta = num();
  else if (key == "n_dot") o.n_dot = num();
  else if (key == "S") o.S = num();
  else if (key == "N_dot") o.N_dot = integer();
  else if (key == "d") o.d = num();
  else if (key == "pump_carrier_offset") {
    if (value == "auto") k.pump_carrier_offset.reset();
    else k.pump_carrier_offset = num();
  }
  else if (key == "pump_sigma_over_g") k.pump_sigma_over_g = num();
  else if (key == "alpha") k.alpha = num();
  else if (key == "t_peak") k.t_peak = num();
  else if (key == "mode_count") k.mode_count = integer();
  else if (key == "half_width_over_g") k.half_width_over_g = num();
  else if (key == "dt") k.dt = num();
  else if (key == "t_end") k.t_end = num();
  else if (key == "record_every") k.record_every = integer();
  else if (key == "horizon") k.horizon = parse_horizon(value);
  else if (key == "sweep_kind") spec.sweep.kind = parse_sweep_kind(value);
  else if (key == "sweep_from") spec.sweep.from = num();
  else if (key == "sweep_to") spec.sweep.to = num();
  else if (key == "sweep_count") spec.sweep.count = integer();
  else if (key == "sweep_spacing") {
    if (value == "linear") spec.sweep.spacing = Spacing::linear;
    else if (value == "log") spec.sweep.spacing = Spacing::log;
    else throw ConfigError("key 'sweep_spacing': expected linear or log");
  }
  else if (key == "output_dir") spec.output.dir = std::string(value);
  else if (key == "intensity_mode") {
    if (value == "incoherent") spec.output.intensity_mode = IntensityMode::incoherent;
    else if (value == "total") spec.output.intensity_mode = IntensityMode::total;
    else throw ConfigError("key 'intensity_mode': expected incoherent or total");
  }
  else if (key == "g2_floor") spec.output.g2_floor = num();
  else if (key == "peak_prominence") spec.output.peak_prominence = num();
  else if (key == "svg") spec.output.svg = parse_bool(key, value);
  else if (key == "trajectory") spec.output.trajectory = parse_bool(key, value);
  else if (key == "oracle_n_max") spec.oracle.n_max = integer();
  else if (key == "oracle_periods") spec.oracle.periods = num();
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

RunSpec parse_document(std::string_view text) {
  RunSpec spec;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      const bool known = std::any_of(config_keys().begin(), config_keys().end(),
                                     [&](const KeyInfo& k) { return k.section == section; });
      if (!known) throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto* info = find_key(key);
    if (info == nullptr) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    if (!section.empty() && info->section != section) {
      throw ParseError(line_no, "key '" + std::string(key) + "' belongs to [" +
                                    std::string(info->section) + "], not [" + section + "]");
    }
    try {
      apply_setting(spec, key, value);
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return spec;
}

RunSpec parse_config(std::string_view text) {
  RunSpec spec = parse_document(text);
  validate(spec);
  return spec;
}

SystemParams resolve_params(const RunSpec& spec) {
  SystemParams p = load_scenario(spec.scenario, spec.convention);
  const auto& o = spec.system;
  if (o.g) p.g = *o.g;
  if (o.omega_c_eV) p.omega_c_eV = *o.omega_c_eV;
  if (o.gamma_P) p.gamma_P = *o.gamma_P;
  if (o.delta) p.delta = *o.delta;
  if (o.d) p.d = *o.d;
  if (o.n_dot) p.n_dot = *o.n_dot;
  if (o.S) p.S = *o.S;
  if (o.N_dot) {
    p.N_dot = *o.N_dot;
  } else if (o.n_dot || o.S) {
    p.N_dot = dot_count(p.n_dot, p.S);
  }
  if (o.Q && o.gamma_cav) {
    p.Q = *o.Q;
    p.gamma_cav = *o.gamma_cav;
  } else if (o.gamma_cav) {
    p.gamma_cav = *o.gamma_cav;
    p.Q = quality_factor(p.omega_c_eV, p.gamma_cav, p.convention);
  } else {
    if (o.Q) p.Q = *o.Q;
    p.gamma_cav = cavity_half_width(p.omega_c_eV, p.Q, p.convention);
  }
  const bool customized = o != SystemOverrides{};
  if (customized) p.name = spec.scenario + "+overrides";
  return p;
}

void validate(const RunSpec& spec) {
  SystemParams params;
  try {
    params = resolve_params(spec);
  } catch (const ConfigError& e) {
    fail("system.scenario", e.what());
  }
  if (const auto violations = rungscope::validate(params); !violations.empty()) {
    const auto& v = violations.front();
    fail("system." + v.field, v.message);
  }

  const auto& k = spec.knobs;
  if (k.mode_count) require(*k.mode_count >= 16, "grid.mode_count", "must be >= 16");
  if (k.half_width_over_g) require(*k.half_width_over_g > 0.0, "grid.half_width_over_g", "must be > 0");
  if (k.pump_sigma_over_g) require(*k.pump_sigma_over_g > 0.0, "pump.pump_sigma_over_g", "must be > 0");
  if (k.alpha) require(*k.alpha >= 0.0, "pump.alpha", "must be >= 0");
  if (k.t_peak) require(*k.t_peak >= 0.0, "pump.t_peak", "must be >= 0");
  if (k.dt) require(*k.dt > 0.0, "integrator.dt", "must be > 0");
  if (k.t_end) require(*k.t_end >= 0.0, "integrator.t_end", "must be >= 0");
  if (k.record_every) require(*k.record_every >= 1, "integrator.record_every", "must be >= 1");

  const auto& o = spec.output;
  require(!o.dir.empty(), "output.output_dir", "must not be empty");
  require(o.g2_floor > 0.0, "output.g2_floor", "must be > 0");
  require(o.peak_prominence > 0.0 && o.peak_prominence <= 1.0, "output.peak_prominence",
          "must lie in (0, 1]");
  require(spec.oracle.n_max >= 2, "oracle.oracle_n_max", "must be >= 2");
  require(spec.oracle.periods > 0.0, "oracle.oracle_periods", "must be > 0");

  const auto& s = spec.sweep;
  if (s.kind != SweepKind::none) {
    require(s.count >= 1, "sweep.sweep_count", "must be >= 1");
    require(s.from <= s.to, "sweep.sweep_to", "must be >= sweep_from");
    if (s.spacing == Spacing::log) {
      require(s.from > 0.0, "sweep.sweep_from", "log spacing needs positive values");
    }
    switch (s.kind) {
      case SweepKind::pump_frequency: {
        const double need = 1.5 * pump_resonance(params.g, params.delta).optimum_pump;
        require(s.from <= 0.0 && s.to >= need, "sweep.sweep_to",
                "pump-frequency range must span [0, " + format_double(need) + "] GHz");
        break;
      }
      case SweepKind::pump_intensity:
        require(s.from >= 0.0 && s.to <= 2.0, "sweep.sweep_to",
                "|alpha|^2 must lie in [0, 2] (low-excitation regime)");
        break;
      case SweepKind::dephasing:
        require(s.from > 0.0, "sweep.sweep_from", "gamma_P values must be positive");
        break;
      case SweepKind::none: break;
    }
  }

  // Resolve the run geometry now so grid, pump and step problems surface
  // before anything is computed.
  try {
    SetupKnobs knobs = k;
    if (s.kind == SweepKind::dephasing) knobs.horizon = Horizon::pump_peak;
    const auto setup = resolve_setup(params, knobs);
    const auto grid = build_mode_grid(params.gamma_cav, setup.half_width, setup.mode_count);
    const auto couplings = coupling_constants(grid, params.g);
    (void)synth_pump(grid, setup.pump);
    check_integrator(setup.integrator, make_model(params, grid, couplings));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("run setup: ") + e.what());
  }
}

std::string render(const RunSpec& spec) {
  std::ostringstream out;
  auto line = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto opt = [&](std::string_view key, const auto& value) {
    if (!value) return;
    if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, int>) {
      line(key, std::to_string(*value));
    } else {
      line(key, format_double(*value));
    }
  };
  const auto& o = spec.system;
  const auto& k = spec.knobs;

  out << "[system]\n";
  line("scenario", spec.scenario);
  line("convention", std::string(to_string(spec.convention)));
  opt("g", o.g);
  opt("omega_c_eV", o.omega_c_eV);
  opt("Q", o.Q);
  opt("gamma_cav", o.gamma_cav);
  opt("gamma_P", o.gamma_P);
  opt("delta", o.delta);
  opt("n_dot", o.n_dot);
  opt("S", o.S);
  opt("N_dot", o.N_dot);
  opt("d", o.d);

  out << "\n[pump]\n";
  if (k.pump_carrier_offset) opt("pump_carrier_offset", k.pump_carrier_offset);
  else line("pump_carrier_offset", "auto");
  opt("pump_sigma_over_g", k.pump_sigma_over_g);
  opt("alpha", k.alpha);
  opt("t_peak", k.t_peak);

  out << "\n[grid]\n";
  opt("mode_count", k.mode_count);
  opt("half_width_over_g", k.half_width_over_g);

  out << "\n[integrator]\n";
  opt("dt", k.dt);
  opt("t_end", k.t_end);
  opt("record_every", k.record_every);
  line("horizon", to_string(k.horizon));

  out << "\n[sweep]\n";
  line("sweep_kind", to_string(spec.sweep.kind));
  line("sweep_from", format_double(spec.sweep.from));
  line("sweep_to", format_double(spec.sweep.to));
  line("sweep_count", std::to_string(spec.sweep.count));
  line("sweep_spacing", spec.sweep.spacing == Spacing::log ? "log" : "linear");

  out << "\n[output]\n";
  line("output_dir", spec.output.dir);
  line("intensity_mode",
       spec.output.intensity_mode == IntensityMode::total ? "total" : "incoherent");
  line("g2_floor", format_double(spec.output.g2_floor));
  line("peak_prominence", format_double(spec.output.peak_prominence));
  line("svg", spec.output.svg ? "true" : "false");
  line("trajectory", spec.output.trajectory ? "true" : "false");

  out << "\n[oracle]\n";
  line("oracle_n_max", std::to_string(spec.oracle.n_max));
  line("oracle_periods", format_double(spec.oracle.periods));
  return out.str();
}

}  // namespace rungscope
