#include "rungscope/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "rungscope/config.hpp"
#include "rungscope/errors.hpp"
#include "rungscope/fock_oracle.hpp"
#include "rungscope/jc_analytics.hpp"
#include "rungscope/output.hpp"
#include "rungscope/simulation.hpp"
#include "rungscope/validation.hpp"

namespace rungscope {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::string dashed(std::string_view key) {
  std::string out(key);
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

std::string fmt(double x, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_fixed17(*v) : ""; }

std::vector<PlotMarker> plot_markers(const SystemParams& params) {
  const auto lines = line_markers(params);
  return {{lines.rabi_lower, "-g"},
          {lines.rabi_upper, "+g"},
          {lines.second_lower, "2nd-"},
          {lines.second_upper, "2nd+"}};
}

struct Context {
  RunSpec spec;
  std::string command;
  std::ostream& out;
  std::ostream& err;
  Clock::time_point started = Clock::now();

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - started).count();
  }

  void finish(RunManifest& manifest, const std::string& name) {
    const fs::path dir = spec.output.dir;
    manifest.command = command;
    manifest.spec_text = render(spec);
    manifest.wall_time_s = elapsed();
    const auto path = dir / (name + "_manifest.json");
    write_file(path, manifest_json(manifest, dir));
    out << "manifest: " << path.string() << '\n';
  }
};

int cmd_analytics(Context& ctx) {
  const auto params = resolve_params(ctx.spec);
  const auto derived = derive(params);
  const auto pr = pump_resonance(params.g, params.delta);
  auto& out = ctx.out;
  out << "scenario: " << params.name << " (convention " << to_string(params.convention) << ")\n"
      << "g = " << fmt(params.g) << " GHz, gamma_cav = " << fmt(params.gamma_cav)
      << " GHz, Q = " << fmt(params.Q) << ", gamma_P = " << fmt(params.gamma_P)
      << " GHz, delta = " << fmt(params.delta) << " GHz\n"
      << "tau_rabi = " << fmt(derived.tau_rabi) << " ns, tau_cav = " << fmt(derived.tau_cav)
      << " ns, N_dot = " << params.N_dot << "\n\n";

  OracleConfig config;
  config.n_max = 5;
  config.g = params.g;
  config.delta = params.delta;
  out << "dressed ladder (offsets from k * omega_c, GHz)\n";
  for (int k = 1; k <= 4; ++k) {
    const auto rung = manifold_doublet(config, k);
    out << "  k = " << k << ": lower " << fmt(rung.lower, 8) << ", upper " << fmt(rung.upper, 8)
        << ", splitting " << fmt(rung.splitting(), 8) << '\n';
  }
  out << "\nsecond-rung pumping\n"
      << "  optimum pump offset: " << fmt(pr.optimum_pump, 6) << " GHz\n"
      << "  emission lines: " << fmt(pr.emission_lower, 6) << " GHz and "
      << fmt(pr.emission_upper, 6) << " GHz\n";
  const double alpha = ctx.spec.knobs.alpha.value_or(kDefaultAlpha);
  out << "  P2 at alpha = " << fmt(alpha) << ": " << fmt(two_photon_occupation(alpha)) << '\n';
  return kExitOk;
}

int cmd_simulate(Context& ctx) {
  const auto params = resolve_params(ctx.spec);
  const auto setup = resolve_setup(params, ctx.spec.knobs);
  auto& out = ctx.out;
  out << "simulate " << params.name << ": " << setup.mode_count << " modes, half width "
      << fmt(setup.half_width) << " GHz, dt " << fmt(setup.integrator.dt) << " ns, t_end "
      << fmt(setup.integrator.t_end) << " ns, pump carrier " << fmt(setup.pump.carrier)
      << " GHz\n";

  const auto sim = simulate(params, setup);
  if (!sim.ok()) {
    const auto& f = *sim.trajectory.failure;
    ctx.err << "error: " << f.message << " (|" << f.field << "| = " << fmt(f.magnitude) << ")\n";
    return kExitNumerical;
  }

  Spectrum combined = make_spectrum(sim.grid, sim.trajectory.final_state,
                                    ctx.spec.output.intensity_mode, ctx.spec.output.g2_floor);
  const bool have_peak = sim.trajectory.pump_peak_state.has_value();
  if (have_peak) {
    combined.g2 = g2_spectrum(*sim.trajectory.pump_peak_state, ctx.spec.output.g2_floor);
  }
  const auto peaks = find_peaks(combined.omega, combined.intensity, ctx.spec.output.peak_prominence);
  const auto lines = line_markers(params);

  const fs::path dir = ctx.spec.output.dir;
  prepare_dir(dir);
  RunManifest manifest;
  manifest.outputs.push_back(write_spectrum_csv(combined, dir / "spectrum.csv"));

  std::vector<std::vector<std::string>> rows;
  for (const auto& p : peaks) {
    rows.push_back({format_fixed17(p.offset), format_fixed17(p.height),
                    format_fixed17(p.prominence)});
  }
  manifest.outputs.push_back(
      write_file(dir / "peaks.csv", csv_text({"offset_GHz", "height", "prominence"}, rows)));

  if (ctx.spec.output.trajectory) {
    rows.clear();
    for (const auto& r : sim.trajectory.records) {
      rows.push_back({format_fixed17(r.t), format_fixed17(r.f_e), format_fixed17(r.f_h),
                      format_fixed17(r.polarization), format_fixed17(r.pump_envelope),
                      format_fixed17(r.excitation)});
    }
    manifest.outputs.push_back(write_file(
        dir / "trajectory.csv",
        csv_text({"t_ns", "f_e", "f_h", "abs_P", "pump_envelope", "excitation"}, rows)));
  }
  if (ctx.spec.output.svg) {
    manifest.outputs.push_back(write_file(
        dir / "spectrum.svg",
        spectrum_svg(combined, plot_markers(params), params.name + " emission and g2")));
  }

  const double I2 = sample(combined.omega, combined.intensity, lines.second_lower);
  const auto g2_2nd = g2_near(combined, lines.second_lower);
  manifest.diagnostics = {
      {"dt_ns", sim.trajectory.dt_used},
      {"t_end_ns", setup.integrator.t_end},
      {"mode_count", static_cast<double>(setup.mode_count)},
      {"half_width_GHz", setup.half_width},
      {"d_omega_GHz", sim.grid.d_omega},
      {"pump_carrier_GHz", setup.pump.carrier},
      {"pump_sigma_GHz", setup.pump.sigma},
      {"alpha", setup.pump.alpha},
      {"t_peak_ns", setup.pump.t_peak},
      {"excitation_initial", sim.trajectory.excitation_initial},
      {"excitation_final", sim.trajectory.excitation_final},
      {"excitation_drift", sim.trajectory.excitation_drift()},
      {"symmetry_defect", symmetry_defect(sim.trajectory.final_state)},
      {"I_2nd", I2},
      {"g2_2nd", g2_2nd.value_or(NAN)},
  };
  manifest.notes = {{"g2_snapshot", have_peak ? "pump_peak" : "final"},
                    {"intensity_snapshot", "final"}};

  out << "peaks (offset GHz, height, prominence):\n";
  for (const auto& p : peaks) {
    out << "  " << fmt(p.offset, 6) << "  " << fmt(p.height, 4) << "  " << fmt(p.prominence, 4)
        << '\n';
  }
  out << "I_2nd = " << fmt(I2) << ", g2(2nd) = " << (g2_2nd ? fmt(*g2_2nd) : "masked")
      << ", excitation drift = " << fmt(sim.trajectory.excitation_drift(), 3) << '\n';
  ctx.finish(manifest, "simulate");
  return kExitOk;
}

int cmd_sweep(Context& ctx) {
  const auto& s = ctx.spec.sweep;
  if (s.kind == SweepKind::none) {
    throw ConfigError("sweep.sweep_kind: choose pump_frequency, pump_intensity or dephasing");
  }
  const auto params = resolve_params(ctx.spec);
  const auto values = sweep_values(s.from, s.to, s.count, s.spacing == Spacing::log);
  ctx.out << "sweep " << to_string(s.kind) << " over " << values.size() << " points\n";

  SweepResult result;
  switch (s.kind) {
    case SweepKind::pump_frequency: result = sweep_pump_frequency(params, ctx.spec.knobs, values); break;
    case SweepKind::pump_intensity: result = sweep_pump_intensity(params, ctx.spec.knobs, values); break;
    case SweepKind::dephasing: result = sweep_dephasing(params, ctx.spec.knobs, values); break;
    case SweepKind::none: break;
  }

  std::vector<std::vector<std::string>> rows;
  std::size_t failed = 0;
  double worst_drift = 0.0;
  for (const auto& p : result.points) {
    if (!p.ok) ++failed;
    else worst_drift = std::max(worst_drift, std::abs(p.excitation_drift));
    std::string error = p.error;
    for (auto& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    rows.push_back({format_fixed17(p.knob), p.ok ? "1" : "0", format_fixed17(p.I_2nd),
                    opt_cell(p.g2_2nd), opt_cell(p.g2_rabi), format_fixed17(p.P2),
                    format_fixed17(p.excitation_drift), error});
    ctx.out << "  " << result.knob << " = " << fmt(p.knob) << ": "
            << (p.ok ? "I_2nd " + fmt(p.I_2nd) + ", g2(2nd) " +
                           (p.g2_2nd ? fmt(*p.g2_2nd) : std::string("masked"))
                     : "failed: " + p.error)
            << '\n';
  }
  const fs::path dir = ctx.spec.output.dir;
  prepare_dir(dir);
  RunManifest manifest;
  const auto name = "sweep_" + to_string(s.kind);
  manifest.outputs.push_back(write_file(
      dir / (name + ".csv"),
      csv_text({result.knob, "ok", "I_2nd", "g2_2nd", "g2_rabi", "P2", "excitation_drift", "error"},
               rows)));
  manifest.diagnostics = {{"points", static_cast<double>(result.points.size())},
                          {"failed_points", static_cast<double>(failed)},
                          {"max_excitation_drift", worst_drift}};
  if (const auto best = result.argmax_I2nd()) {
    manifest.diagnostics.emplace_back("argmax_I_2nd_knob", result.points[*best].knob);
    ctx.out << "argmax I_2nd at " << result.knob << " = " << fmt(result.points[*best].knob) << '\n';
  }
  ctx.finish(manifest, name);
  return kExitOk;
}

int cmd_oracle(Context& ctx) {
  const auto params = resolve_params(ctx.spec);
  const double alpha = ctx.spec.knobs.alpha.value_or(kDefaultAlpha);
  OracleConfig closed;
  closed.n_max = ctx.spec.oracle.n_max;
  closed.g = params.g;
  closed.delta = params.delta;
  closed.gamma_P = params.gamma_P;
  const double t_end = ctx.spec.oracle.periods * std::numbers::pi / params.g;
  const double dt = 0.02 / std::max({params.g, params.gamma_P, std::abs(params.delta)});
  const auto eq = compare_single_mode(closed, alpha, t_end, dt, 1);

  SetupKnobs knobs = ctx.spec.knobs;
  const auto setup = resolve_setup(params, knobs);
  const auto audit = factorization_audit(params, setup, ctx.spec.oracle.n_max);

  std::ostringstream report;
  report << "single-mode equivalence (alpha = " << fmt(alpha) << ", " << fmt(ctx.spec.oracle.periods)
         << " Rabi periods, gamma_P = " << fmt(params.gamma_P) << " GHz)\n"
         << "  sup relative error beta: " << fmt(eq.error_beta, 4) << '\n'
         << "  sup relative error f:    " << fmt(eq.error_f, 4) << '\n'
         << "  sup relative error n:    " << fmt(eq.error_n, 4) << '\n'
         << "factorization audit (" << params.name << ", pump " << fmt(setup.pump.carrier)
         << " GHz, t_end " << fmt(setup.integrator.t_end) << " ns)\n"
         << "  max relative deviation:     " << fmt(audit.max_deviation, 4) << '\n'
         << "  deviation at exact maximum: " << fmt(audit.deviation_at_peak, 4) << '\n';
  ctx.out << report.str();

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < eq.t.size(); ++i) {
    rows.push_back({format_fixed17(eq.t[i]), format_fixed17(eq.beta_exact[i].real()),
                    format_fixed17(eq.beta_exact[i].imag()), format_fixed17(eq.beta_cluster[i].real()),
                    format_fixed17(eq.beta_cluster[i].imag()), format_fixed17(eq.f_exact[i]),
                    format_fixed17(eq.f_cluster[i]), format_fixed17(eq.n_exact[i]),
                    format_fixed17(eq.n_cluster[i])});
  }
  const fs::path dir = ctx.spec.output.dir;
  prepare_dir(dir);
  RunManifest manifest;
  manifest.outputs.push_back(write_file(
      dir / "oracle_equivalence.csv",
      csv_text({"t_ns", "beta_exact_re", "beta_exact_im", "beta_cluster_re", "beta_cluster_im",
                "f_exact", "f_cluster", "n_exact", "n_cluster"},
               rows)));
  rows.clear();
  for (std::size_t i = 0; i < audit.t.size(); ++i) {
    rows.push_back({format_fixed17(audit.t[i]), format_fixed17(audit.exact[i]),
                    format_fixed17(audit.factorized[i]), format_fixed17(audit.deviation[i])});
  }
  manifest.outputs.push_back(write_file(
      dir / "oracle_factorization.csv",
      csv_text({"t_ns", "exact", "factorized", "relative_deviation"}, rows)));
  manifest.outputs.push_back(write_file(dir / "oracle_report.txt", report.str()));
  manifest.diagnostics = {{"equivalence_error_beta", eq.error_beta},
                          {"equivalence_error_f", eq.error_f},
                          {"equivalence_error_n", eq.error_n},
                          {"factorization_max_deviation", audit.max_deviation},
                          {"factorization_deviation_at_peak", audit.deviation_at_peak},
                          {"oracle_n_max", static_cast<double>(ctx.spec.oracle.n_max)}};
  ctx.finish(manifest, "oracle");
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-dot microcavity second-rung spectroscopy"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool svg_flag = false;

  std::vector<CLI::App*> subs;
  for (const auto* name : {"analytics", "simulate", "sweep", "oracle-validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value lines)");
    for (const auto& k : config_keys()) {
      const std::string key(k.key);
      if (key == "svg") {
        options[key + "@" + name] = sub->add_flag("--svg", svg_flag, std::string(k.help));
        continue;
      }
      options[key + "@" + name] = sub->add_option("--" + dashed(key), values[key], std::string(k.help))
                                      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
    subs.push_back(sub);
  }
  subs[0]->description("dressed ladder and pump-resonance report");
  subs[1]->description("one run: spectrum, g2 and trajectory CSV plus manifest");
  subs[2]->description("pump-frequency, pump-intensity or dephasing sweep");
  subs[3]->description("cluster model against the exact single-mode model");

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : subs) {
    if (sub->parsed()) chosen = sub;
  }
  const std::string command = chosen->get_name();

  try {
    RunSpec spec;
    if (!config_path.empty()) spec = parse_document(read_text(config_path));
    for (const auto& k : config_keys()) {
      const std::string key(k.key);
      const auto* opt = options.at(key + "@" + command);
      if (opt->count() == 0) continue;
      try {
        apply_setting(spec, key, key == "svg" ? (svg_flag ? "true" : "false") : values[key]);
      } catch (const ConfigError& e) {
        throw ConfigError("--" + dashed(key) + ": " + e.what());
      }
    }
    validate(spec);

    std::ostringstream invocation;
    for (std::size_t i = 0; i < args.size(); ++i) invocation << (i ? " " : "") << args[i];
    Context ctx{spec, invocation.str(), out, err};
    if (command == "analytics") return cmd_analytics(ctx);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "sweep") return cmd_sweep(ctx);
    return cmd_oracle(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " at t = " << e.time() << " ns in " << e.field()
        << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace rungscope
