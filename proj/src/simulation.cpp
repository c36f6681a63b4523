#include "rungscope/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rungscope/errors.hpp"
#include "rungscope/jc_analytics.hpp"

namespace rungscope {

std::string to_string(Horizon h) { return h == Horizon::late ? "late" : "pump_peak"; }

Horizon parse_horizon(std::string_view text) {
  if (text == "late") return Horizon::late;
  if (text == "pump_peak") return Horizon::pump_peak;
  throw ConfigError("unknown horizon '" + std::string(text) + "' (valid: late, pump_peak)");
}

SimulationSetup resolve_setup(const SystemParams& params, const SetupKnobs& k) {
  require_valid(params);
  const double g = params.g;
  SimulationSetup s;
  s.pump.sigma = k.pump_sigma_over_g.value_or(kDefaultSigmaOverG) * g;
  s.pump.carrier = k.pump_carrier_offset.value_or(pump_resonance(g, params.delta).optimum_pump);
  s.pump.alpha = k.alpha.value_or(kDefaultAlpha);
  if (!(s.pump.sigma > 0.0)) throw ConfigError("pump_sigma_over_g must be > 0");
  if (s.pump.alpha < 0.0) throw ConfigError("alpha must be >= 0");
  s.pump.t_peak = k.t_peak.value_or(3.0 / s.pump.sigma);

  s.half_width = k.half_width_over_g ? *k.half_width_over_g * g
                                     : std::max(2.75 * g, 14.0 * params.gamma_cav);
  const double tau_cav = derive(params).tau_cav;
  const double horizon =
      k.horizon == Horizon::late ? s.pump.t_peak + 6.0 * tau_cav : s.pump.t_peak;
  s.integrator.t_end = k.t_end.value_or(horizon);

  if (k.mode_count) {
    s.mode_count = *k.mode_count;
  } else {
    const double recurrence =
        2.0 * std::numbers::pi / (1.1 * std::max(s.integrator.t_end, 1e-12));
    const double spacing = std::min(0.05 * g, recurrence);
    s.mode_count = static_cast<int>(std::ceil(2.0 * s.half_width / spacing)) + 1;
    if (s.mode_count % 2 == 0) ++s.mode_count;
    s.mode_count = std::max(s.mode_count, 17);
  }

  const double fastest = std::max({s.half_width, g, params.gamma_P});
  s.integrator.dt = k.dt.value_or(0.02 / fastest);
  const long steps = static_cast<long>(std::ceil(s.integrator.t_end / s.integrator.dt));
  s.integrator.record_every = k.record_every.value_or(static_cast<int>(std::max(1L, steps / 400)));
  return s;
}

SimulationResult simulate(const SystemParams& params, const SimulationSetup& setup,
                          bool ablate_p2_source) {
  require_valid(params);
  SimulationResult result;
  result.setup = setup;
  result.grid = build_mode_grid(params.gamma_cav, setup.half_width, setup.mode_count);
  const auto couplings = coupling_constants(result.grid, params.g);
  auto model = make_model(params, result.grid, couplings);
  model.polarization_square_source = !ablate_p2_source;
  check_integrator(setup.integrator, model);
  auto initial = init_state(params, result.grid, couplings, setup.pump);
  result.trajectory = run(std::move(initial), setup.integrator, model, setup.pump);
  if (result.trajectory.pump_peak_state) {
    result.pump_peak = make_spectrum(result.grid, *result.trajectory.pump_peak_state);
  }
  result.late = make_spectrum(result.grid, result.trajectory.final_state);
  return result;
}

LineMarkers line_markers(const SystemParams& params) {
  const auto pr = pump_resonance(params.g, params.delta);
  const double rabi = 0.5 * std::sqrt(params.delta * params.delta + 4.0 * params.g * params.g);
  return {pr.emission_lower, pr.emission_upper, 0.5 * params.delta - rabi,
          0.5 * params.delta + rabi};
}

std::optional<std::size_t> SweepResult::argmax_I2nd() const {
  std::optional<std::size_t> best;
  std::size_t ok_count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].ok) continue;
    ++ok_count;
    if (!best || points[i].I_2nd > points[*best].I_2nd) best = i;
  }
  if (ok_count < 2) return std::nullopt;
  return best;
}

namespace {

template <typename Adjust>
SweepResult run_sweep(std::string knob, const std::vector<double>& values, Horizon horizon,
                      const SystemParams& base, const SetupKnobs& knobs, Adjust adjust) {
  SweepResult result;
  result.knob = std::move(knob);
  result.points.resize(values.size());
  const auto n = static_cast<long>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    auto& point = result.points[static_cast<std::size_t>(i)];
    point.knob = values[static_cast<std::size_t>(i)];
    try {
      SystemParams params = base;
      SetupKnobs local = knobs;
      local.horizon = horizon;
      adjust(point.knob, params, local);
      const auto setup = resolve_setup(params, local);
      const auto sim = simulate(params, setup);
      const auto lines = line_markers(params);
      point.P2 = two_photon_occupation(setup.pump.alpha);
      point.excitation_drift = sim.trajectory.excitation_drift();
      point.I_2nd = sample(sim.late.omega, sim.late.intensity, lines.second_lower);
      if (sim.pump_peak) {
        point.g2_2nd = g2_near(*sim.pump_peak, lines.second_lower);
        const auto lo = g2_near(*sim.pump_peak, lines.rabi_lower);
        const auto hi = g2_near(*sim.pump_peak, lines.rabi_upper);
        if (lo || hi) point.g2_rabi = std::max(lo.value_or(0.0), hi.value_or(0.0));
      }
      point.ok = sim.ok();
      if (!point.ok) point.error = sim.trajectory.failure->message;
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
    }
  }
  return result;
}

}  // namespace

SweepResult sweep_pump_frequency(const SystemParams& params, const SetupKnobs& knobs,
                                 const std::vector<double>& carriers) {
  return run_sweep("pump_carrier_offset", carriers, Horizon::late, params, knobs,
                   [](double x, SystemParams&, SetupKnobs& k) { k.pump_carrier_offset = x; });
}

SweepResult sweep_pump_intensity(const SystemParams& params, const SetupKnobs& knobs,
                                 const std::vector<double>& alpha_sq) {
  return run_sweep("alpha_sq", alpha_sq, Horizon::late, params, knobs,
                   [](double x, SystemParams&, SetupKnobs& k) { k.alpha = std::sqrt(x); });
}

SweepResult sweep_dephasing(const SystemParams& params, const SetupKnobs& knobs,
                            const std::vector<double>& gammas) {
  return run_sweep("gamma_P", gammas, Horizon::pump_peak, params, knobs,
                   [](double x, SystemParams& p, SetupKnobs&) { p.gamma_P = x; });
}

std::vector<double> sweep_values(double from, double to, int count, bool log) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {from};
  for (int i = 0; i < count; ++i) {
    const double x = static_cast<double>(i) / (count - 1);
    out.push_back(log ? from * std::pow(to / from, x) : from + x * (to - from));
  }
  return out;
}

}  // namespace rungscope
