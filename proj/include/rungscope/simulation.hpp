#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/mode_field.hpp"
#include "rungscope/params.hpp"
#include "rungscope/spectra.hpp"

namespace rungscope {

/// Where a run stops: after the pulse has left (emission spectra) or at the
/// pump envelope maximum (photon statistics).
enum class Horizon { late, pump_peak };

std::string to_string(Horizon h);
Horizon parse_horizon(std::string_view text);

/// User-facing knobs; an unset value means "derive from the system".
struct SetupKnobs {
  Horizon horizon = Horizon::late;
  std::optional<int> mode_count;
  std::optional<double> half_width_over_g;
  std::optional<double> pump_carrier_offset;  // GHz; unset = optimum second-rung pump
  std::optional<double> pump_sigma_over_g;
  std::optional<double> alpha;
  std::optional<double> t_peak;  // ns
  std::optional<double> dt;      // ns
  std::optional<double> t_end;   // ns; overrides the horizon
  std::optional<int> record_every;

  bool operator==(const SetupKnobs&) const = default;
};

inline constexpr double kDefaultSigmaOverG = 0.1;
inline constexpr double kDefaultAlpha = 0.03;

struct SimulationSetup {
  int mode_count = 0;
  double half_width = 0.0;
  PumpSpec pump;
  IntegratorConfig integrator;
};

/// Fills every unset knob:
///   sigma = 0.1 g, carrier = optimum second-rung pump, t_peak = 3 / sigma,
///   half width = max(2.75 g, 14 gamma_cav),
///   t_end = t_peak + 6 tau_cav (late horizon) or t_peak,
///   mode spacing <= min(0.05 g, 2 pi / (1.1 t_end)) so the field
///   recurrence time of the discrete grid stays beyond t_end,
///   dt = stability bound.
SimulationSetup resolve_setup(const SystemParams& params, const SetupKnobs& knobs = {});

struct SimulationResult {
  ModeGrid grid;
  SimulationSetup setup;
  Trajectory trajectory;
  std::optional<Spectrum> pump_peak;  // at the pump envelope maximum
  Spectrum late;                      // at the end of the run

  bool ok() const { return trajectory.ok(); }
};

/// One complete run. `ablate_p2_source` removes the -F P^2 source.
SimulationResult simulate(const SystemParams& params, const SimulationSetup& setup,
                          bool ablate_p2_source = false);

/// Offsets of the two second-rung emission lines and the vacuum Rabi pair.
struct LineMarkers {
  double second_lower = 0.0;
  double second_upper = 0.0;
  double rabi_lower = 0.0;
  double rabi_upper = 0.0;
};
LineMarkers line_markers(const SystemParams& params);

struct SweepPoint {
  double knob = 0.0;
  bool ok = false;
  std::string error;
  double I_2nd = 0.0;               // late-time intensity at the lower second-rung line
  std::optional<double> g2_2nd;     // g2 at the lower second-rung line, pump maximum
  std::optional<double> g2_rabi;    // larger g2 of the two vacuum Rabi lines, pump maximum
  double P2 = 0.0;                  // two-photon weight of the pump
  double excitation_drift = 0.0;
};

struct SweepResult {
  std::string knob;
  std::vector<SweepPoint> points;

  /// Index of the largest I_2nd among successful points; unset for fewer than
  /// two successful points.
  std::optional<std::size_t> argmax_I2nd() const;
};

/// Pump carrier offsets (GHz); late-time runs.
SweepResult sweep_pump_frequency(const SystemParams& params, const SetupKnobs& knobs,
                                 const std::vector<double>& carriers);
/// |alpha|^2 values; late-time runs.
SweepResult sweep_pump_intensity(const SystemParams& params, const SetupKnobs& knobs,
                                 const std::vector<double>& alpha_sq);
/// gamma_P values (GHz); runs end at the pump maximum.
SweepResult sweep_dephasing(const SystemParams& params, const SetupKnobs& knobs,
                            const std::vector<double>& gammas);

/// n evenly spaced values from `from` to `to` inclusive (geometric when log).
std::vector<double> sweep_values(double from, double to, int count, bool log = false);

}  // namespace rungscope
