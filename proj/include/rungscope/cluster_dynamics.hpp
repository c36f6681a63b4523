#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rungscope/mode_field.hpp"
#include "rungscope/params.hpp"

namespace rungscope {

/// Singlets and doublets of the dot-continuum system at one instant. With
/// P = h e the dot polarization operator and f = f_e + f_h:
///   beta_q = <B_q>,   s(q,k) = D<B_q B_k>,   n(q,k) = D<B_q^dag B_k>,
///   Pi_q = D<B_q P>,  Theta_q = D<B_q^dag P>,  Phi_q = D<B_q f>.
struct CorrelationState {
  double t = 0.0;
  Eigen::VectorXcd beta;
  cplx P{0.0, 0.0};
  double f_e = 0.0;
  double f_h = 0.0;
  Eigen::MatrixXcd s;
  Eigen::MatrixXcd n;
  Eigen::VectorXcd Pi;
  Eigen::VectorXcd Theta;
  Eigen::VectorXcd Phi;

  static CorrelationState zeros(Eigen::Index modes);
  Eigen::Index modes() const { return beta.size(); }
};

struct DynamicsModel;

/// Extra derivative contribution added after the built-in singlet-doublet
/// equations. The default model has none (genuine triplets set to zero).
using TripletHook = std::function<void(const CorrelationState& state,
                                       const DynamicsModel& model,
                                       CorrelationState& rate)>;

struct DynamicsModel {
  Eigen::VectorXd omega;  // mode offsets from omega_c
  Eigen::VectorXd F;      // per-mode couplings
  double delta = 0.0;
  double gamma_P = 0.0;
  /// The spontaneous -F_q P^2 source of Pi; switched off only in ablation tests.
  bool polarization_square_source = true;
  TripletHook triplet;

  Eigen::Index modes() const { return omega.size(); }
  double coupling() const { return F.norm(); }
};

DynamicsModel make_model(const SystemParams& params, const ModeGrid& grid,
                         const CouplingSet& couplings);

/// Pump in the modes, dot unexcited, all correlations zero.
CorrelationState init_state(const SystemParams& params, const ModeGrid& grid,
                            const CouplingSet& couplings, const PumpSpec& pump);

/// Time derivative of every field. `rate` is resized as needed. The matrix
/// part is parallelized over mode columns; the result does not depend on
/// the thread count.
void derivatives(const CorrelationState& state, const DynamicsModel& model,
                 CorrelationState& rate);
CorrelationState derivatives(const CorrelationState& state, const DynamicsModel& model);

/// Straightforward single-threaded evaluation of the same equations, kept as
/// the reference for the parallel kernel.
CorrelationState derivatives_reference(const CorrelationState& state,
                                       const DynamicsModel& model);

/// Largest |s - s^T| and |n - n^dag| entry.
double symmetry_defect(const CorrelationState& state);
/// Replace s by (s + s^T)/2 and n by (n + n^dag)/2.
void enforce_symmetry(CorrelationState& state);

/// Sum_q (|beta_q|^2 + n_qq) + (f_e + f_h)/2; conserved when gamma_P = 0.
double excitation_balance(const CorrelationState& state);

/// Throws NumericalError naming the offending field if any entry is not finite.
void check_finite(const CorrelationState& state);

class Rk4Stepper {
 public:
  /// Classical RK4 followed by symmetry enforcement.
  void step(CorrelationState& state, double dt, const DynamicsModel& model);

 private:
  CorrelationState k_, tmp_, acc_;
};

CorrelationState step_rk4(const CorrelationState& state, double dt,
                          const DynamicsModel& model);

struct IntegratorConfig {
  double dt = 0.0;
  double t_end = 0.0;
  int record_every = 1;
};

/// 0.02 / max(grid half width, g, gamma_P).
double max_stable_dt(const DynamicsModel& model);
/// Throws ConfigError when dt is nonpositive or above max_stable_dt.
void check_integrator(const IntegratorConfig& config, const DynamicsModel& model);

struct Snapshot {
  double t = 0.0;
  double f_e = 0.0;
  double f_h = 0.0;
  double polarization = 0.0;  // |P|
  double pump_envelope = 0.0;
  double excitation = 0.0;
};

struct BlowupInfo {
  double t = 0.0;
  std::string field;
  double magnitude = 0.0;
  std::string message;
};

struct Trajectory {
  std::vector<Snapshot> records;
  CorrelationState final_state;
  /// State at the step nearest the pump envelope maximum, if reached.
  std::optional<CorrelationState> pump_peak_state;
  std::optional<BlowupInfo> failure;
  double dt_used = 0.0;
  double excitation_initial = 0.0;
  double excitation_final = 0.0;

  bool ok() const { return !failure.has_value(); }
  double excitation_drift() const;
};

using Observer = std::function<void(const CorrelationState&)>;

/// Fixed-step integration from `initial` to config.t_end. The step is
/// shortened uniformly so the horizon is hit exactly. Observers fire on every
/// recorded snapshot. A blowup stops the run and is reported in `failure`.
Trajectory run(CorrelationState initial, const IntegratorConfig& config,
               const DynamicsModel& model, const std::optional<PumpSpec>& pump = {},
               const Observer& observer = {});

}  // namespace rungscope
