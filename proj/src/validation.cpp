#include "rungscope/validation.hpp"

#include <algorithm>
#include <cmath>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/errors.hpp"

namespace rungscope {

namespace {

template <typename T>
double sup_relative(const std::vector<T>& exact, const std::vector<T>& approx) {
  if (exact.size() != approx.size()) {
    throw std::invalid_argument("series differ in length");
  }
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    scale = std::max(scale, std::abs(exact[i]));
    worst = std::max(worst, std::abs(approx[i] - exact[i]));
  }
  if (scale == 0.0) return worst == 0.0 ? 0.0 : HUGE_VAL;
  return worst / scale;
}

}  // namespace

double sup_relative_error(const std::vector<double>& exact, const std::vector<double>& approx) {
  return sup_relative(exact, approx);
}

double sup_relative_error(const std::vector<cplx>& exact, const std::vector<cplx>& approx) {
  return sup_relative(exact, approx);
}

EquivalenceReport compare_single_mode(const OracleConfig& config, double alpha,
                                      double t_end, double dt, int record_every) {
  if (config.gamma_cav != 0.0) {
    throw ConfigError("single-mode equivalence needs gamma_cav = 0");
  }
  if (record_every < 1) throw ConfigError("record_every must be >= 1");

  const auto exact = evolve(config, coherent_state(config.n_max, alpha), t_end, dt, {},
                            record_every);

  const auto grid = single_mode_grid();
  const auto couplings = coupling_constants(grid, config.g);
  DynamicsModel model;
  model.omega = grid.omega;
  model.F = couplings.F;
  model.delta = config.delta;
  model.gamma_P = config.gamma_P;
  auto state = CorrelationState::zeros(1);
  state.beta[0] = alpha;

  // Same uniform step as the oracle so the samples coincide.
  const long steps = t_end > 0.0 ? static_cast<long>(std::ceil(t_end / dt - 1e-9)) : 0;
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;

  EquivalenceReport report;
  Rk4Stepper stepper;
  long done = 0;
  for (std::size_t i = 0; i < exact.t.size(); ++i) {
    const long target = std::lround(exact.t[i] / h);
    for (; done < target; ++done) stepper.step(state, h, model);
    check_finite(state);
    const auto m = moments(exact.states[i]);
    report.t.push_back(exact.t[i]);
    report.beta_exact.push_back(m.mean_B);
    report.f_exact.push_back(m.f);
    report.n_exact.push_back(m.n_corr);
    report.beta_cluster.push_back(state.beta[0]);
    report.f_cluster.push_back(state.f_e);
    report.n_cluster.push_back(state.n(0, 0).real());
  }
  report.error_beta = sup_relative(report.beta_exact, report.beta_cluster);
  report.error_f = sup_relative(report.f_exact, report.f_cluster);
  report.error_n = sup_relative(report.n_exact, report.n_cluster);
  return report;
}

FactorizationReport factorization_audit(const SystemParams& params,
                                        const SimulationSetup& setup, int n_max) {
  OracleConfig config;
  config.n_max = n_max;
  config.g = params.g;
  config.delta = params.delta;
  config.gamma_P = params.gamma_P;
  config.gamma_cav = params.gamma_cav;
  DriveScenario scenario;
  scenario.pump = setup.pump;
  scenario.t_end = setup.integrator.t_end;
  const double fastest = std::max({params.g, params.gamma_cav, params.gamma_P,
                                   std::abs(params.delta)});
  scenario.dt = 0.02 / fastest;
  const long steps = static_cast<long>(std::ceil(scenario.t_end / scenario.dt));
  scenario.record_every = static_cast<int>(std::max(1L, steps / 400));
  return factorization_error(config, scenario);
}

}  // namespace rungscope
