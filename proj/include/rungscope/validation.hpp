#pragma once

#include <vector>

#include "rungscope/fock_oracle.hpp"
#include "rungscope/params.hpp"
#include "rungscope/simulation.hpp"

namespace rungscope {

/// Single-mode cluster run against the exact model, both started from the
/// coherent state alpha with the dot down. Errors are sup-norm relative:
/// max_t |cluster - exact| / max_t |exact|.
struct EquivalenceReport {
  std::vector<double> t;
  std::vector<cplx> beta_exact, beta_cluster;
  std::vector<double> f_exact, f_cluster;
  std::vector<double> n_exact, n_cluster;
  double error_beta = 0.0;
  double error_f = 0.0;
  double error_n = 0.0;
};

/// Requires config.gamma_cav == 0 (the single-mode cluster model is closed).
EquivalenceReport compare_single_mode(const OracleConfig& config, double alpha,
                                      double t_end, double dt, int record_every = 1);

/// Sup-norm relative distance used by compare_single_mode.
double sup_relative_error(const std::vector<double>& exact, const std::vector<double>& approx);
double sup_relative_error(const std::vector<cplx>& exact, const std::vector<cplx>& approx);

/// Factorization audit of the standard second-rung drive: the exact model
/// with the system's g, delta, gamma_P and gamma_cav is driven by the
/// resolved pump through the cavity loss channel up to the setup horizon.
FactorizationReport factorization_audit(const SystemParams& params,
                                        const SimulationSetup& setup, int n_max);

}  // namespace rungscope
