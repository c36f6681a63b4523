#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "rungscope/jc_analytics.hpp"
#include "rungscope/mode_field.hpp"

namespace rungscope {

/// Single cavity mode (Fock cutoff n_max) coupled to one two-level dot, with
/// cavity loss at rate 2 gamma_cav and pure dot dephasing at rate 2 gamma_P.
struct OracleConfig {
  int n_max = 4;
  double g = 1.0;
  double delta = 0.0;
  double gamma_P = 0.0;
  double gamma_cav = 0.0;
};

enum class DotLevel { down = 0, up = 1 };

/// Density matrix over dot (x) Fock, index = dot * (n_max + 1) + photons.
struct OracleState {
  int n_max = 0;
  Eigen::MatrixXcd rho;

  Eigen::Index dim() const { return rho.rows(); }
};

Eigen::Index basis_index(int n_max, int photons, DotLevel dot);
OracleState fock_state(int n_max, int photons, DotLevel dot);
OracleState coherent_state(int n_max, cplx alpha, DotLevel dot = DotLevel::down);
/// Projector onto the normalized pure state with the given basis amplitudes.
OracleState pure_state(int n_max, const Eigen::VectorXcd& amplitudes);

double population(const OracleState& state, int photons, DotLevel dot);

/// Sorted eigenvalues of the closed-system rotating-wave Hamiltonian.
/// Throws std::domain_error if n_max < 1.
std::vector<double> dressed_spectrum(const OracleConfig& config);

struct DressedLevel {
  int excitations = 0;  // photons + dot excitation of the eigenvector
  double energy = 0.0;
};
std::vector<DressedLevel> dressed_levels(const OracleConfig& config);

/// The two levels of the complete k-excitation manifold (k <= n_max), from
/// the full diagonalization.
RungEnergies manifold_doublet(const OracleConfig& config, int k);

/// Classical drive amplitude: H_drive = eps(t) a^dag + eps(t)^* a.
using OracleDrive = std::function<cplx(double t)>;

/// Drive that injects a Gaussian pulse of total photon number alpha^2 through
/// the cavity loss channel: eps(t) = sqrt(2 gamma_cav) b_in(t).
OracleDrive pulse_drive(double gamma_cav, const PumpSpec& pump);

struct OracleTrajectory {
  std::vector<double> t;
  std::vector<OracleState> states;
};

/// Lindblad evolution with RK4. Throws ConfigError when
/// dt > 0.02 / max(g, gamma_cav, gamma_P, |delta|) and NumericalError when the
/// trace drifts by more than 1e-6.
OracleTrajectory evolve(const OracleConfig& config, const OracleState& initial,
                        double t_end, double dt, const OracleDrive& drive = {},
                        int record_every = 1);

struct OracleMoments {
  cplx mean_B;
  double photon_number = 0.0;  // <B^dag B>
  double n_corr = 0.0;         // <B^dag B> - |<B>|^2
  cplx s_corr;                 // <B B> - <B>^2
  double four_point = 0.0;     // <B^dag B^dag B B>
  /// <dB^dag dB^dag dB dB> with dB = B - <B>.
  double fluct_four_point = 0.0;
  /// Unset when <B^dag B> = 0.
  std::optional<double> g2;
  cplx P;       // <sigma_->
  double f = 0.0;  // excited-state population
};

OracleMoments moments(const OracleState& state);

struct FactorizationReport {
  std::vector<double> t;
  std::vector<double> exact;       // <dB^dag dB^dag dB dB>
  std::vector<double> factorized;  // 2 n^2 + |s|^2
  std::vector<double> deviation;   // relative
  double max_deviation = 0.0;
  double deviation_at_peak = 0.0;  // at the largest exact value
};

struct DriveScenario {
  PumpSpec pump;
  double t_end = 0.0;
  double dt = 0.0;
  int record_every = 1;
};

/// Exact fluctuation four-point function versus its Gaussian factorization
/// from the same state's doublets, along a driven oracle run started from
/// vacuum with the dot down.
FactorizationReport factorization_error(const OracleConfig& config,
                                        const DriveScenario& scenario);

/// Relative deviation of a factorized value; 0 when both vanish.
double relative_deviation(double exact, double approx);

}  // namespace rungscope
