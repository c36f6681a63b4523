#pragma once

#include <Eigen/Core>
#include <complex>

namespace rungscope {

using cplx = std::complex<double>;

/// Discretized outside-mode continuum. Frequencies are offsets from
/// omega_c; the weights sample a Lorentzian of half width gamma_cav and sum
/// to one.
struct ModeGrid {
  Eigen::VectorXd omega;
  Eigen::VectorXd weights;
  double d_omega = 0.0;
  double gamma_cav = 0.0;

  Eigen::Index size() const { return omega.size(); }
  double half_width() const;
  /// Index of the mode closest to the given offset.
  Eigen::Index nearest(double offset) const;
};

struct CouplingSet {
  Eigen::VectorXd F;  // real, nonnegative
};

struct PumpSpec {
  double carrier = 0.0;  // offset from omega_c
  double sigma = 0.0;    // std of the Gaussian amplitude spectrum
  double alpha = 0.0;    // sum_q |beta_q(0)|^2 = alpha^2
  double t_peak = 0.0;   // arrival of the envelope maximum
};

/// Fraction of a continuous Lorentzian's norm lying outside +-half_width.
double lorentzian_tail_fraction(double gamma_cav, double half_width);

/// Uniform symmetric grid of n_modes points over [-half_width, half_width].
/// Throws ConfigError when n_modes < 16 or the Lorentzian tail cut off by
/// half_width exceeds 5 % of the norm.
ModeGrid build_mode_grid(double gamma_cav, double half_width, int n_modes);

/// One mode at the cavity resonance carrying all the weight; used to compare
/// the cluster equations against the single-mode oracle.
ModeGrid single_mode_grid();

/// F_q = g sqrt(w_q).
CouplingSet coupling_constants(const ModeGrid& grid, double g);

/// beta_q(0) = alpha G_q exp(i omega_q t_peak) with G_q a normalized Gaussian
/// of standard deviation sigma (the intensity spectrum is narrower by sqrt 2).
/// Throws ConfigError if the carrier lies outside the grid or sigma is not
/// resolved (sigma < 2 d_omega).
Eigen::VectorXcd synth_pump(const ModeGrid& grid, const PumpSpec& spec);

/// Free-field amplitude envelope of the pump at time t, normalized to 1 at
/// t_peak: exp(-sigma^2 (t - t_peak)^2 / 2).
double pump_envelope(const PumpSpec& spec, double t);

/// Omega = sum_q F_q beta_q. Throws std::invalid_argument on length mismatch.
cplx classical_rabi(const CouplingSet& couplings, const Eigen::VectorXcd& beta);

}  // namespace rungscope
