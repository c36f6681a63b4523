#include "rungscope/mode_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rungscope/errors.hpp"

namespace rungscope {

double ModeGrid::half_width() const {
  if (omega.size() == 0) return 0.0;
  return std::max(std::abs(omega[0]), std::abs(omega[omega.size() - 1]));
}

Eigen::Index ModeGrid::nearest(double offset) const {
  Eigen::Index best = 0;
  double best_dist = std::abs(omega[0] - offset);
  for (Eigen::Index i = 1; i < omega.size(); ++i) {
    const double dist = std::abs(omega[i] - offset);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

double lorentzian_tail_fraction(double gamma_cav, double half_width) {
  return 1.0 - 2.0 / std::numbers::pi * std::atan(half_width / gamma_cav);
}

ModeGrid build_mode_grid(double gamma_cav, double half_width, int n_modes) {
  if (n_modes < 16) throw ConfigError("mode_count must be >= 16");
  if (!(gamma_cav > 0.0)) throw ConfigError("gamma_cav must be > 0");
  const double tail = lorentzian_tail_fraction(gamma_cav, half_width);
  if (!(half_width > 0.0) || tail > 0.05) {
    std::ostringstream os;
    os << "grid half width " << half_width << " GHz truncates "
       << 100.0 * tail << "% of the cavity Lorentzian (limit 5%)";
    throw ConfigError(os.str());
  }

  ModeGrid grid;
  grid.gamma_cav = gamma_cav;
  grid.d_omega = 2.0 * half_width / (n_modes - 1);
  grid.omega.resize(n_modes);
  grid.weights.resize(n_modes);
  const double g2 = gamma_cav * gamma_cav;
  for (int i = 0; i < n_modes; ++i) {
    // Mirror-exact grid: omega[i] == -omega[n-1-i].
    const int j = i - (n_modes - 1) / 2;
    const double w = (n_modes % 2 == 1) ? j * grid.d_omega
                                        : (i - 0.5 * (n_modes - 1)) * grid.d_omega;
    grid.omega[i] = w;
    grid.weights[i] = g2 / (w * w + g2);
  }
  grid.weights /= grid.weights.sum();
  return grid;
}

ModeGrid single_mode_grid() {
  ModeGrid grid;
  grid.omega = Eigen::VectorXd::Zero(1);
  grid.weights = Eigen::VectorXd::Ones(1);
  grid.d_omega = 0.0;
  grid.gamma_cav = 0.0;
  return grid;
}

CouplingSet coupling_constants(const ModeGrid& grid, double g) {
  return {g * grid.weights.cwiseSqrt()};
}

Eigen::VectorXcd synth_pump(const ModeGrid& grid, const PumpSpec& spec) {
  const auto n = grid.size();
  if (n == 0) return {};
  if (spec.carrier < grid.omega[0] || spec.carrier > grid.omega[n - 1]) {
    throw ConfigError("pump carrier lies outside the mode grid");
  }
  if (!(spec.sigma > 0.0) || spec.sigma < 2.0 * grid.d_omega) {
    throw ConfigError("pump sigma must be >= 2 grid spacings to be resolved");
  }
  if (spec.t_peak < 0.0) throw ConfigError("pump t_peak must be >= 0");

  Eigen::VectorXd profile(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    const double x = grid.omega[q] - spec.carrier;
    profile[q] = std::exp(-x * x / (2.0 * spec.sigma * spec.sigma));
  }
  profile /= profile.norm();

  Eigen::VectorXcd beta(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    beta[q] = spec.alpha * profile[q] * std::polar(1.0, grid.omega[q] * spec.t_peak);
  }
  return beta;
}

double pump_envelope(const PumpSpec& spec, double t) {
  const double x = spec.sigma * (t - spec.t_peak);
  return std::exp(-0.5 * x * x);
}

cplx classical_rabi(const CouplingSet& couplings, const Eigen::VectorXcd& beta) {
  if (couplings.F.size() != beta.size()) {
    throw std::invalid_argument("coupling and amplitude arrays differ in length");
  }
  cplx sum{0.0, 0.0};
  for (Eigen::Index q = 0; q < beta.size(); ++q) sum += couplings.F[q] * beta[q];
  return sum;
}

}  // namespace rungscope
