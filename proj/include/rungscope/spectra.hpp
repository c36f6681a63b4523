#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/mode_field.hpp"

namespace rungscope {

enum class IntensityMode {
  incoherent,  // n_qq: off-axis detection, the pump beam is excluded
  total,       // n_qq + |beta_q|^2
};

inline constexpr double kDefaultG2Floor = 1e-12;

struct Spectrum {
  Eigen::VectorXd omega;
  Eigen::VectorXd intensity;
  /// Unset where n_qq is below the division floor.
  std::vector<std::optional<double>> g2;

  Eigen::Index size() const { return omega.size(); }
};

Eigen::VectorXd intensity_spectrum(const CorrelationState& state, IntensityMode mode);

/// (2 n_qq^2 + |s_qq|^2 + correction_q) / n_qq^2 per mode.
std::vector<std::optional<double>> g2_spectrum(
    const CorrelationState& state, double floor = kDefaultG2Floor,
    const Eigen::VectorXd* four_point_correction = nullptr);

Spectrum make_spectrum(const ModeGrid& grid, const CorrelationState& state,
                       IntensityMode mode = IntensityMode::incoherent,
                       double floor = kDefaultG2Floor);

struct Peak {
  double offset = 0.0;  // parabolic refinement of the maximum
  double height = 0.0;
  double prominence = 0.0;
};

/// Local maxima whose topographic prominence is at least
/// min_prominence * max(values), sorted by offset.
std::vector<Peak> find_peaks(const Eigen::VectorXd& omega, const Eigen::VectorXd& values,
                             double min_prominence);

/// Linear interpolation of values(omega) at offset (clamped to the ends).
double sample(const Eigen::VectorXd& omega, const Eigen::VectorXd& values, double offset);

/// g2 at the grid mode nearest to offset.
std::optional<double> g2_near(const Spectrum& spectrum, double offset);

}  // namespace rungscope
