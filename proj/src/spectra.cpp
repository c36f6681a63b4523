#include "rungscope/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace rungscope {

Eigen::VectorXd intensity_spectrum(const CorrelationState& state, IntensityMode mode) {
  Eigen::VectorXd out = state.n.diagonal().real();
  if (mode == IntensityMode::total) out += state.beta.cwiseAbs2();
  return out;
}

std::vector<std::optional<double>> g2_spectrum(const CorrelationState& state, double floor,
                                               const Eigen::VectorXd* correction) {
  std::vector<std::optional<double>> g2(static_cast<std::size_t>(state.modes()));
  for (Eigen::Index q = 0; q < state.modes(); ++q) {
    const double n = state.n(q, q).real();
    if (n < floor) continue;
    double numerator = 2.0 * n * n + std::norm(state.s(q, q));
    if (correction != nullptr) numerator += (*correction)[q];
    g2[static_cast<std::size_t>(q)] = numerator / (n * n);
  }
  return g2;
}

Spectrum make_spectrum(const ModeGrid& grid, const CorrelationState& state,
                       IntensityMode mode, double floor) {
  return {grid.omega, intensity_spectrum(state, mode), g2_spectrum(state, floor)};
}

std::vector<Peak> find_peaks(const Eigen::VectorXd& omega, const Eigen::VectorXd& values,
                             double min_prominence) {
  std::vector<Peak> peaks;
  const Eigen::Index n = values.size();
  if (n < 3) return peaks;
  const double top = values.maxCoeff();
  if (!(top > 0.0)) return peaks;

  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double h = values[i];
    if (!(h > values[i - 1] && h >= values[i + 1])) continue;
    // Walk outwards until higher ground; the prominence is measured from the
    // higher of the two lowest points passed on the way.
    double left_min = h;
    Eigen::Index j = i - 1;
    for (; j >= 0 && values[j] <= h; --j) left_min = std::min(left_min, values[j]);
    double right_min = h;
    Eigen::Index k = i + 1;
    for (; k < n && values[k] <= h; ++k) right_min = std::min(right_min, values[k]);
    const double prominence = h - std::max(left_min, right_min);
    if (prominence < min_prominence * top) continue;

    const double y0 = values[i - 1], y1 = h, y2 = values[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
    shift = std::clamp(shift, -0.5, 0.5);
    const double step = 0.5 * (omega[i + 1] - omega[i - 1]);
    peaks.push_back({omega[i] + shift * step, h - 0.25 * (y0 - y2) * shift, prominence});
  }
  return peaks;
}

double sample(const Eigen::VectorXd& omega, const Eigen::VectorXd& values, double offset) {
  const Eigen::Index n = omega.size();
  if (n == 0) return 0.0;
  if (offset <= omega[0]) return values[0];
  if (offset >= omega[n - 1]) return values[n - 1];
  const auto it = std::upper_bound(omega.data(), omega.data() + n, offset);
  const Eigen::Index hi = it - omega.data();
  const Eigen::Index lo = hi - 1;
  const double x = (offset - omega[lo]) / (omega[hi] - omega[lo]);
  return (1.0 - x) * values[lo] + x * values[hi];
}

std::optional<double> g2_near(const Spectrum& spectrum, double offset) {
  if (spectrum.size() == 0) return std::nullopt;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < spectrum.size(); ++i) {
    if (std::abs(spectrum.omega[i] - offset) < std::abs(spectrum.omega[best] - offset)) best = i;
  }
  return spectrum.g2[static_cast<std::size_t>(best)];
}

}  // namespace rungscope
