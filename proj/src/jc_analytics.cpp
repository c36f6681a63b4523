#include "rungscope/jc_analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace rungscope {

RungEnergies dressed_energies(int k, double g) {
  if (k < 1) throw std::domain_error("rung index must be >= 1");
  const double half = g * std::sqrt(static_cast<double>(k));
  return {k, -half, half};
}

PumpResonance pump_resonance(double g, double delta) {
  const double outer = std::sqrt(delta * delta + 8.0 * g * g);
  const double inner = std::sqrt(delta * delta + 4.0 * g * g);
  return {(delta + outer) / 4.0, (outer - inner) / 2.0, (outer + inner) / 2.0};
}

double poisson_occupation(std::complex<double> alpha, int n) {
  if (n < 0) return 0.0;
  const double mean = std::norm(alpha);
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

}  // namespace rungscope
