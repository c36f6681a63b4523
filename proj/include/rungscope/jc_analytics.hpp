#pragma once

#include <complex>

namespace rungscope {

/// Dressed doublet of the k-excitation Jaynes-Cummings manifold (k = 1 is the
/// vacuum Rabi doublet). Offsets are relative to the manifold centre.
struct RungEnergies {
  int rung_index = 0;
  double lower = 0.0;
  double upper = 0.0;

  double splitting() const { return upper - lower; }
};

/// Optimum pump carrier and the two second-rung emission lines, as offsets
/// from omega_c.
struct PumpResonance {
  double optimum_pump = 0.0;
  double emission_lower = 0.0;
  double emission_upper = 0.0;
};

/// Zero-detuning ladder, +-g sqrt(k). Throws std::domain_error for k < 1.
RungEnergies dressed_energies(int k, double g);

PumpResonance pump_resonance(double g, double delta);

/// |alpha|^(2n) e^(-|alpha|^2) / n!, the Fock-n weight of a coherent state.
double poisson_occupation(std::complex<double> alpha, int n);

/// Two-photon weight |alpha|^4/2 e^(-|alpha|^2).
inline double two_photon_occupation(std::complex<double> alpha) {
  return poisson_occupation(alpha, 2);
}

}  // namespace rungscope
