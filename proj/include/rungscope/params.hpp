#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rungscope {

// Internal units: hbar = 1, energies are rates in GHz, times in ns. All
// dynamical frequencies are offsets from the cavity resonance.

/// How a photon energy in eV is expressed as a rate in GHz.
///   ordinary: E / h   (the cavity widths then match the quoted 5-6 GHz)
///   angular:  E / hbar
enum class FrequencyConvention { ordinary, angular };

inline constexpr double kPlanckEvNs = 4.135667696e-6;     // h in eV*ns
inline constexpr double kHbarEvNs = 6.582119569e-7;       // hbar in eV*ns
inline constexpr double kSquareMicronInCm2 = 1.0e-8;

double photon_energy_to_ghz(double energy_eV, FrequencyConvention conv);
std::string_view to_string(FrequencyConvention conv);
FrequencyConvention parse_frequency_convention(std::string_view text);

struct SystemParams {
  std::string name;       // preset name or "custom"
  double g = 0.0;         // collective light-matter coupling
  double omega_c_eV = 0.0;
  double Q = 0.0;
  double gamma_cav = 0.0; // cavity half width
  double gamma_P = 0.0;   // polarization dephasing
  double delta = 0.0;     // E_eh - omega_c
  double n_dot = 0.0;     // cm^-2
  double S = 0.0;         // um^2
  int N_dot = 0;
  double d = 0.0;         // Angstrom * e, carried for provenance only
  FrequencyConvention convention = FrequencyConvention::ordinary;

  bool operator==(const SystemParams&) const = default;
};

struct DerivedParams {
  double tau_rabi = 0.0;  // 1/g
  double tau_cav = 0.0;   // 1/(2 gamma_cav)
  double E_eh = 0.0;      // dot transition offset from omega_c

  bool operator==(const DerivedParams&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

/// Names accepted by load_scenario.
const std::vector<std::string>& scenario_names();

/// Returns one of the three published dot-cavity presets. Q is taken from
/// the preset and gamma_cav is derived from it with the requested
/// convention. gamma_P defaults to the low-dephasing value 0.06 GHz.
/// Throws ConfigError for an unknown name.
SystemParams load_scenario(std::string_view name,
                           FrequencyConvention conv = FrequencyConvention::ordinary);

/// omega_c / (2 Q) in GHz.
double cavity_half_width(double omega_c_eV, double Q, FrequencyConvention conv);
/// omega_c / (2 gamma_cav).
double quality_factor(double omega_c_eV, double gamma_cav, FrequencyConvention conv);

/// round(n_dot * S) with n_dot in cm^-2 and S in um^2.
int dot_count(double n_dot, double S);

DerivedParams derive(const SystemParams& params);

/// Empty when every invariant holds.
std::vector<Violation> validate(const SystemParams& params);

/// Throws ConfigError listing all violations, if any.
void require_valid(const SystemParams& params);

}  // namespace rungscope
