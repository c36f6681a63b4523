#include "rungscope/params.hpp"

#include <cmath>
#include <sstream>

#include "rungscope/errors.hpp"

namespace rungscope {

double photon_energy_to_ghz(double energy_eV, FrequencyConvention conv) {
  switch (conv) {
    case FrequencyConvention::ordinary:
      return energy_eV / kPlanckEvNs;
    case FrequencyConvention::angular:
      return energy_eV / kHbarEvNs;
  }
  return 0.0;
}

std::string_view to_string(FrequencyConvention conv) {
  return conv == FrequencyConvention::ordinary ? "ordinary" : "angular";
}

FrequencyConvention parse_frequency_convention(std::string_view text) {
  if (text == "ordinary") return FrequencyConvention::ordinary;
  if (text == "angular") return FrequencyConvention::angular;
  throw ConfigError("frequency_convention must be 'ordinary' or 'angular', got '" +
                    std::string(text) + "'");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"pillar", "crystal", "disk"};
  return names;
}

double cavity_half_width(double omega_c_eV, double Q, FrequencyConvention conv) {
  return photon_energy_to_ghz(omega_c_eV, conv) / (2.0 * Q);
}

double quality_factor(double omega_c_eV, double gamma_cav,
                      FrequencyConvention conv) {
  return photon_energy_to_ghz(omega_c_eV, conv) / (2.0 * gamma_cav);
}

int dot_count(double n_dot, double S) {
  return static_cast<int>(std::lround(n_dot * S * kSquareMicronInCm2));
}

SystemParams load_scenario(std::string_view name, FrequencyConvention conv) {
  SystemParams p;
  p.name = std::string(name);
  p.d = 5.3;
  p.gamma_P = 0.06;
  p.delta = 0.0;
  p.convention = conv;
  if (name == "pillar") {
    p.n_dot = 1.3e9;
    p.Q = 2.4e4;
    p.omega_c_eV = 1.33;
    p.S = 3.0;
    p.N_dot = 39;
    p.g = 20.0;
  } else if (name == "crystal") {
    p.n_dot = 6.0e9;
    p.Q = 2.2e4;
    p.omega_c_eV = 1.0;
    p.S = 10.0;
    p.N_dot = 600;
    p.g = 22.0;
  } else if (name == "disk") {
    p.n_dot = 1.0e10;
    p.Q = 4.0e5;
    p.omega_c_eV = 1.0;
    p.S = 2.5;
    p.N_dot = 250;
    p.g = 11.0;
  } else {
    throw ConfigError("unknown scenario '" + std::string(name) +
                      "' (valid: pillar, crystal, disk)");
  }
  p.gamma_cav = cavity_half_width(p.omega_c_eV, p.Q, conv);
  return p;
}

DerivedParams derive(const SystemParams& params) {
  DerivedParams out;
  out.tau_rabi = 1.0 / params.g;
  out.tau_cav = 1.0 / (2.0 * params.gamma_cav);
  out.E_eh = params.delta;
  return out;
}

std::vector<Violation> validate(const SystemParams& p) {
  std::vector<Violation> v;
  auto positive = [&](const char* field, double x) {
    if (!(x > 0.0)) v.push_back({field, "must be > 0"});
  };
  auto nonnegative = [&](const char* field, double x) {
    if (!(x >= 0.0)) v.push_back({field, "must be >= 0"});
  };
  positive("g", p.g);
  positive("Q", p.Q);
  positive("gamma_cav", p.gamma_cav);
  nonnegative("gamma_P", p.gamma_P);
  positive("S", p.S);
  nonnegative("n_dot", p.n_dot);
  if (!std::isfinite(p.delta)) v.push_back({"delta", "must be finite"});
  if (p.N_dot < 0) v.push_back({"N_dot", "must be >= 0"});

  if (p.n_dot > 0.0 && p.S > 0.0) {
    const int expected = dot_count(p.n_dot, p.S);
    if (p.N_dot != expected) {
      std::ostringstream os;
      os << "inconsistent with n_dot * S (expected " << expected << ", got "
         << p.N_dot << ")";
      v.push_back({"N_dot", os.str()});
    }
  }

  if (p.Q > 0.0 && p.gamma_cav > 0.0 && p.omega_c_eV > 0.0) {
    const double q_from_width = quality_factor(p.omega_c_eV, p.gamma_cav, p.convention);
    if (std::abs(q_from_width - p.Q) > 0.01 * p.Q) {
      std::ostringstream os;
      os << "Q=" << p.Q << " and gamma_cav=" << p.gamma_cav
         << " GHz disagree by more than 1% (gamma_cav implies Q=" << q_from_width
         << ")";
      v.push_back({"gamma_cav", os.str()});
    }
  } else if (!(p.omega_c_eV > 0.0)) {
    v.push_back({"omega_c_eV", "must be > 0"});
  }
  return v;
}

void require_valid(const SystemParams& params) {
  const auto violations = validate(params);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "invalid system parameters:";
  for (const auto& [field, message] : violations) os << " " << field << ": " << message << ";";
  throw ConfigError(os.str());
}

}  // namespace rungscope
