#include "rungscope/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rungscope/errors.hpp"

namespace rungscope {

namespace {

struct Operators {
  Eigen::MatrixXcd a, ad, sm, sp, dot_n, exc;
};

Operators make_operators(int n_max) {
  const int nf = n_max + 1;
  const int dim = 2 * nf;
  Operators op;
  op.a = Eigen::MatrixXcd::Zero(dim, dim);
  op.sm = Eigen::MatrixXcd::Zero(dim, dim);
  for (int d = 0; d < 2; ++d) {
    for (int k = 1; k < nf; ++k) {
      op.a(d * nf + k - 1, d * nf + k) = std::sqrt(static_cast<double>(k));
    }
  }
  for (int k = 0; k < nf; ++k) op.sm(k, nf + k) = 1.0;
  op.ad = op.a.adjoint();
  op.sp = op.sm.adjoint();
  op.dot_n = op.sp * op.sm;
  op.exc = op.ad * op.a + op.dot_n;
  return op;
}

Eigen::MatrixXcd hamiltonian(const OracleConfig& c, const Operators& op) {
  return c.delta * op.dot_n + c.g * (op.ad * op.sm + op.sp * op.a);
}

cplx expect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  return (op * rho).trace();
}

}  // namespace

Eigen::Index basis_index(int n_max, int photons, DotLevel dot) {
  return static_cast<Eigen::Index>(static_cast<int>(dot) * (n_max + 1) + photons);
}

OracleState fock_state(int n_max, int photons, DotLevel dot) {
  if (photons < 0 || photons > n_max) throw std::domain_error("photon number beyond cutoff");
  OracleState st;
  st.n_max = n_max;
  st.rho = Eigen::MatrixXcd::Zero(2 * (n_max + 1), 2 * (n_max + 1));
  const auto i = basis_index(n_max, photons, dot);
  st.rho(i, i) = 1.0;
  return st;
}

OracleState pure_state(int n_max, const Eigen::VectorXcd& amplitudes) {
  if (amplitudes.size() != 2 * (n_max + 1)) {
    throw std::invalid_argument("amplitude vector does not match the basis size");
  }
  const Eigen::VectorXcd psi = amplitudes.normalized();
  return {n_max, psi * psi.adjoint()};
}

OracleState coherent_state(int n_max, cplx alpha, DotLevel dot) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * (n_max + 1));
  cplx term = std::exp(-0.5 * std::norm(alpha));
  for (int k = 0; k <= n_max; ++k) {
    if (k > 0) term *= alpha / std::sqrt(static_cast<double>(k));
    psi[basis_index(n_max, k, dot)] = term;
  }
  // Renormalize the truncated tail.
  return pure_state(n_max, psi);
}

double population(const OracleState& state, int photons, DotLevel dot) {
  const auto i = basis_index(state.n_max, photons, dot);
  return state.rho(i, i).real();
}

std::vector<DressedLevel> dressed_levels(const OracleConfig& config) {
  if (config.n_max < 1) throw std::domain_error("n_max must be >= 1");
  const auto op = make_operators(config.n_max);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian(config, op));
  std::vector<DressedLevel> levels;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(i);
    const double k = (v.adjoint() * op.exc * v)(0, 0).real();
    levels.push_back({static_cast<int>(std::lround(k)), solver.eigenvalues()[i]});
  }
  return levels;
}

std::vector<double> dressed_spectrum(const OracleConfig& config) {
  std::vector<double> e;
  for (const auto& level : dressed_levels(config)) e.push_back(level.energy);
  std::sort(e.begin(), e.end());
  return e;
}

RungEnergies manifold_doublet(const OracleConfig& config, int k) {
  if (k < 1 || k > config.n_max) throw std::domain_error("manifold outside the cutoff");
  std::vector<double> e;
  for (const auto& level : dressed_levels(config)) {
    if (level.excitations == k) e.push_back(level.energy);
  }
  if (e.size() != 2) throw std::logic_error("manifold is not a doublet");
  std::sort(e.begin(), e.end());
  return {k, e[0], e[1]};
}

OracleDrive pulse_drive(double gamma_cav, const PumpSpec& pump) {
  const double norm = pump.alpha * std::pow(2.0 * pump.sigma * pump.sigma / std::numbers::pi, 0.25);
  const double coupling = std::sqrt(2.0 * gamma_cav);
  return [=](double t) {
    const double x = t - pump.t_peak;
    return coupling * norm * std::exp(-pump.sigma * pump.sigma * x * x) *
           std::polar(1.0, -pump.carrier * x);
  };
}

OracleTrajectory evolve(const OracleConfig& config, const OracleState& initial,
                        double t_end, double dt, const OracleDrive& drive,
                        int record_every) {
  const double fastest = std::max({config.g, config.gamma_cav, config.gamma_P,
                                   std::abs(config.delta)});
  if (!(dt > 0.0) || dt > 0.02 / fastest * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "oracle dt=" << dt << " exceeds the bound " << 0.02 / fastest;
    throw ConfigError(os.str());
  }
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  const auto op = make_operators(initial.n_max);
  const Eigen::MatrixXcd H0 = hamiltonian(config, op);
  const Eigen::MatrixXcd La = std::sqrt(2.0 * config.gamma_cav) * op.a;
  const Eigen::MatrixXcd Ld = std::sqrt(2.0 * config.gamma_P) * op.dot_n;
  const Eigen::MatrixXcd loss = 0.5 * (La.adjoint() * La + Ld.adjoint() * Ld);

  auto rhs = [&](double t, const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd H = H0;
    if (drive) {
      const cplx eps = drive(t);
      H += eps * op.ad + std::conj(eps) * op.a;
    }
    const Eigen::MatrixXcd Heff = H - cplx{0.0, 1.0} * loss;
    Eigen::MatrixXcd out = -cplx{0.0, 1.0} * (Heff * rho) + cplx{0.0, 1.0} * (rho * Heff.adjoint());
    out += La * rho * La.adjoint() + Ld * rho * Ld.adjoint();
    return out;
  };

  const long steps = t_end > 0.0 ? static_cast<long>(std::ceil(t_end / dt - 1e-9)) : 0;
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;
  OracleTrajectory traj;
  Eigen::MatrixXcd rho = initial.rho;
  traj.t.push_back(0.0);
  traj.states.push_back(initial);
  for (long i = 1; i <= steps; ++i) {
    const double t = (i - 1) * h;
    const Eigen::MatrixXcd k1 = rhs(t, rho);
    const Eigen::MatrixXcd k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = rhs(t + h, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double drift = std::abs(rho.trace() - 1.0);
    if (!(drift <= 1e-6)) {
      throw NumericalError("oracle trace drifted beyond 1e-6", i * h, "rho", drift);
    }
    if (i % record_every == 0 || i == steps) {
      traj.t.push_back(i * h);
      traj.states.push_back({initial.n_max, rho});
    }
  }
  return traj;
}

OracleMoments moments(const OracleState& state) {
  const auto op = make_operators(state.n_max);
  const auto& rho = state.rho;
  OracleMoments m;
  m.mean_B = expect(rho, op.a);
  m.photon_number = expect(rho, op.ad * op.a).real();
  m.n_corr = m.photon_number - std::norm(m.mean_B);
  m.s_corr = expect(rho, op.a * op.a) - m.mean_B * m.mean_B;
  m.four_point = expect(rho, op.ad * op.ad * op.a * op.a).real();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(state.dim(), state.dim());
  const Eigen::MatrixXcd db = op.a - m.mean_B * id;
  m.fluct_four_point = expect(rho, db.adjoint() * db.adjoint() * db * db).real();
  if (m.photon_number > 0.0) m.g2 = m.four_point / (m.photon_number * m.photon_number);
  m.P = expect(rho, op.sm);
  m.f = expect(rho, op.dot_n).real();
  return m;
}

double relative_deviation(double exact, double approx) {
  if (exact == 0.0 && approx == 0.0) return 0.0;
  if (exact == 0.0) return INFINITY;
  return std::abs(approx - exact) / std::abs(exact);
}

FactorizationReport factorization_error(const OracleConfig& config,
                                        const DriveScenario& scenario) {
  const auto initial = fock_state(config.n_max, 0, DotLevel::down);
  const auto traj = evolve(config, initial, scenario.t_end, scenario.dt,
                           pulse_drive(config.gamma_cav, scenario.pump),
                           scenario.record_every);
  FactorizationReport report;
  double peak = 0.0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto m = moments(traj.states[i]);
    const double fact = 2.0 * m.n_corr * m.n_corr + std::norm(m.s_corr);
    report.t.push_back(traj.t[i]);
    report.exact.push_back(m.fluct_four_point);
    report.factorized.push_back(fact);
    peak = std::max(peak, std::abs(m.fluct_four_point));
  }
  // Samples where the exact value is numerically empty carry no information.
  for (std::size_t i = 0; i < report.t.size(); ++i) {
    const double exact = report.exact[i];
    const bool resolved = std::abs(exact) > 1e-9 * peak;
    const double dev = resolved ? relative_deviation(exact, report.factorized[i]) : 0.0;
    report.deviation.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
    if (peak > 0.0 && std::abs(exact) == peak) report.deviation_at_peak = dev;
  }
  return report;
}

}  // namespace rungscope
