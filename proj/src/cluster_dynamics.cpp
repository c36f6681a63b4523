#include "rungscope/cluster_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rungscope/errors.hpp"

namespace rungscope {

namespace {

constexpr cplx kI{0.0, 1.0};

inline cplx minus_i(cplx z) { return {z.imag(), -z.real()}; }

void resize_like(CorrelationState& out, Eigen::Index n) {
  if (out.beta.size() == n && out.s.rows() == n) return;
  out = CorrelationState::zeros(n);
}

// out = y + h * k
void combine(const CorrelationState& y, double h, const CorrelationState& k,
             CorrelationState& out) {
  const Eigen::Index n = y.modes();
  resize_like(out, n);
  out.t = y.t + h;
  out.beta = y.beta + h * k.beta;
  out.P = y.P + h * k.P;
  out.f_e = y.f_e + h * k.f_e;
  out.f_h = y.f_h + h * k.f_h;
  out.Pi = y.Pi + h * k.Pi;
  out.Theta = y.Theta + h * k.Theta;
  out.Phi = y.Phi + h * k.Phi;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n; ++c) {
    out.s.col(c) = y.s.col(c) + h * k.s.col(c);
    out.n.col(c) = y.n.col(c) + h * k.n.col(c);
  }
}

// acc += h * k (time untouched)
void accumulate(CorrelationState& acc, double h, const CorrelationState& k) {
  const Eigen::Index n = acc.modes();
  acc.beta += h * k.beta;
  acc.P += h * k.P;
  acc.f_e += h * k.f_e;
  acc.f_h += h * k.f_h;
  acc.Pi += h * k.Pi;
  acc.Theta += h * k.Theta;
  acc.Phi += h * k.Phi;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n; ++c) {
    acc.s.col(c) += h * k.s.col(c);
    acc.n.col(c) += h * k.n.col(c);
  }
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

CorrelationState CorrelationState::zeros(Eigen::Index modes) {
  CorrelationState z;
  z.beta = Eigen::VectorXcd::Zero(modes);
  z.s = Eigen::MatrixXcd::Zero(modes, modes);
  z.n = Eigen::MatrixXcd::Zero(modes, modes);
  z.Pi = Eigen::VectorXcd::Zero(modes);
  z.Theta = Eigen::VectorXcd::Zero(modes);
  z.Phi = Eigen::VectorXcd::Zero(modes);
  return z;
}

DynamicsModel make_model(const SystemParams& params, const ModeGrid& grid,
                         const CouplingSet& couplings) {
  if (grid.size() != couplings.F.size()) {
    throw std::invalid_argument("grid and coupling set differ in length");
  }
  DynamicsModel m;
  m.omega = grid.omega;
  m.F = couplings.F;
  m.delta = params.delta;
  m.gamma_P = params.gamma_P;
  return m;
}

CorrelationState init_state(const SystemParams& params, const ModeGrid& grid,
                            const CouplingSet& couplings, const PumpSpec& pump) {
  (void)params;
  if (grid.size() != couplings.F.size()) {
    throw std::invalid_argument("grid and coupling set differ in length");
  }
  auto state = CorrelationState::zeros(grid.size());
  state.beta = synth_pump(grid, pump);
  return state;
}

// Equations of motion, rotating frame at omega_c, hbar = 1, f = f_e + f_h,
// N = f/2 (two-level dot), blocking factor b = 1 - f_e - f_h:
//   i d beta_q  = w_q beta_q + F_q P
//   i d P       = (D - i gP) P + b Omega - sum F Phi
//   d f_{e,h}   = 2 Im[P* Omega + sum F Theta*]
//   i d s_qk    = (w_q + w_k) s_qk + F_q Pi_k + F_k Pi_q
//   i d n_qk    = (w_k - w_q) n_qk + F_k Theta_q - F_q Theta*_k
//   i d Pi_q    = (w_q + D - i gP) Pi_q + b S_q - Omega Phi_q - F_q P^2
//                 - 2 (Theta*_q sum F Pi + Pi_q sum F Theta*)
//   i d Theta_q = (D - w_q - i gP) Theta_q + b M*_q - Omega Phi*_q
//                 - F_q (N - |P|^2) - 2 (Pi*_q sum F Pi + Theta_q sum F Theta*)
//   i d Phi_q   = w_q Phi_q - 2 F_q P N + 2 P* S_q - 2 P M_q
//                 + 2 Omega Theta*_q - 2 Omega* Pi_q
// with S_q = sum_k F_k s_kq and M_q = sum_k F_k n_kq. Theta picks up
// sum_k F_k n_qk, which is M*_q because n is Hermitian.
void derivatives(const CorrelationState& y, const DynamicsModel& m,
                 CorrelationState& rate) {
  const Eigen::Index n = y.modes();
  resize_like(rate, n);
  rate.t = 1.0;

  const auto& w = m.omega;
  const auto& F = m.F;
  const double blocking = 1.0 - y.f_e - y.f_h;
  const double occupation = 0.5 * (y.f_e + y.f_h);

  cplx omega_r{0.0, 0.0}, f_pi{0.0, 0.0}, f_theta_c{0.0, 0.0}, f_phi{0.0, 0.0};
  for (Eigen::Index q = 0; q < n; ++q) {
    omega_r += F[q] * y.beta[q];
    f_pi += F[q] * y.Pi[q];
    f_theta_c += F[q] * std::conj(y.Theta[q]);
    f_phi += F[q] * y.Phi[q];
  }

  // One pass per column: contract the column with F and write its derivative.
  Eigen::VectorXcd S(n), M(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n; ++c) {
    const cplx* sc = y.s.col(c).data();
    const cplx* nc = y.n.col(c).data();
    cplx* dsc = rate.s.col(c).data();
    cplx* dnc = rate.n.col(c).data();
    const double wc = w[c];
    const double Fc = F[c];
    const cplx pi_c = y.Pi[c];
    const cplx theta_c = y.Theta[c];
    const cplx theta_cc = std::conj(theta_c);
    cplx s_sum{0.0, 0.0}, m_sum{0.0, 0.0};
    for (Eigen::Index q = 0; q < n; ++q) {
      s_sum += F[q] * sc[q];
      m_sum += F[q] * nc[q];
      dsc[q] = minus_i((w[q] + wc) * sc[q] + (F[q] * pi_c + Fc * y.Pi[q]));
      dnc[q] = minus_i((wc - w[q]) * nc[q] + (Fc * y.Theta[q] - F[q] * theta_cc));
    }
    S[c] = s_sum;
    M[c] = m_sum;
  }

  const cplx P = y.P;
  const cplx P2 = m.polarization_square_source ? P * P : cplx{0.0, 0.0};
  const cplx Pc = std::conj(P);
  const cplx omega_c = std::conj(omega_r);
  const double incoherent = occupation - std::norm(P);
  for (Eigen::Index q = 0; q < n; ++q) {
    const cplx pi = y.Pi[q];
    const cplx th = y.Theta[q];
    const cplx ph = y.Phi[q];
    rate.beta[q] = minus_i(w[q] * y.beta[q] + F[q] * P);
    rate.Pi[q] = minus_i(cplx{w[q] + m.delta, -m.gamma_P} * pi + blocking * S[q] -
                         omega_r * ph - F[q] * P2 -
                         2.0 * (std::conj(th) * f_pi + pi * f_theta_c));
    rate.Theta[q] = minus_i(cplx{m.delta - w[q], -m.gamma_P} * th + blocking * std::conj(M[q]) -
                            omega_r * std::conj(ph) - F[q] * incoherent -
                            2.0 * (std::conj(pi) * f_pi + th * f_theta_c));
    rate.Phi[q] = minus_i(w[q] * ph - 2.0 * F[q] * P * occupation + 2.0 * Pc * S[q] -
                          2.0 * P * M[q] + 2.0 * omega_r * std::conj(th) -
                          2.0 * omega_c * pi);
  }
  rate.P = minus_i(cplx{m.delta, -m.gamma_P} * P + blocking * omega_r - f_phi);
  const double df = 2.0 * std::imag(Pc * omega_r + f_theta_c);
  rate.f_e = df;
  rate.f_h = df;

  if (m.triplet) m.triplet(y, m, rate);
}

CorrelationState derivatives(const CorrelationState& state, const DynamicsModel& model) {
  CorrelationState rate;
  derivatives(state, model, rate);
  return rate;
}

CorrelationState derivatives_reference(const CorrelationState& y,
                                       const DynamicsModel& m) {
  const Eigen::Index n = y.modes();
  const Eigen::VectorXcd Fc = m.F.cast<cplx>();
  const Eigen::VectorXcd w = m.omega.cast<cplx>();
  const double b = 1.0 - y.f_e - y.f_h;
  const double N = 0.5 * (y.f_e + y.f_h);

  const cplx Omega = (Fc.array() * y.beta.array()).sum();
  const cplx sumFPi = (Fc.array() * y.Pi.array()).sum();
  const cplx sumFThetaC = (Fc.array() * y.Theta.conjugate().array()).sum();
  const cplx sumFPhi = (Fc.array() * y.Phi.array()).sum();
  const Eigen::VectorXcd S = y.s * Fc;  // s symmetric
  const Eigen::VectorXcd M = y.n.transpose() * Fc;
  const Eigen::VectorXcd Mrow = y.n * Fc;
  const cplx P = y.P;
  const cplx P2 = m.polarization_square_source ? P * P : cplx{};

  CorrelationState r = CorrelationState::zeros(n);
  r.t = 1.0;
  r.beta = -kI * (w.array() * y.beta.array() + Fc.array() * P).matrix();
  r.P = -kI * ((m.delta - kI * m.gamma_P) * P + b * Omega - sumFPhi);
  r.f_e = r.f_h = 2.0 * std::imag(std::conj(P) * Omega + sumFThetaC);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index k = 0; k < n; ++k) {
      r.s(q, k) = -kI * ((m.omega[q] + m.omega[k]) * y.s(q, k) + m.F[q] * y.Pi[k] +
                         m.F[k] * y.Pi[q]);
      r.n(q, k) = -kI * ((m.omega[k] - m.omega[q]) * y.n(q, k) +
                         m.F[k] * y.Theta[q] - m.F[q] * std::conj(y.Theta[k]));
    }
    const cplx pi = y.Pi[q], th = y.Theta[q], ph = y.Phi[q];
    r.Pi[q] = -kI * ((m.omega[q] + m.delta - kI * m.gamma_P) * pi + b * S[q] -
                     Omega * ph - m.F[q] * P2 -
                     2.0 * (std::conj(th) * sumFPi + pi * sumFThetaC));
    r.Theta[q] = -kI * ((m.delta - m.omega[q] - kI * m.gamma_P) * th + b * Mrow[q] -
                        Omega * std::conj(ph) - m.F[q] * (N - std::norm(P)) -
                        2.0 * (std::conj(pi) * sumFPi + th * sumFThetaC));
    r.Phi[q] = -kI * (m.omega[q] * ph - 2.0 * m.F[q] * P * N + 2.0 * std::conj(P) * S[q] -
                      2.0 * P * M[q] + 2.0 * Omega * std::conj(th) -
                      2.0 * std::conj(Omega) * pi);
  }
  if (m.triplet) m.triplet(y, m, r);
  return r;
}

double symmetry_defect(const CorrelationState& st) {
  double worst = 0.0;
  const Eigen::Index n = st.modes();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      worst = std::max(worst, std::abs(st.s(r, c) - st.s(c, r)));
      worst = std::max(worst, std::abs(st.n(r, c) - std::conj(st.n(c, r))));
    }
  }
  return worst;
}

void enforce_symmetry(CorrelationState& st) {
  const Eigen::Index n = st.modes();
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      const cplx sa = 0.5 * (st.s(r, c) + st.s(c, r));
      st.s(r, c) = sa;
      st.s(c, r) = sa;
      const cplx na = 0.5 * (st.n(r, c) + std::conj(st.n(c, r)));
      st.n(r, c) = na;
      st.n(c, r) = std::conj(na);
    }
    st.n(c, c) = {st.n(c, c).real(), 0.0};
  }
}

double excitation_balance(const CorrelationState& st) {
  double total = 0.5 * (st.f_e + st.f_h);
  for (Eigen::Index q = 0; q < st.modes(); ++q) {
    total += std::norm(st.beta[q]) + st.n(q, q).real();
  }
  return total;
}

void check_finite(const CorrelationState& st) {
  struct Field {
    const char* name;
    double magnitude;
    bool finite;
  };
  auto vec = [](const char* name, const auto& v) {
    const bool finite = v.allFinite();
    return Field{name, finite ? max_abs(v) : INFINITY, finite};
  };
  const Field fields[] = {
      vec("beta", st.beta),
      {"P", std::abs(st.P), std::isfinite(std::abs(st.P))},
      {"f_e", std::abs(st.f_e), std::isfinite(st.f_e)},
      {"f_h", std::abs(st.f_h), std::isfinite(st.f_h)},
      vec("Pi", st.Pi),
      vec("Theta", st.Theta),
      vec("Phi", st.Phi),
      vec("s", st.s.diagonal()),
      vec("n", st.n.diagonal()),
  };
  const Field* bad = nullptr;
  double largest = 0.0;
  for (const auto& f : fields) {
    if (!f.finite && bad == nullptr) bad = &f;
    if (f.finite) largest = std::max(largest, f.magnitude);
  }
  if (bad != nullptr) {
    std::ostringstream os;
    os << "numerical blowup at t=" << st.t << " ns in field " << bad->name;
    throw NumericalError(os.str(), st.t, bad->name, largest);
  }
}

void Rk4Stepper::step(CorrelationState& y, double dt, const DynamicsModel& model) {
  derivatives(y, model, k_);
  combine(y, dt / 6.0, k_, acc_);
  combine(y, dt / 2.0, k_, tmp_);
  derivatives(tmp_, model, k_);
  accumulate(acc_, dt / 3.0, k_);
  combine(y, dt / 2.0, k_, tmp_);
  derivatives(tmp_, model, k_);
  accumulate(acc_, dt / 3.0, k_);
  combine(y, dt, k_, tmp_);
  derivatives(tmp_, model, k_);
  accumulate(acc_, dt / 6.0, k_);
  acc_.t = y.t + dt;
  std::swap(y, acc_);
  enforce_symmetry(y);
}

CorrelationState step_rk4(const CorrelationState& state, double dt,
                          const DynamicsModel& model) {
  CorrelationState out = state;
  Rk4Stepper stepper;
  stepper.step(out, dt, model);
  return out;
}

double max_stable_dt(const DynamicsModel& model) {
  double fastest = std::max(model.coupling(), model.gamma_P);
  if (model.omega.size() > 0) fastest = std::max(fastest, model.omega.cwiseAbs().maxCoeff());
  return 0.02 / fastest;
}

void check_integrator(const IntegratorConfig& config, const DynamicsModel& model) {
  if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(config.t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (config.record_every < 1) throw ConfigError("record_every must be >= 1");
  const double bound = max_stable_dt(model);
  if (config.dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << config.dt << " ns exceeds the stability bound " << bound << " ns";
    throw ConfigError(os.str());
  }
}

double Trajectory::excitation_drift() const {
  if (excitation_initial == 0.0) return std::abs(excitation_final);
  return std::abs(excitation_final - excitation_initial) / excitation_initial;
}

Trajectory run(CorrelationState state, const IntegratorConfig& config,
               const DynamicsModel& model, const std::optional<PumpSpec>& pump,
               const Observer& observer) {
  check_integrator(config, model);
  Trajectory traj;
  const long steps =
      config.t_end > 0.0 ? static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9)) : 0;
  const double dt = steps > 0 ? config.t_end / static_cast<double>(steps) : config.dt;
  const double t0 = state.t;
  traj.dt_used = dt;
  traj.excitation_initial = excitation_balance(state);

  long peak_step = -1;
  if (pump) {
    const double k = std::round((pump->t_peak - t0) / dt);
    if (k >= 0.0 && k <= static_cast<double>(steps)) peak_step = static_cast<long>(k);
  }

  auto record = [&](const CorrelationState& st) {
    Snapshot snap;
    snap.t = st.t;
    snap.f_e = st.f_e;
    snap.f_h = st.f_h;
    snap.polarization = std::abs(st.P);
    snap.pump_envelope = pump ? pump_envelope(*pump, st.t) : 0.0;
    snap.excitation = excitation_balance(st);
    traj.records.push_back(snap);
    if (observer) observer(st);
  };

  Rk4Stepper stepper;
  record(state);
  if (peak_step == 0) traj.pump_peak_state = state;
  for (long i = 1; i <= steps; ++i) {
    stepper.step(state, dt, model);
    state.t = t0 + static_cast<double>(i) * dt;
    try {
      check_finite(state);
    } catch (const NumericalError& e) {
      traj.failure = BlowupInfo{e.time(), e.field(), e.magnitude(), e.what()};
      break;
    }
    if (i == peak_step) traj.pump_peak_state = state;
    if (i % config.record_every == 0 || i == steps) record(state);
  }
  traj.excitation_final = excitation_balance(state);
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace rungscope
