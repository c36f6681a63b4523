// Exact wavefunction check of the multimode cluster equations: three modes
// and one two-level dot, closed system, Fock cutoff per mode. The cluster
// truncation is exact to leading order in the pump intensity: the doublet
// errors vanish like |alpha|^2, and the singlets (beta, f) one order faster.

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

#include "rungscope/cluster_dynamics.hpp"
#include "rungscope/validation.hpp"

using namespace rungscope;

namespace {

constexpr int kModes = 3;
constexpr int kCut = 5;  // Fock states 0..4 per mode
constexpr int kDim = 2 * kCut * kCut * kCut;

struct ThreeModeSystem {
  Eigen::Vector3d omega{-0.55, 0.0, 0.7};
  Eigen::Vector3d F;
  double delta = 0.2;
  Eigen::Vector3cd beta0;

  explicit ThreeModeSystem(double alpha) {
    const Eigen::Vector3d w{0.3, 0.5, 0.2};
    F = w.cwiseSqrt();  // g = 1
    beta0 << cplx(0.5, 0.0), cplx(0.7, 0.1), cplx(0.0, 0.5);
    beta0 *= alpha / beta0.norm();
  }
};

int index_of(int dot, const int n[kModes]) {
  return ((dot * kCut + n[0]) * kCut + n[1]) * kCut + n[2];
}

struct ExactModel {
  std::array<Eigen::MatrixXcd, kModes> a;
  Eigen::MatrixXcd sm;
  Eigen::MatrixXcd H;
};

ExactModel build(const ThreeModeSystem& sys) {
  ExactModel m;
  for (auto& op : m.a) op = Eigen::MatrixXcd::Zero(kDim, kDim);
  m.sm = Eigen::MatrixXcd::Zero(kDim, kDim);
  int n[kModes];
  for (int dot = 0; dot < 2; ++dot) {
    for (n[0] = 0; n[0] < kCut; ++n[0]) {
      for (n[1] = 0; n[1] < kCut; ++n[1]) {
        for (n[2] = 0; n[2] < kCut; ++n[2]) {
          const int from = index_of(dot, n);
          for (int q = 0; q < kModes; ++q) {
            if (n[q] == 0) continue;
            int lower[kModes] = {n[0], n[1], n[2]};
            --lower[q];
            m.a[q](index_of(dot, lower), from) = std::sqrt(static_cast<double>(n[q]));
          }
          if (dot == 1) m.sm(index_of(0, n), from) = 1.0;
        }
      }
    }
  }
  m.H = sys.delta * m.sm.adjoint() * m.sm;
  for (int q = 0; q < kModes; ++q) {
    m.H += sys.omega[q] * m.a[q].adjoint() * m.a[q];
    m.H += sys.F[q] * (m.a[q].adjoint() * m.sm + m.sm.adjoint() * m.a[q]);
  }
  return m;
}

Eigen::VectorXcd coherent_product(const Eigen::Vector3cd& beta) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(kDim);
  std::array<std::array<cplx, kCut>, kModes> amp;
  for (int q = 0; q < kModes; ++q) {
    cplx term = std::exp(-0.5 * std::norm(beta[q]));
    for (int k = 0; k < kCut; ++k) {
      if (k > 0) term *= beta[q] / std::sqrt(static_cast<double>(k));
      amp[q][k] = term;
    }
  }
  int n[kModes];
  for (n[0] = 0; n[0] < kCut; ++n[0])
    for (n[1] = 0; n[1] < kCut; ++n[1])
      for (n[2] = 0; n[2] < kCut; ++n[2]) psi[index_of(0, n)] = amp[0][n[0]] * amp[1][n[1]] * amp[2][n[2]];
  return psi.normalized();
}

struct Errors {
  double beta = 0.0, n = 0.0, s = 0.0, f = 0.0;
};

Errors compare(double alpha) {
  const ThreeModeSystem sys(alpha);
  const auto exact = build(sys);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(exact.H);
  const Eigen::VectorXcd c0 = eig.eigenvectors().adjoint() * coherent_product(sys.beta0);

  DynamicsModel model;
  model.omega = sys.omega;
  model.F = sys.F;
  model.delta = sys.delta;
  auto state = CorrelationState::zeros(kModes);
  state.beta = sys.beta0;

  std::vector<cplx> beta_x, beta_c, n_x, n_c, s_x, s_c;
  std::vector<double> f_x, f_c;
  const double dt = 1e-3;
  const int per_sample = 100;
  Rk4Stepper stepper;
  for (int sample = 0; sample <= 95; ++sample) {  // ~3 Rabi periods pi / g
    const double t = sample * per_sample * dt;
    const Eigen::VectorXcd phases = (-cplx(0.0, 1.0) * t * eig.eigenvalues().cast<cplx>()).array().exp();
    const Eigen::VectorXcd psi = eig.eigenvectors() * (phases.asDiagonal() * c0);
    std::array<Eigen::VectorXcd, kModes> a_psi;
    for (int q = 0; q < kModes; ++q) a_psi[q] = exact.a[q] * psi;
    Eigen::Vector3cd b;
    for (int q = 0; q < kModes; ++q) b[q] = psi.dot(a_psi[q]);
    for (int q = 0; q < kModes; ++q) {
      beta_x.push_back(b[q]);
      beta_c.push_back(state.beta[q]);
      for (int k = 0; k < kModes; ++k) {
        n_x.push_back(a_psi[q].dot(a_psi[k]) - std::conj(b[q]) * b[k]);
        n_c.push_back(state.n(q, k));
        s_x.push_back(psi.dot(exact.a[q] * a_psi[k]) - b[q] * b[k]);
        s_c.push_back(state.s(q, k));
      }
    }
    f_x.push_back((exact.sm * psi).squaredNorm());
    f_c.push_back(state.f_e);
    for (int i = 0; i < per_sample; ++i) stepper.step(state, dt, model);
  }
  return {sup_relative_error(beta_x, beta_c), sup_relative_error(n_x, n_c),
          sup_relative_error(s_x, s_c), sup_relative_error(f_x, f_c)};
}

}  // namespace

TEST(MultimodeOracle, ErrorsVanishWithPumpIntensity) {
  const auto weak = compare(0.1);
  const auto strong = compare(0.2);
  std::printf("errors at alpha 0.1: beta %.3e n %.3e s %.3e f %.3e\n", weak.beta, weak.n, weak.s,
              weak.f);
  std::printf("errors at alpha 0.2: beta %.3e n %.3e s %.3e f %.3e\n", strong.beta, strong.n,
              strong.s, strong.f);
  // Quadrupling |alpha|^2 quadruples the doublet errors and raises the
  // singlet errors sixteenfold.
  for (auto [w, st, order, name] : {std::tuple{weak.beta, strong.beta, 16.0, "beta"},
                                    std::tuple{weak.f, strong.f, 16.0, "f"},
                                    std::tuple{weak.n, strong.n, 4.0, "n"},
                                    std::tuple{weak.s, strong.s, 4.0, "s"}}) {
    EXPECT_LT(w, 0.03) << name;
    EXPECT_NEAR(st / w, order, 0.25 * order) << name;
  }
}

TEST(SingleModeOracle, ErrorsVanishWithPumpIntensity) {
  OracleConfig cfg;
  cfg.n_max = 8;
  cfg.g = 1.0;
  const double t_end = 3.0 * std::numbers::pi;
  const auto weak = compare_single_mode(cfg, 0.1, t_end, 0.01, 10);
  const auto strong = compare_single_mode(cfg, 0.2, t_end, 0.01, 10);
  std::printf("errors at alpha 0.1: beta %.3e n %.3e f %.3e\n", weak.error_beta, weak.error_n,
              weak.error_f);
  std::printf("errors at alpha 0.2: beta %.3e n %.3e f %.3e\n", strong.error_beta,
              strong.error_n, strong.error_f);
  EXPECT_LT(weak.error_beta, 0.005);
  EXPECT_LT(weak.error_f, 0.005);
  EXPECT_LT(weak.error_n, 0.03);
  EXPECT_NEAR(strong.error_beta / weak.error_beta, 16.0, 4.0);
  EXPECT_NEAR(strong.error_f / weak.error_f, 16.0, 4.0);
  EXPECT_NEAR(strong.error_n / weak.error_n, 4.0, 1.0);
}

TEST(SingleModeOracle, RejectsLossyCavity) {
  OracleConfig cfg;
  cfg.gamma_cav = 0.1;
  EXPECT_THROW(compare_single_mode(cfg, 0.1, 1.0, 0.01), std::runtime_error);
}
