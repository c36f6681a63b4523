#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "rungscope/errors.hpp"
#include "rungscope/fock_oracle.hpp"

using namespace rungscope;

namespace {

OracleConfig closed(double g, int n_max = 6) {
  OracleConfig c;
  c.n_max = n_max;
  c.g = g;
  return c;
}

void expect_physical(const OracleState& st) {
  EXPECT_NEAR(st.rho.trace().real(), 1.0, 1e-9);
  EXPECT_LT((st.rho - st.rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(st.rho);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
}

}  // namespace

TEST(Dressed, ManifoldSplittingsMatchLadder) {
  const auto cfg = closed(1.3, 8);
  for (int k = 1; k <= 8; ++k) {
    const auto d = manifold_doublet(cfg, k);
    EXPECT_NEAR(d.lower, -1.3 * std::sqrt(k), 1e-10 * 1.3 * std::sqrt(k)) << k;
    EXPECT_NEAR(d.upper, 1.3 * std::sqrt(k), 1e-10 * 1.3 * std::sqrt(k)) << k;
  }
  EXPECT_NEAR(manifold_doublet(cfg, 1).splitting(), 2.6, 1e-12);
  EXPECT_NEAR(manifold_doublet(cfg, 2).splitting(), 2.0 * std::numbers::sqrt2 * 1.3, 1e-12);
}

TEST(Dressed, UncoupledLadderIsDegenerateAtZero) {
  const auto e = dressed_spectrum(closed(0.0, 3));
  ASSERT_EQ(e.size(), 8u);
  for (double x : e) EXPECT_NEAR(x, 0.0, 1e-14);
}

TEST(Dressed, Preconditions) {
  EXPECT_THROW(dressed_spectrum(closed(1.0, 0)), std::domain_error);
  EXPECT_THROW(manifold_doublet(closed(1.0, 3), 4), std::domain_error);
}

TEST(Evolve, FrozenWithoutCoupling) {
  const auto st = coherent_state(5, cplx(0.4, 0.2));
  const auto traj = evolve(closed(0.0, 5), st, 2.0, 0.01, {}, 50);
  EXPECT_LT((traj.states.back().rho - st.rho).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evolve, SecondRungRabiOscillation) {
  const double g = 1.0;
  const auto traj = evolve(closed(g, 4), fock_state(4, 2, DotLevel::down), 4.0, 0.005, {}, 4);
  const double omega = 2.0 * std::numbers::sqrt2 * g;
  for (std::size_t i = 0; i < traj.t.size(); i += 17) {
    const double t = traj.t[i];
    EXPECT_NEAR(population(traj.states[i], 2, DotLevel::down), std::pow(std::cos(0.5 * omega * t), 2), 1e-8);
    EXPECT_NEAR(population(traj.states[i], 1, DotLevel::up), std::pow(std::sin(0.5 * omega * t), 2), 1e-8);
  }
}

TEST(Evolve, CavityDecay) {
  OracleConfig cfg = closed(0.0, 3);
  cfg.gamma_cav = 0.5;
  const auto traj = evolve(cfg, fock_state(3, 1, DotLevel::down), 3.0, 0.01, {}, 10);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    EXPECT_NEAR(moments(traj.states[i]).photon_number, std::exp(-2.0 * 0.5 * traj.t[i]), 1e-9);
  }
}

TEST(Evolve, DephasingDampsPolarization) {
  OracleConfig cfg = closed(0.0, 2);
  cfg.gamma_P = 0.3;
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(6);
  amp[basis_index(2, 0, DotLevel::down)] = 1.0;
  amp[basis_index(2, 0, DotLevel::up)] = 1.0;
  const auto traj = evolve(cfg, pure_state(2, amp), 2.0, 0.01, {}, 20);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    EXPECT_NEAR(std::abs(moments(traj.states[i]).P), 0.5 * std::exp(-0.3 * traj.t[i]), 1e-9);
  }
}

TEST(Evolve, StaysPhysicalUnderDrive) {
  OracleConfig cfg = closed(1.0, 6);
  cfg.gamma_cav = 0.2;
  cfg.gamma_P = 0.1;
  const PumpSpec pump{0.707, 0.3, 0.5, 6.0};
  const auto traj = evolve(cfg, fock_state(6, 0, DotLevel::down), 12.0, 0.01,
                           pulse_drive(cfg.gamma_cav, pump), 100);
  for (const auto& st : traj.states) expect_physical(st);
}

TEST(Evolve, RejectsLargeStep) {
  EXPECT_THROW(evolve(closed(2.0, 3), fock_state(3, 0, DotLevel::down), 1.0, 0.011), ConfigError);
}

TEST(Evolve, CutoffConverged) {
  OracleConfig lo = closed(1.0, 4), hi = closed(1.0, 8);
  lo.gamma_cav = hi.gamma_cav = 0.3;
  const PumpSpec pump{0.707, 0.3, 0.1, 6.0};
  const auto a = evolve(lo, fock_state(4, 0, DotLevel::down), 10.0, 0.01, pulse_drive(0.3, pump), 100);
  const auto b = evolve(hi, fock_state(8, 0, DotLevel::down), 10.0, 0.01, pulse_drive(0.3, pump), 100);
  ASSERT_EQ(a.t.size(), b.t.size());
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    const auto ma = moments(a.states[i]);
    const auto mb = moments(b.states[i]);
    EXPECT_LT(std::abs(ma.mean_B - mb.mean_B), 1e-6);
    EXPECT_LT(std::abs(ma.photon_number - mb.photon_number), 1e-6);
    EXPECT_LT(std::abs(ma.f - mb.f), 1e-6);
    EXPECT_LT(std::abs(ma.s_corr - mb.s_corr), 1e-6);
  }
}

TEST(Moments, CoherentAndFockStatistics) {
  EXPECT_NEAR(*moments(coherent_state(30, cplx(0.8, -0.6))).g2, 1.0, 1e-10);
  for (int n = 1; n <= 6; ++n) {
    EXPECT_NEAR(*moments(fock_state(8, n, DotLevel::down)).g2, 1.0 - 1.0 / n, 1e-14) << n;
  }
  EXPECT_FALSE(moments(fock_state(4, 0, DotLevel::up)).g2.has_value());
}

TEST(Moments, TwoPhotonSuperposition) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * 5);
  amp[basis_index(4, 0, DotLevel::down)] = 1.0;
  amp[basis_index(4, 2, DotLevel::down)] = 0.1;
  EXPECT_NEAR(*moments(pure_state(4, amp)).g2, 50.5, 1e-10);
}

TEST(Factorization, VacuumHasZeroDeviation) {
  EXPECT_EQ(relative_deviation(0.0, 0.0), 0.0);
  const auto m = moments(fock_state(3, 0, DotLevel::down));
  EXPECT_EQ(m.fluct_four_point, 0.0);
  EXPECT_EQ(m.n_corr, 0.0);
}

TEST(Factorization, SqueezedLikeStateDeviatesAtOrderEpsSquared) {
  for (double eps : {0.1, 0.03, 0.01}) {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(2 * 5);
    amp[basis_index(4, 0, DotLevel::down)] = 1.0;
    amp[basis_index(4, 2, DotLevel::down)] = eps;
    const auto m = moments(pure_state(4, amp));
    const double fact = 2.0 * m.n_corr * m.n_corr + std::norm(m.s_corr);
    // Exact ratio (1 + 4 eps^2) / (1 + eps^2).
    EXPECT_NEAR(relative_deviation(m.fluct_four_point, fact), 3.0 * eps * eps / (1.0 + eps * eps), 1e-12);
  }
}

TEST(Factorization, DrivenScenarioIsMeasured) {
  OracleConfig cfg = closed(1.0, 8);
  cfg.gamma_cav = 0.03;
  cfg.gamma_P = 0.01;
  DriveScenario sc;
  sc.pump = {1.0 / std::numbers::sqrt2, 0.1, std::sqrt(0.1), 30.0};
  sc.t_end = 30.0;
  sc.dt = 0.02;
  sc.record_every = 10;
  const auto report = factorization_error(cfg, sc);
  ASSERT_EQ(report.t.size(), report.deviation.size());
  EXPECT_TRUE(std::isfinite(report.max_deviation));
  EXPECT_GE(report.max_deviation, report.deviation_at_peak);
  RecordProperty("max_deviation", std::to_string(report.max_deviation));
}
