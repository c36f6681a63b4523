#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rungscope/jc_analytics.hpp"

using namespace rungscope;

TEST(DressedEnergies, Splittings) {
  EXPECT_DOUBLE_EQ(dressed_energies(1, 20.0).splitting(), 40.0);
  EXPECT_NEAR(dressed_energies(2, 11.0).splitting(), 31.11, 5e-3);
  EXPECT_DOUBLE_EQ(dressed_energies(4, 10.0).splitting(), 40.0);
  const auto e = dressed_energies(3, 2.0);
  EXPECT_DOUBLE_EQ(e.lower, -e.upper);
  EXPECT_EQ(e.rung_index, 3);
}

TEST(DressedEnergies, SplittingGrowsWithRung) {
  double last = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double s = dressed_energies(k, 7.0).splitting();
    EXPECT_GT(s, last);
    last = s;
  }
}

TEST(DressedEnergies, RejectsRungZero) {
  EXPECT_THROW(dressed_energies(0, 1.0), std::domain_error);
  EXPECT_THROW(dressed_energies(-2, 1.0), std::domain_error);
}

TEST(PumpResonance, DiskValues) {
  const auto r = pump_resonance(11.0, 0.0);
  EXPECT_NEAR(r.optimum_pump, 7.778, 5e-4);
  EXPECT_NEAR(r.emission_lower, 4.556, 5e-4);
  EXPECT_NEAR(r.emission_upper, 26.56, 5e-3);
}

TEST(PumpResonance, ZeroDetuningReducesToClosedForm) {
  for (double g : {0.5, 11.0, 20.0, 22.0}) {
    const auto r = pump_resonance(g, 0.0);
    EXPECT_NEAR(r.optimum_pump, g / std::numbers::sqrt2, 1e-12 * g);
    EXPECT_NEAR(r.emission_lower, (std::numbers::sqrt2 - 1.0) * g, 1e-12 * g);
    EXPECT_NEAR(r.emission_upper, (std::numbers::sqrt2 + 1.0) * g, 1e-12 * g);
  }
}

TEST(PumpResonance, ContinuousAtZeroDetuning) {
  const double g = 11.0;
  for (double d : {1e-2, 1e-4, 1e-6, -1e-6}) {
    EXPECT_NEAR(pump_resonance(g, d).optimum_pump, g / std::numbers::sqrt2, std::abs(d));
  }
}

TEST(PumpResonance, SumRuleAndNondegeneracy) {
  for (double g : {1.0, 11.0, 20.0}) {
    for (double d = -5.0 * g; d <= 5.0 * g; d += 0.25 * g) {
      const auto r = pump_resonance(g, d);
      EXPECT_NEAR(r.emission_lower + r.emission_upper, std::sqrt(d * d + 8 * g * g), 1e-10 * g);
      EXPECT_GT(std::abs(r.optimum_pump - r.emission_lower), 1e-6 * g);
      EXPECT_GT(std::abs(r.optimum_pump - r.emission_upper), 1e-6 * g);
    }
  }
}

TEST(Poisson, Values) {
  EXPECT_EQ(poisson_occupation(0.0, 2), 0.0);
  EXPECT_EQ(poisson_occupation(0.0, 0), 1.0);
  EXPECT_NEAR(poisson_occupation(1.0, 2), 0.18394, 5e-6);
  EXPECT_DOUBLE_EQ(two_photon_occupation(std::complex<double>(0.0, 1.0)),
                   poisson_occupation(1.0, 2));
  EXPECT_EQ(poisson_occupation(1.0, -1), 0.0);
}

TEST(Poisson, Normalized) {
  for (double a : {0.1, 1.0, 3.0}) {
    double total = 0.0;
    for (int n = 0; n < 200; ++n) total += poisson_occupation(a, n);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Poisson, TwoPhotonWeightPeaksAtMeanTwo) {
  double best = 0.0, best_mean = 0.0;
  for (double mean = 0.01; mean < 6.0; mean += 0.01) {
    const double p = poisson_occupation(std::sqrt(mean), 2);
    if (p > best) {
      best = p;
      best_mean = mean;
    }
  }
  EXPECT_NEAR(best_mean, 2.0, 0.011);
}
