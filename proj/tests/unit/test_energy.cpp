#include <gtest/gtest.h>

#include "fdrelay/energy.hpp"

using namespace fdrelay;

namespace {

const LargeScaleFading kUnit = LargeScaleFading::uniform(10);
const ScalingLaw kLaw = ScalingLaw::uniform(0.0156, 1.0);

}  // namespace

TEST(TotalPower, ReferenceValue) {
  EXPECT_NEAR(total_power(make_config(100, 10), PowerModel{}), 120 * 1.3 + 2 + 240 / 0.35, 1e-9);
  EXPECT_NEAR(total_power(make_config(100, 10), PowerModel{}), 843.71, 0.005);
}

TEST(TotalPower, IdealCircuits) {
  const PowerModel pm{0.0, 0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(total_power(make_config(500, 10), pm), 2 * 10 * 10.0 + 40.0);
}

TEST(TotalPower, AffineInAntennas) {
  const PowerModel pm;
  const double p1 = total_power(make_config(100, 10), pm);
  const double p2 = total_power(make_config(101, 10), pm);
  const double p3 = total_power(make_config(300, 10), pm);
  EXPECT_NEAR(p2 - p1, 1.3, 1e-9);
  EXPECT_NEAR(p3 - p1, 200 * 1.3, 1e-9);
}

TEST(TotalPower, InvalidModelThrows) {
  EXPECT_THROW(total_power(make_config(10, 1), PowerModel{1, 1, 1, 0.0}), ConfigError);
  EXPECT_THROW(total_power(make_config(10, 1), PowerModel{1, 1, 1, 1.5}), ConfigError);
  EXPECT_THROW(total_power(make_config(10, 1), PowerModel{-1, 1, 1, 0.5}), ConfigError);
}

TEST(EnergyEfficiency, ZeroRateGivesZero) {
  SEReport zero;
  zero.per_pair_a = RVector::Zero(10);
  zero.per_pair_b = RVector::Zero(10);
  EXPECT_EQ(energy_efficiency(make_config(100, 10), PowerModel{}, zero), 0.0);
}

TEST(EnergyEfficiency, StaticPowerLowersEe) {
  const auto cfg = make_config(200, 10);
  PowerModel pm;
  const double e1 = energy_efficiency(cfg, kUnit, pm, Estimator::lemma1);
  pm.p_static *= 2.0;
  EXPECT_LT(energy_efficiency(cfg, kUnit, pm, Estimator::lemma1), e1);
}

TEST(EnergyEfficiency, MonteCarloSourceNeedsReport) {
  EXPECT_THROW(energy_efficiency(make_config(10, 10), kUnit, PowerModel{}, Estimator::mc_jensen),
               ConfigError);
}

TEST(OptimalAntennas, HugeChainPowerPicksMinimum) {
  const PowerModel pm{1e6, 0.0, 2.0, 0.35};
  // EE ~ SE(N) / (N + 2K): falling once SE grows sublinearly in N.
  EXPECT_EQ(optimal_antennas(make_config(1, 10), kUnit, pm, 100, 2000, kLaw).n_opt, 100);
}

TEST(OptimalAntennas, FreeChainsPickMaximum) {
  const PowerModel pm{0.0, 0.0, 2.0, 0.35};
  EXPECT_EQ(optimal_antennas(make_config(1, 10), kUnit, pm, 10, 200, kLaw).n_opt, 200);
}

TEST(OptimalAntennas, EmptyRangeThrows) {
  EXPECT_THROW(optimal_antennas(make_config(1, 10), kUnit, PowerModel{}, 20, 10), ConfigError);
  EXPECT_THROW(optimal_antennas(make_config(1, 10), kUnit, PowerModel{}, 0, 10), ConfigError);
}

TEST(OptimalAntennas, TiesGoToSmallerN) {
  std::vector<EnergyPoint> sweep{{10, 1, 1, 0.5}, {11, 1, 1, 0.7}, {12, 1, 1, 0.7}};
  EXPECT_EQ(argmax_ee(sweep), 1u);
}

TEST(OptimalAntennas, InteriorOptimumForBothExponents) {
  const PowerModel pm;
  const auto half = optimal_antennas(make_config(1, 10), kUnit, pm, 10, 2000, ScalingLaw::uniform(0.0156, 0.5));
  const auto one = optimal_antennas(make_config(1, 10), kUnit, pm, 10, 2000, kLaw);
  for (const auto* opt : {&half, &one}) {
    EXPECT_GT(opt->n_opt, 10);
    EXPECT_LT(opt->n_opt, 2000);
    // Past the optimum EE keeps falling over the next 20% of the range.
    const std::size_t start = static_cast<std::size_t>(opt->n_opt - 10);
    const std::size_t stop = std::min(opt->sweep.size() - 1, start + 398);
    for (std::size_t i = start; i < stop; ++i) EXPECT_GE(opt->sweep[i].ee, opt->sweep[i + 1].ee);
  }
  for (std::size_t i = 0; i < one.sweep.size(); ++i) {
    EXPECT_GE(half.sweep[i].ee, one.sweep[i].ee);
    EXPECT_NEAR(one.sweep[i].ee * one.sweep[i].p_total, one.sweep[i].sum_se, 1e-12 * one.sweep[i].sum_se);
  }
}

TEST(OptimalAntennas, StaticPowerMovesOptimumUp) {
  PowerModel pm;
  int prev = 0;
  for (double p0 : {2.0, 20.0, 200.0, 2000.0}) {
    pm.p_static = p0;
    const int n = optimal_antennas(make_config(1, 10), kUnit, pm, 10, 2000, kLaw).n_opt;
    EXPECT_GE(n, prev);
    prev = n;
  }
}
