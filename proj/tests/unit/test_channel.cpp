#include <gtest/gtest.h>

#include <cmath>

#include "fdrelay/channel.hpp"

using namespace fdrelay;

namespace {

bool has_field(const std::vector<Violation>& v, const std::string& field) {
  for (const auto& x : v) {
    if (x.field == field) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateConfig, ReferenceOperatingPointIsClean) {
  EXPECT_TRUE(validate_config(make_config(1000, 10), LargeScaleFading::uniform(10)).empty());
}

TEST(ValidateConfig, ZeroFadingVarianceIsNamed) {
  auto f = LargeScaleFading::uniform(10);
  f.g_down[0] = 0.0;
  const auto v = validate_config(make_config(1000, 10), f);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "g_down[0]");
}

TEST(ValidateConfig, ZeroAntennasIsNamed) {
  const auto v = validate_config(make_config(0, 10), LargeScaleFading::uniform(10));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "n_relay_antennas");
}

TEST(ValidateConfig, LargeKappaWarnsOnly) {
  auto cfg = make_config(100, 2);
  cfg.kappa_r = 0.3;
  const auto v = validate_config(cfg, LargeScaleFading::uniform(2));
  EXPECT_TRUE(has_field(v, "kappa_r"));
  EXPECT_FALSE(has_errors(v));
  EXPECT_NO_THROW(require_valid(cfg, LargeScaleFading::uniform(2)));
}

TEST(ValidateConfig, ReportsEveryProblem) {
  auto cfg = make_config(10, 2);
  cfg.p_relay = -1.0;
  cfg.noise_device_b.resize(3);
  cfg.noise_device_b.setOnes();
  cfg.sigma_interdevice(1, 2) = std::nan("");
  const auto v = validate_config(cfg, LargeScaleFading::uniform(2));
  EXPECT_TRUE(has_field(v, "p_relay"));
  EXPECT_TRUE(has_field(v, "noise_device_b"));
  EXPECT_TRUE(has_field(v, "sigma_interdevice[1,2]"));
  EXPECT_THROW(require_valid(cfg, LargeScaleFading::uniform(2)), ConfigError);
}

TEST(SampleChannels, SameSeedIsBitIdentical) {
  const auto cfg = make_config(32, 3);
  const auto f = LargeScaleFading::uniform(3);
  const auto a = sample_channels(cfg, f, 1234);
  const auto b = sample_channels(cfg, f, 1234);
  EXPECT_EQ(a.g_u, b.g_u);
  EXPECT_EQ(a.h_u, b.h_u);
  EXPECT_EQ(a.g_d, b.g_d);
  EXPECT_EQ(a.h_d, b.h_d);
  EXPECT_EQ(a.g_rr, b.g_rr);
  EXPECT_EQ(a.omega, b.omega);
  const auto c = sample_channels(cfg, f, 1235);
  EXPECT_NE(a.g_u, c.g_u);
}

TEST(SampleChannels, InvalidConfigThrows) {
  EXPECT_THROW(sample_channels(make_config(0, 1), LargeScaleFading::uniform(1), 1), ConfigError);
}

TEST(SampleChannels, ColumnPowerConcentrates) {
  const int n = 2000;
  const int k = 10;
  const auto ch = sample_channels(make_config(n, k), LargeScaleFading::uniform(k), 7);
  // ||g||^2 / N has mean 1 and standard deviation 1/sqrt(N) for unit variance.
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  for (const CMatrix* m : {&ch.g_u, &ch.h_u, &ch.g_d, &ch.h_d}) {
    for (int c = 0; c < k; ++c) EXPECT_NEAR(m->col(c).squaredNorm() / n, 1.0, 3.0 * se);
  }
}

TEST(SampleChannels, VariancesFollowFading) {
  const int n = 4000;
  auto cfg = make_config(n, 2);
  cfg.sigma_loop = 0.25;
  cfg.sigma_interdevice.setConstant(4, 4, 2.0);
  LargeScaleFading f = LargeScaleFading::uniform(2);
  f.g_up << 0.5, 3.0;
  f.h_down << 0.01, 1.0;
  const auto ch = sample_channels(cfg, f, 99);
  const double se = 3.0 / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(ch.g_u.col(0).squaredNorm() / n / 0.5, 1.0, se);
  EXPECT_NEAR(ch.g_u.col(1).squaredNorm() / n / 3.0, 1.0, se);
  EXPECT_NEAR(ch.h_d.col(0).squaredNorm() / n / 0.01, 1.0, se);
  EXPECT_NEAR(ch.g_rr.squaredNorm() / (double(n) * n) / 0.25, 1.0, 0.01);
  EXPECT_NEAR(ch.omega.squaredNorm() / 16.0 / 2.0, 1.0, 1.0);
}

TEST(SampleChannels, TinyVarianceShrinksToZero) {
  auto cfg = make_config(64, 2);
  cfg.sigma_loop = 1e-12;
  const auto ch = sample_channels(cfg, LargeScaleFading::uniform(2, 1e-12), 3);
  EXPECT_LT(ch.g_u.squaredNorm(), 1e-8);
  EXPECT_LT(ch.g_rr.squaredNorm(), 1e-6);
}

TEST(Stacks, ColumnLayout) {
  const auto ch = sample_channels(make_config(8, 2), LargeScaleFading::uniform(2), 5);
  const CMatrix a = uplink_stack(ch);
  const CMatrix b = downlink_stack(ch);
  EXPECT_EQ(a.col(1), ch.g_u.col(1));
  EXPECT_EQ(a.col(3), ch.h_u.col(1));
  EXPECT_EQ(b.col(0), ch.h_d.col(0));
  EXPECT_EQ(b.col(2), ch.g_d.col(0));
}

TEST(Rng, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0, Stream::channel), derive_seed(1, 0, Stream::draw));
  EXPECT_NE(derive_seed(1, 0, Stream::channel), derive_seed(1, 1, Stream::channel));
  EXPECT_NE(derive_seed(1, 0, Stream::channel), derive_seed(2, 0, Stream::channel));
  EXPECT_EQ(derive_seed(9, 4, Stream::draw), derive_seed(9, 4, Stream::draw));
}
