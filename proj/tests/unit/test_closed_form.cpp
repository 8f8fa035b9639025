#include <gtest/gtest.h>

#include <cmath>

#include "fdrelay/closed_form.hpp"

using namespace fdrelay;

TEST(DeterministicTerms, ReferenceConfiguration) {
  const auto cfg = make_config(1000, 10);
  const auto t = lemma1_terms(cfg, LargeScaleFading::uniform(10), 0, Side::A);
  EXPECT_DOUBLE_EQ(t.a_i, 36.0);
  EXPECT_DOUBLE_EQ(t.b_i, 0.1);
  EXPECT_DOUBLE_EQ(t.j_const, 200.0);
  EXPECT_DOUBLE_EQ(t.c_i, 0.5);
  EXPECT_EQ(t.d_i, 0.0);
  EXPECT_EQ(t.e_i, 0.0);
  EXPECT_DOUBLE_EQ(t.f_i, 4.0);
  EXPECT_DOUBLE_EQ(t.g_i, 50.0);
  EXPECT_NEAR(t.denominator(), 90.6, 1e-12);
}

TEST(DeterministicTerms, HomogeneityInFading) {
  auto cfg = make_config(100, 3);
  auto f = LargeScaleFading::uniform(3);
  f.g_up << 1.0, 0.5, 2.0;
  f.h_down << 0.3, 1.0, 1.2;
  auto f2 = f;
  f2.g_up *= 2.0;
  f2.h_up *= 2.0;
  f2.g_down *= 2.0;
  f2.h_down *= 2.0;
  const auto t1 = lemma1_terms(cfg, f, 1, Side::A);
  const auto t2 = lemma1_terms(cfg, f2, 1, Side::A);
  EXPECT_NEAR(t2.a_i, t1.a_i, 1e-12);
  EXPECT_NEAR(t2.j_const, 8.0 * t1.j_const, 1e-9);  // kappa = 0: first summand only
}

TEST(DeterministicTerms, IdealHardwareDropsDistortion) {
  auto cfg = make_config(100, 2);
  cfg.sigma_loop = 3.0;
  const auto t = lemma1_terms(cfg, LargeScaleFading::uniform(2), 1, Side::B);
  EXPECT_EQ(t.d_i, 0.0);
  EXPECT_EQ(t.e_i, 0.0);
  EXPECT_DOUBLE_EQ(t.j_const, cfg.p_device * detail::fourth_order_sum(LargeScaleFading::uniform(2)));
}

TEST(DeterministicTerms, SidesSwapRoles) {
  auto cfg = make_config(64, 2);
  LargeScaleFading f = LargeScaleFading::uniform(2);
  f.g_up << 0.5, 2.0;
  f.h_up << 1.5, 0.8;
  f.g_down << 1.1, 0.9;
  f.h_down << 0.7, 1.3;
  LargeScaleFading swapped{f.h_up, f.g_up, f.h_down, f.g_down};
  const auto a = lemma1_terms(cfg, f, 1, Side::B);
  const auto b = lemma1_terms(cfg, swapped, 1, Side::A);
  EXPECT_NEAR(a.denominator(), b.denominator(), 1e-12);
}

TEST(ClosedFormSe, ReferenceRate) {
  const auto r = lemma1_se(make_config(1000, 10), LargeScaleFading::uniform(10));
  EXPECT_NEAR(r.per_pair_a[0], std::log2(1.0 + 1000.0 / 90.6), 1e-12);
  EXPECT_NEAR(r.per_pair_a[0], 3.590, 1e-3);
  EXPECT_NEAR(r.sum_se, 71.8, 0.05);
  EXPECT_EQ(r.per_pair_a, r.per_pair_b);
}

TEST(ClosedFormSe, IncreasesWithAntennas) {
  auto cfg = make_config(10, 4);
  cfg.kappa_r = cfg.kappa_t = 0.1;
  double prev = 0.0;
  for (int n : {10, 100, 1000, 10000}) {
    cfg.n_relay_antennas = n;
    const double s = lemma1_se(cfg, LargeScaleFading::uniform(4)).sum_se;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(ClosedFormSe, DecreasesWithLoopInterference) {
  auto cfg = make_config(500, 4);
  double prev = lemma1_se(cfg, LargeScaleFading::uniform(4)).sum_se;
  for (double s : {2.0, 4.0, 8.0}) {
    cfg.sigma_loop = s;
    const double cur = lemma1_se(cfg, LargeScaleFading::uniform(4)).sum_se;
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(AsymptoticLimit, UnitLimit) {
  const double k0 = 0.0156;
  const auto cfg = make_config(1000, 10);
  const auto lim = corollary1_limit(cfg, LargeScaleFading::uniform(10), ScalingLaw::uniform(k0, 1.0), 1000);
  ASSERT_TRUE(lim);
  const double k2 = k0 * k0;
  const double expected = std::log2(1.0 + 1.0 / (k2 * (20 * k2 + 1) * 24 + 20 * k2));
  EXPECT_NEAR(lim->per_pair_a[0], expected, 1e-12);
  EXPECT_NEAR(lim->per_pair_a[0], 6.56, 0.005);
}

TEST(AsymptoticLimit, AsymptoticTermsAtReference) {
  const auto at = asymptotic_terms(make_config(100, 10), LargeScaleFading::uniform(10));
  EXPECT_DOUBLE_EQ(at.xi, 24.0);
  EXPECT_DOUBLE_EQ(at.mu, 1.0);
  EXPECT_DOUBLE_EQ(at.mu_tilde, 1.0);
  EXPECT_DOUBLE_EQ(at.mu_bar, 1.0);
}

TEST(AsymptoticLimit, ClosedFormConvergesToLimit) {
  const auto law = ScalingLaw::uniform(0.0156, 1.0);
  const auto f = LargeScaleFading::uniform(10);
  const double limit = corollary1_limit(make_config(1, 10), f, law, 1)->sum_se;
  double prev_gap = 1e9;
  for (int n : {1000, 10000, 100000, 1000000}) {
    const double gap = std::abs(lemma1_se(with_scaling(make_config(n, 10), law), f).sum_se - limit);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap / limit, 0.005);
}

TEST(AsymptoticLimit, IdealHardwareHitsCap) {
  const auto lim = corollary1_limit(make_config(100, 2), LargeScaleFading::uniform(2),
                                    ScalingLaw::uniform(0.0, 0.5), 100);
  ASSERT_TRUE(lim);
  EXPECT_EQ(lim->per_pair_a[0], kDefaultRateCap);
}

TEST(AsymptoticLimit, SubLinearExponentGrows) {
  const auto f = LargeScaleFading::uniform(2);
  const auto law = ScalingLaw::uniform(0.05, 0.5);
  const double r1 = corollary1_limit(make_config(100, 2), f, law, 100)->per_pair_a[0];
  const double r4 = corollary1_limit(make_config(100, 2), f, law, 400)->per_pair_a[0];
  EXPECT_NEAR(std::exp2(r4) - 1.0, 2.0 * (std::exp2(r1) - 1.0), 1e-9);
}

TEST(AsymptoticLimit, NoLimitBeyondUnitExponent) {
  const auto cfg = make_config(100, 2);
  EXPECT_FALSE(corollary1_limit(cfg, LargeScaleFading::uniform(2), ScalingLaw::uniform(0.01, 1.5), 100));
  EXPECT_THROW(corollary1_limit(cfg, LargeScaleFading::uniform(2), ScalingLaw::uniform(0.01, 0.0), 100),
               ConfigError);
}

TEST(HalfDuplex, ReferenceRate) {
  const auto cfg = make_config(1000, 10);
  const auto r = hd_baseline_se(cfg, LargeScaleFading::uniform(10));
  EXPECT_NEAR(r.per_pair_a[0], 0.5 * std::log2(1.0 + 1000.0 / 36.6), 1e-12);
  EXPECT_NEAR(r.per_pair_a[0], 2.41, 0.005);
  EXPECT_NEAR(r.sum_se, 48.2, 0.05);
}

TEST(HalfDuplex, IgnoresInterference) {
  auto cfg = make_config(1000, 10);
  const double base = hd_baseline_se(cfg, LargeScaleFading::uniform(10)).sum_se;
  cfg.set_interference(30.0);
  EXPECT_EQ(hd_baseline_se(cfg, LargeScaleFading::uniform(10)).sum_se, base);
}
