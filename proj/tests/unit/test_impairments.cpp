#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fdrelay/impairments.hpp"

using namespace fdrelay;

TEST(ReceiverDistortion, SingleAntennaExample) {
  auto cfg = make_config(1, 1);
  ChannelRealization ch;
  ch.g_u = CMatrix::Ones(1, 1);
  ch.h_u = CMatrix::Ones(1, 1);
  ch.g_d = CMatrix::Ones(1, 1);
  ch.h_d = CMatrix::Ones(1, 1);
  ch.g_rr = CMatrix::Ones(1, 1);
  ch.omega = CMatrix::Zero(2, 2);
  EXPECT_DOUBLE_EQ(receiver_distortion_cov(cfg, ch).w_diag[0], 60.0);
}

TEST(ReceiverDistortion, ZeroChannelsGiveZeroW) {
  const auto cfg = make_config(6, 2);
  auto ch = sample_channels(cfg, LargeScaleFading::uniform(2), 1);
  ch.g_u.setZero();
  ch.h_u.setZero();
  ch.g_rr.setZero();
  EXPECT_EQ(receiver_distortion_cov(cfg, ch).w_diag, RVector::Zero(6));
}

TEST(ReceiverDistortion, MeanDiagonalAtReferencePoint) {
  const auto cfg = make_config(2000, 10);
  const auto ch = sample_channels(cfg, LargeScaleFading::uniform(10), 11);
  // P_U * 2K + P_R * sigma_LIr^2
  EXPECT_NEAR(receiver_distortion_cov(cfg, ch).w_diag.mean() / 240.0, 1.0, 0.01);
}

TEST(ReceiverDistortion, DimensionMismatchThrows) {
  const auto ch = sample_channels(make_config(6, 2), LargeScaleFading::uniform(2), 1);
  EXPECT_THROW(receiver_distortion_cov(make_config(7, 2), ch), ConfigError);
}

TEST(ReceiverDistortion, ZeroKappaGivesZeroVector) {
  ReceiverDistortionModel m{RVector::Constant(5, 3.0), 0.0};
  EXPECT_EQ(sample_receiver_distortion(m, 1).squaredNorm(), 0.0);
}

TEST(ReceiverDistortion, ElementVariances) {
  RVector w(3);
  w << 1.0, 10.0, 60.0;
  const ReceiverDistortionModel m{w, 0.1};
  RVector acc = RVector::Zero(3);
  const int draws = 100000;
  GaussianSource rng(5);
  for (int d = 0; d < draws; ++d) acc += sample_receiver_distortion(m, rng).cwiseAbs2();
  acc /= draws;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(acc[i] / (0.01 * w[i]), 1.0, 0.02);
}

TEST(TransmitterDistortion, ElementVariance) {
  auto cfg = make_config(40, 1);
  cfg.kappa_t = 0.5;
  GaussianSource rng(8);
  double acc = 0.0;
  const int draws = 5000;
  for (int d = 0; d < draws; ++d) acc += sample_transmitter_distortion(cfg, rng).squaredNorm();
  // 0.25 per element, trace kappa_t^2 P_R = 10
  EXPECT_NEAR(acc / draws / 40.0, 0.25, 0.25 * 0.01);
}

TEST(TransmitterDistortion, TraceIndependentOfN) {
  for (int n : {10, 100, 1000}) {
    auto cfg = make_config(n, 1);
    cfg.kappa_t = 0.2;
    GaussianSource rng(static_cast<std::uint64_t>(n));
    double acc = 0.0;
    const int draws = 4000;
    for (int d = 0; d < draws; ++d) acc += sample_transmitter_distortion(cfg, rng).squaredNorm();
    EXPECT_NEAR(acc / draws, 0.04 * 40.0, 0.04 * 40.0 * 0.05);
  }
  auto cfg = make_config(10, 1);
  EXPECT_EQ(sample_transmitter_distortion(cfg, 3).squaredNorm(), 0.0);
}

namespace {

double evm_for(double kappa, int samples, std::uint64_t seed) {
  RVector w = RVector::LinSpaced(16, 1.0, 30.0);
  const ReceiverDistortionModel m{w, kappa};
  GaussianSource rng(seed);
  std::vector<CVector> draws;
  draws.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) draws.push_back(sample_receiver_distortion(m, rng));
  return measured_evm(draws, w.sum());
}

}  // namespace

TEST(MeasuredEvm, RecoversKappa) {
  EXPECT_NEAR(evm_for(0.175, 10000, 1) / 0.175, 1.0, 0.01);
  EXPECT_NEAR(evm_for(0.0156, 10000, 2) / 0.0156, 1.0, 0.01);
  EXPECT_EQ(evm_for(0.0, 10, 3), 0.0);
}

TEST(MeasuredEvm, RejectsDegenerateInput) {
  std::vector<CVector> none;
  EXPECT_THROW(measured_evm(none, 1.0), std::invalid_argument);
  std::vector<CVector> one{CVector::Zero(2)};
  EXPECT_THROW(measured_evm(one, 0.0), std::invalid_argument);
}

TEST(ScaledKappas, ReferenceValue) {
  const auto k = scaled_kappas(ScalingLaw::uniform(0.0156, 1.0), 1000);
  EXPECT_NEAR(k.r, 0.4933, 5e-5);
  EXPECT_DOUBLE_EQ(k.r, k.t);
}

TEST(ScaledKappas, SmallExponentKeepsKappa0) {
  EXPECT_NEAR(scaled_kappas(ScalingLaw::uniform(0.05, 1e-12), 1000).r, 0.05, 1e-12);
}

TEST(ScaledKappas, AntennaTradeOff) {
  // EVM 0.05 at 8 antennas grows to 0.2 at 128 under z = 1.
  const double k0 = 0.05 / std::sqrt(8.0);
  EXPECT_NEAR(scaled_kappas(ScalingLaw::uniform(k0, 1.0), 8).r, 0.05, 1e-12);
  EXPECT_NEAR(scaled_kappas(ScalingLaw::uniform(k0, 1.0), 128).r, 0.2, 1e-12);
}

TEST(ScaledKappas, AppliedToConfig) {
  const auto cfg = with_scaling(make_config(400, 2), ScalingLaw{0.01, 0.02, 1.0});
  EXPECT_DOUBLE_EQ(cfg.kappa_r, 0.2);
  EXPECT_DOUBLE_EQ(cfg.kappa_t, 0.4);
}
