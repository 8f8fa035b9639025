#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "fdrelay/channel.hpp"

namespace fdrelay {

/// Diagonal receive-distortion covariance kappa_r^2 * diag(W_11, ..., W_NN).
struct ReceiverDistortionModel {
  RVector w_diag;
  double kappa_r = 0.0;

  RVector variances() const { return kappa_r * kappa_r * w_diag; }
};

/// kappa^2 = kappa0^2 * N^z for both receive and transmit impairments.
struct ScalingLaw {
  double kappa0_r = 0.0;
  double kappa0_t = 0.0;
  double z = 1.0;

  static ScalingLaw uniform(double kappa0, double z) { return {kappa0, kappa0, z}; }
};

struct KappaPair {
  double r = 0.0;
  double t = 0.0;
};

/// Diagonal of the relay's received covariance W. Entry i is
/// P_U sum_j (|h_uj[i]|^2 + |g_uj[i]|^2) + (P_R/N) ||row i of G_RR||^2.
inline ReceiverDistortionModel receiver_distortion_cov(const SystemConfig& cfg,
                                                       const ChannelRealization& ch) {
  ch.check_dimensions(cfg.n(), cfg.k());
  ReceiverDistortionModel model;
  model.kappa_r = cfg.kappa_r;
  model.w_diag = cfg.p_device * (ch.h_u.cwiseAbs2().rowwise().sum() +
                                 ch.g_u.cwiseAbs2().rowwise().sum()) +
                 (cfg.p_relay / cfg.n()) * ch.g_rr.cwiseAbs2().rowwise().sum();
  return model;
}

inline CVector sample_receiver_distortion(const ReceiverDistortionModel& model,
                                          GaussianSource& rng) {
  if ((model.w_diag.array() < 0.0).any() || !(model.kappa_r >= 0.0)) {
    throw std::invalid_argument("receiver distortion model has negative entries");
  }
  CVector eta(model.w_diag.size());
  const double k2 = model.kappa_r * model.kappa_r;
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = rng.circular(k2 * model.w_diag[i]);
  return eta;
}

inline CVector sample_receiver_distortion(const ReceiverDistortionModel& model, std::uint64_t seed) {
  GaussianSource rng(seed);
  return sample_receiver_distortion(model, rng);
}

/// eta_t ~ CN(0, kappa_t^2 (P_R/N) I_N).
inline CVector sample_transmitter_distortion(const SystemConfig& cfg, GaussianSource& rng) {
  CVector eta(cfg.n());
  rng.fill(eta, cfg.kappa_t * cfg.kappa_t * cfg.p_relay / cfg.n());
  return eta;
}

inline CVector sample_transmitter_distortion(const SystemConfig& cfg, std::uint64_t seed) {
  GaussianSource rng(seed);
  return sample_transmitter_distortion(cfg, rng);
}

/// Empirical EVM: sqrt(mean ||eta||^2 / tr(W)).
inline double measured_evm(std::span<const CVector> distortion_samples, double signal_power_trace) {
  if (distortion_samples.empty()) throw std::invalid_argument("measured_evm needs >= 1 sample");
  if (!(signal_power_trace > 0.0)) throw std::invalid_argument("signal power trace must be > 0");
  double total = 0.0;
  for (const auto& eta : distortion_samples) total += eta.squaredNorm();
  return std::sqrt(total / static_cast<double>(distortion_samples.size()) / signal_power_trace);
}

inline KappaPair scaled_kappas(const ScalingLaw& law, int n) {
  const double growth = std::pow(static_cast<double>(n), law.z / 2.0);
  return {law.kappa0_r * growth, law.kappa0_t * growth};
}

/// Copy of `cfg` with kappa_r, kappa_t set from the scaling law at cfg's N.
inline SystemConfig with_scaling(SystemConfig cfg, const ScalingLaw& law) {
  const auto kappas = scaled_kappas(law, cfg.n());
  cfg.kappa_r = kappas.r;
  cfg.kappa_t = kappas.t;
  return cfg;
}

}  // namespace fdrelay
