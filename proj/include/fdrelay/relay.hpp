#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "fdrelay/channel.hpp"
#include "fdrelay/impairments.hpp"

namespace fdrelay {

struct RelayState {
  CMatrix precoder;  ///< F = B^* A^H
  double rho = 0.0;  ///< instantaneous amplification factor
};

/// Per-block random quantities besides the channels.
struct TrialDraw {
  CVector eta_r;    ///< receive distortion
  CVector eta_t;    ///< transmit distortion
  CVector y_tilde;  ///< Gaussian surrogate of the looped-back relay signal, CN(0, P_R/N I)
};

/// Columns of A (desired, self) and B (receive) that belong to one receiver.
struct PairIndices {
  int receive;  ///< column of B = [H_d, G_d]
  int desired;  ///< column of A = [G_u, H_u] carrying the partner's signal
  int self;     ///< column of A carrying the receiver's own signal
};

inline PairIndices pair_indices(int k, int pair, Side side) {
  if (side == Side::A) return {k + pair, k + pair, pair};
  return {pair, pair, k + pair};
}

/// Numerator and every denominator contribution of one receiver's SINR.
struct SinrTerms {
  double signal = 0.0;
  double inter_pair = 0.0;
  double relay_noise = 0.0;
  double device_noise = 0.0;
  double loop = 0.0;
  double interdevice = 0.0;
  double rx_distortion = 0.0;
  double tx_distortion = 0.0;

  double interference() const {
    return inter_pair + relay_noise + device_noise + loop + interdevice + rx_distortion +
           tx_distortion;
  }

  /// +inf when only the signal survives, 0 when the signal vanishes.
  double sinr() const {
    if (signal == 0.0) return 0.0;
    const double den = interference();
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return signal / den;
  }
};

inline CMatrix mr_precoder(const ChannelRealization& ch) {
  const int n = ch.n();
  const int k = ch.k();
  const auto same = [&](const CMatrix& m) { return m.rows() == n && m.cols() == k; };
  if (!same(ch.h_u) || !same(ch.g_d) || !same(ch.h_d)) {
    throw ConfigError("mr_precoder: link matrices have inconsistent dimensions");
  }
  return downlink_stack(ch).conjugate() * uplink_stack(ch).adjoint();
}

namespace detail {

inline double rho_from_denominator(double p_relay, double denominator) {
  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    throw NumericalError("amplification factor undefined: received power is zero or non-finite");
  }
  return std::sqrt(p_relay / denominator);
}

inline double device_noise(const SystemConfig& cfg, int pair, Side side) {
  return side == Side::A ? cfg.noise_device_a[pair] : cfg.noise_device_b[pair];
}

inline double interdevice_power(const SystemConfig& cfg, const ChannelRealization& ch, int pair,
                                Side side) {
  if (cfg.interdevice_mode == InterDeviceMode::expected) {
    return same_side_interdevice(cfg, pair, side);
  }
  const int victim = device_index(pair, side);
  double total = 0.0;
  for (int other = 0; other < cfg.n_pairs; ++other) {
    if (other == pair && !cfg.include_own_interdevice) continue;
    total += std::norm(ch.omega(victim, device_index(other, side)));
  }
  return total;
}

}  // namespace detail

/// rho = sqrt(P_R / (P_U ||FA||^2 + (P_R/N) ||F G_RR||^2 + ||F eta_r||^2 + sigma_R^2 ||F||^2)).
inline double amplification_factor(const SystemConfig& cfg, const ChannelRealization& ch,
                                   const CMatrix& precoder, const CVector& eta_r) {
  ch.check_dimensions(cfg.n(), cfg.k());
  if (precoder.rows() != cfg.n() || precoder.cols() != cfg.n() || eta_r.size() != cfg.n()) {
    throw ConfigError("amplification_factor: precoder or eta_r has the wrong size");
  }
  const CMatrix a = uplink_stack(ch);
  const double denominator = cfg.p_device * (precoder * a).squaredNorm() +
                             (cfg.p_relay / cfg.n()) * (precoder * ch.g_rr).squaredNorm() +
                             (precoder * eta_r).squaredNorm() +
                             cfg.noise_relay * precoder.squaredNorm();
  return detail::rho_from_denominator(cfg.p_relay, denominator);
}

/// Draw order: eta_r, eta_t, y_tilde.
inline TrialDraw sample_trial_draw(const SystemConfig& cfg, const ChannelRealization& ch,
                                   std::uint64_t seed) {
  GaussianSource rng(seed);
  TrialDraw d;
  d.eta_r = sample_receiver_distortion(receiver_distortion_cov(cfg, ch), rng);
  d.eta_t = sample_transmitter_distortion(cfg, rng);
  d.y_tilde.resize(cfg.n());
  rng.fill(d.y_tilde, cfg.p_relay / cfg.n());
  return d;
}

inline RelayState make_relay_state(const SystemConfig& cfg, const ChannelRealization& ch,
                                   const TrialDraw& draw) {
  RelayState s;
  s.precoder = mr_precoder(ch);
  s.rho = amplification_factor(cfg, ch, s.precoder, draw.eta_r);
  return s;
}

/// SINR terms evaluated with the explicit N x N precoder. The echo of the
/// receiver's own signal (g_di^T F g_ui) is taken as cancelled and left out.
inline SinrTerms sinr_terms(const SystemConfig& cfg, const ChannelRealization& ch,
                            const RelayState& relay, const TrialDraw& draw, int pair, Side side) {
  if (!std::isfinite(relay.rho) || !(relay.rho > 0.0)) {
    throw NumericalError("instantaneous_sinr: amplification factor is not finite and positive");
  }
  const int k = cfg.k();
  const auto idx = pair_indices(k, pair, side);
  const CMatrix a = uplink_stack(ch);
  const CMatrix b = downlink_stack(ch);
  const double inv_rho2 = 1.0 / (relay.rho * relay.rho);

  const Eigen::RowVectorXcd row = b.col(idx.receive).transpose() * relay.precoder;
  const Eigen::RowVectorXcd gains = row * a;

  SinrTerms t;
  t.signal = cfg.p_device * std::norm(gains[idx.desired]);
  for (int l = 0; l < 2 * k; ++l) {
    if (l != idx.desired && l != idx.self) t.inter_pair += std::norm(gains[l]);
  }
  t.inter_pair *= cfg.p_device;
  t.relay_noise = cfg.noise_relay * row.squaredNorm();
  t.device_noise = detail::device_noise(cfg, pair, side) * inv_rho2;
  t.loop = std::norm((row * (ch.g_rr * draw.y_tilde))(0));
  t.interdevice = cfg.p_device * inv_rho2 * detail::interdevice_power(cfg, ch, pair, side);
  t.rx_distortion = std::norm((row * draw.eta_r)(0));
  t.tx_distortion = std::norm((b.col(idx.receive).transpose() * draw.eta_t)(0)) * inv_rho2;
  return t;
}

inline double instantaneous_sinr(const SystemConfig& cfg, const ChannelRealization& ch,
                                 const RelayState& relay, const TrialDraw& draw, int pair,
                                 Side side) {
  return sinr_terms(cfg, ch, relay, draw, pair, side).sinr();
}

/// Everything the SINR needs, projected onto the 2K-dimensional span of the
/// precoder. F = B^* A^H has rank <= 2K, so g^T F x = v (A^H x) with
/// v = b_r^T B^*, and all norms of F-products reduce to traces of 2K x 2K Grams.
struct ProjectedTrial {
  CMatrix uplink_gram;    ///< Q = A^H A
  CMatrix downlink_gram;  ///< P = B^T B^*; row r is b_r^T B^*
  CMatrix loop_gram;      ///< (A^H G_RR)(A^H G_RR)^H
  CVector loop_signal;    ///< A^H G_RR y_tilde
  CVector rx_distortion;  ///< A^H eta_r
  CVector tx_distortion;  ///< B^T eta_t
  double fa_sq = 0.0;     ///< ||F A||^2
  double fg_sq = 0.0;     ///< ||F G_RR||^2
  double feta_sq = 0.0;   ///< ||F eta_r||^2
  double f_sq = 0.0;      ///< ||F||^2
  double rho_sq = 0.0;
};

/// `scratch` holds A^H G_RR between calls so large-N trials do not reallocate.
inline ProjectedTrial project_trial(const SystemConfig& cfg, const ChannelRealization& ch,
                                    const TrialDraw& draw, CMatrix& scratch) {
  ch.check_dimensions(cfg.n(), cfg.k());
  const CMatrix a = uplink_stack(ch);
  const CMatrix b = downlink_stack(ch);

  ProjectedTrial p;
  p.uplink_gram.noalias() = a.adjoint() * a;
  p.downlink_gram = (b.adjoint() * b).conjugate();
  scratch.resize(a.cols(), ch.g_rr.cols());
  scratch.noalias() = a.adjoint() * ch.g_rr;
  p.loop_gram.noalias() = scratch * scratch.adjoint();
  p.loop_signal.noalias() = scratch * draw.y_tilde;
  p.rx_distortion.noalias() = a.adjoint() * draw.eta_r;
  p.tx_distortion.noalias() = b.transpose() * draw.eta_t;

  const CMatrix& q = p.uplink_gram;
  const CMatrix& pg = p.downlink_gram;
  p.fa_sq = (q * pg * q).trace().real();
  p.fg_sq = (pg * p.loop_gram).trace().real();
  p.feta_sq = p.rx_distortion.dot(pg * p.rx_distortion).real();
  p.f_sq = (pg * q).trace().real();

  const double denominator = cfg.p_device * p.fa_sq + (cfg.p_relay / cfg.n()) * p.fg_sq +
                             p.feta_sq + cfg.noise_relay * p.f_sq;
  const double rho = detail::rho_from_denominator(cfg.p_relay, denominator);
  p.rho_sq = rho * rho;
  return p;
}

inline ProjectedTrial project_trial(const SystemConfig& cfg, const ChannelRealization& ch,
                                    const TrialDraw& draw) {
  CMatrix scratch;
  return project_trial(cfg, ch, draw, scratch);
}

/// Same terms as sinr_terms(), computed from the projection.
inline SinrTerms projected_sinr_terms(const SystemConfig& cfg, const ChannelRealization& ch,
                                      const ProjectedTrial& p, int pair, Side side) {
  const int k = cfg.k();
  const auto idx = pair_indices(k, pair, side);
  const double inv_rho2 = 1.0 / p.rho_sq;

  const Eigen::RowVectorXcd v = p.downlink_gram.row(idx.receive);
  const Eigen::RowVectorXcd gains = v * p.uplink_gram;

  SinrTerms t;
  t.signal = cfg.p_device * std::norm(gains[idx.desired]);
  for (int l = 0; l < 2 * k; ++l) {
    if (l != idx.desired && l != idx.self) t.inter_pair += std::norm(gains[l]);
  }
  t.inter_pair *= cfg.p_device;
  t.relay_noise = cfg.noise_relay * gains.dot(v).real();
  t.device_noise = detail::device_noise(cfg, pair, side) * inv_rho2;
  t.loop = std::norm((v * p.loop_signal)(0));
  t.interdevice = cfg.p_device * inv_rho2 * detail::interdevice_power(cfg, ch, pair, side);
  t.rx_distortion = std::norm((v * p.rx_distortion)(0));
  t.tx_distortion = std::norm(p.tx_distortion[idx.receive]) * inv_rho2;
  return t;
}

}  // namespace fdrelay
