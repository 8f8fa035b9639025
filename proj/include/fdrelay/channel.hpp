#pragma once

#include <cstdint>

#include "fdrelay/config.hpp"
#include "fdrelay/rng.hpp"

namespace fdrelay {

/// One coherence block of every link, column-major.
struct ChannelRealization {
  CMatrix g_u;    ///< N x K, uplink A_i -> relay
  CMatrix h_u;    ///< N x K, uplink B_i -> relay
  CMatrix g_d;    ///< N x K, downlink relay -> A_i
  CMatrix h_d;    ///< N x K, downlink relay -> B_i
  CMatrix g_rr;   ///< N x N, relay transmit array -> receive array
  CMatrix omega;  ///< 2K x 2K, inter-device channels (row = victim)

  int n() const { return static_cast<int>(g_u.rows()); }
  int k() const { return static_cast<int>(g_u.cols()); }

  /// Throws ConfigError unless every matrix matches (n, k).
  void check_dimensions(int n, int k) const {
    const auto link_ok = [&](const CMatrix& m) { return m.rows() == n && m.cols() == k; };
    if (!link_ok(g_u) || !link_ok(h_u) || !link_ok(g_d) || !link_ok(h_d) ||
        g_rr.rows() != n || g_rr.cols() != n || omega.rows() != 2 * k || omega.cols() != 2 * k) {
      throw ConfigError("channel realization does not match N=" + std::to_string(n) +
                        ", K=" + std::to_string(k));
    }
  }
};

/// Draws i.i.d. Rayleigh links into `out`, reusing its storage. The draw order is
/// G_u, H_u, G_d, H_d, G_RR, Omega, each column-major.
inline void sample_channels_into(const SystemConfig& cfg, const LargeScaleFading& fading,
                                 std::uint64_t seed, ChannelRealization& out) {
  require_valid(cfg, fading);
  const int n = cfg.n();
  const int k = cfg.k();
  out.g_u.resize(n, k);
  out.h_u.resize(n, k);
  out.g_d.resize(n, k);
  out.h_d.resize(n, k);
  out.g_rr.resize(n, n);
  out.omega.resize(2 * k, 2 * k);

  GaussianSource rng(seed);
  rng.fill_columns(out.g_u, fading.g_up);
  rng.fill_columns(out.h_u, fading.h_up);
  rng.fill_columns(out.g_d, fading.g_down);
  rng.fill_columns(out.h_d, fading.h_down);
  rng.fill(out.g_rr, cfg.sigma_loop);
  for (int c = 0; c < 2 * k; ++c) {
    for (int r = 0; r < 2 * k; ++r) out.omega(r, c) = rng.circular(cfg.sigma_interdevice(r, c));
  }
}

inline ChannelRealization sample_channels(const SystemConfig& cfg, const LargeScaleFading& fading,
                                          std::uint64_t seed) {
  ChannelRealization ch;
  sample_channels_into(cfg, fading, seed, ch);
  return ch;
}

/// A = [G_u, H_u]: column l < K is g_ul, column K + l is h_ul.
inline CMatrix uplink_stack(const ChannelRealization& ch) {
  CMatrix a(ch.n(), 2 * ch.k());
  a << ch.g_u, ch.h_u;
  return a;
}

/// B = [H_d, G_d]: column l < K is h_dl, column K + l is g_dl.
inline CMatrix downlink_stack(const ChannelRealization& ch) {
  CMatrix b(ch.n(), 2 * ch.k());
  b << ch.h_d, ch.g_d;
  return b;
}

}  // namespace fdrelay
