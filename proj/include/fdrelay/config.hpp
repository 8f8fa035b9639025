#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fdrelay/types.hpp"

namespace fdrelay {

/// 3GPP LTE guidance on receive EVM. Exceeding it is reported, never rejected.
inline constexpr double kEvmWarningThreshold = 0.175;

/// How the inter-device term of the SINR is evaluated.
enum class InterDeviceMode {
  expected,  ///< (P_U/rho^2) * sum of configured variances
  sampled,   ///< (P_U/rho^2) * sum of |Omega_{i,k}|^2 from the realization
};

/// Scalar system parameters of the two-way full-duplex relay.
///
/// The relay has `n_relay_antennas` receive and as many transmit antennas and
/// serves `n_pairs` device pairs (A_i, B_i). Devices are indexed 0..2K-1 with
/// A_i at 2i and B_i at 2i+1, which is the indexing of `sigma_interdevice`
/// (row = victim, column = interferer; the diagonal is device self-interference).
struct SystemConfig {
  int n_relay_antennas = 1;
  int n_pairs = 1;
  double p_device = 10.0;
  double p_relay = 40.0;
  double noise_relay = 1.0;
  RVector noise_device_a;
  RVector noise_device_b;
  double sigma_loop = 1.0;
  RMatrix sigma_interdevice;
  double kappa_r = 0.0;
  double kappa_t = 0.0;

  InterDeviceMode interdevice_mode = InterDeviceMode::expected;
  /// Whether sigma_{i,i}^2 is part of the same-side inter-device sum.
  bool include_own_interdevice = true;

  int n() const { return n_relay_antennas; }
  int k() const { return n_pairs; }

  /// Sets every loop and inter-device variance to `sigma_sq`.
  void set_interference(double sigma_sq) {
    sigma_loop = sigma_sq;
    sigma_interdevice.setConstant(2 * n_pairs, 2 * n_pairs, sigma_sq);
  }
};

/// Per-pair large-scale fading coefficients (diagonals of D_gu, D_hu, D_gd, D_hd).
struct LargeScaleFading {
  RVector g_up;
  RVector h_up;
  RVector g_down;
  RVector h_down;

  static LargeScaleFading uniform(int k, double variance = 1.0) {
    LargeScaleFading f;
    f.g_up.setConstant(k, variance);
    f.h_up.setConstant(k, variance);
    f.g_down.setConstant(k, variance);
    f.h_down.setConstant(k, variance);
    return f;
  }
};

/// Reference operating point: P_U = 10 W, P_R = 40 W, unit noise variances at
/// relay and devices, unit loop and inter-device variances, ideal hardware.
inline SystemConfig make_config(int n, int k) {
  SystemConfig c;
  c.n_relay_antennas = n;
  c.n_pairs = k;
  c.noise_device_a.setOnes(k > 0 ? k : 0);
  c.noise_device_b.setOnes(k > 0 ? k : 0);
  c.sigma_interdevice.setOnes(k > 0 ? 2 * k : 0, k > 0 ? 2 * k : 0);
  return c;
}

inline int device_index(int pair, Side side) { return 2 * pair + (side == Side::B ? 1 : 0); }

/// Sum of sigma_{i,k}^2 over the devices k on the receiver's own side.
inline double same_side_interdevice(const SystemConfig& cfg, int pair, Side side) {
  const int victim = device_index(pair, side);
  double total = 0.0;
  for (int other = 0; other < cfg.n_pairs; ++other) {
    if (other == pair && !cfg.include_own_interdevice) continue;
    total += cfg.sigma_interdevice(victim, device_index(other, side));
  }
  return total;
}

struct Violation {
  enum class Severity { error, warning };
  std::string field;
  std::string message;
  Severity severity = Severity::error;
};

namespace detail {

inline bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
inline bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

inline void check_vector(std::vector<Violation>& out, const std::string& name, const RVector& v,
                         Eigen::Index expected, bool strictly_positive) {
  if (v.size() != expected) {
    out.push_back({name, "expected " + std::to_string(expected) + " entries, got " +
                             std::to_string(v.size())});
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const bool ok = strictly_positive ? finite_pos(v[i]) : finite_nonneg(v[i]);
    if (!ok) {
      out.push_back({name + "[" + std::to_string(i) + "]",
                     strictly_positive ? "must be finite and > 0" : "must be finite and >= 0"});
    }
  }
}

}  // namespace detail

/// Every violated invariant of (cfg, fading). Warnings do not make a config invalid.
inline std::vector<Violation> validate_config(const SystemConfig& cfg,
                                              const LargeScaleFading& fading) {
  std::vector<Violation> out;
  using detail::finite_nonneg;
  using detail::finite_pos;

  if (cfg.n_relay_antennas < 1) out.push_back({"n_relay_antennas", "must be >= 1"});
  if (cfg.n_pairs < 1) out.push_back({"n_pairs", "must be >= 1"});
  if (!finite_pos(cfg.p_device)) out.push_back({"p_device", "must be finite and > 0"});
  if (!finite_pos(cfg.p_relay)) out.push_back({"p_relay", "must be finite and > 0"});
  if (!finite_nonneg(cfg.noise_relay)) out.push_back({"noise_relay", "must be finite and >= 0"});
  if (!finite_nonneg(cfg.sigma_loop)) out.push_back({"sigma_loop", "must be finite and >= 0"});

  const Eigen::Index k = cfg.n_pairs > 0 ? cfg.n_pairs : 0;
  detail::check_vector(out, "noise_device_a", cfg.noise_device_a, k, false);
  detail::check_vector(out, "noise_device_b", cfg.noise_device_b, k, false);
  if (cfg.sigma_interdevice.rows() != 2 * k || cfg.sigma_interdevice.cols() != 2 * k) {
    out.push_back({"sigma_interdevice", "expected a " + std::to_string(2 * k) + "x" +
                                            std::to_string(2 * k) + " matrix"});
  } else {
    for (Eigen::Index r = 0; r < 2 * k; ++r) {
      for (Eigen::Index c = 0; c < 2 * k; ++c) {
        if (!finite_nonneg(cfg.sigma_interdevice(r, c))) {
          out.push_back({"sigma_interdevice[" + std::to_string(r) + "," + std::to_string(c) + "]",
                         "must be finite and >= 0"});
        }
      }
    }
  }

  for (const auto& [name, kappa] : {std::pair{"kappa_r", cfg.kappa_r}, std::pair{"kappa_t", cfg.kappa_t}}) {
    if (!finite_nonneg(kappa)) {
      out.push_back({name, "must be finite and >= 0"});
    } else if (kappa > kEvmWarningThreshold) {
      out.push_back({name, "exceeds the 0.175 EVM guidance", Violation::Severity::warning});
    }
  }

  detail::check_vector(out, "g_up", fading.g_up, k, true);
  detail::check_vector(out, "h_up", fading.h_up, k, true);
  detail::check_vector(out, "g_down", fading.g_down, k, true);
  detail::check_vector(out, "h_down", fading.h_down, k, true);
  return out;
}

inline bool has_errors(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.severity == Violation::Severity::error) return true;
  }
  return false;
}

/// Throws ConfigError listing every error-level violation.
inline void require_valid(const SystemConfig& cfg, const LargeScaleFading& fading) {
  const auto violations = validate_config(cfg, fading);
  if (!has_errors(violations)) return;
  std::string msg = "invalid configuration:";
  for (const auto& v : violations) {
    if (v.severity == Violation::Severity::error) msg += " " + v.field + " (" + v.message + ");";
  }
  throw ConfigError(msg);
}

}  // namespace fdrelay
