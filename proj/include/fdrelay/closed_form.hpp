#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "fdrelay/config.hpp"
#include "fdrelay/impairments.hpp"
#include "fdrelay/report.hpp"

namespace fdrelay {

/// Denominator terms of the large-N rate approximation log2(1 + N / sum).
struct LemmaTerms {
  double a_i = 0.0;  ///< inter-pair interference
  double b_i = 0.0;  ///< amplified relay noise
  double c_i = 0.0;  ///< device noise
  double d_i = 0.0;  ///< receive distortion
  double e_i = 0.0;  ///< transmit distortion
  double f_i = 0.0;  ///< relay loop interference
  double g_i = 0.0;  ///< inter-device interference
  double j_const = 0.0;

  double denominator() const { return a_i + b_i + c_i + d_i + e_i + f_i + g_i; }
};

/// Fading averages that survive the N -> infinity limit.
struct AsymptoticTerms {
  double xi = 0.0;
  double mu = 0.0;
  double mu_tilde = 0.0;
  double mu_bar = 0.0;
};

namespace detail {

/// Fading seen by one receiver. For Side::A the partner transmits on h_u and the
/// receiver listens on g_d; Side::B swaps the roles of g and h.
struct FadingView {
  const RVector& source_up;
  const RVector& other_up;
  const RVector& receive_down;
  const RVector& other_down;
};

inline FadingView view(const LargeScaleFading& f, Side side) {
  if (side == Side::A) return {f.h_up, f.g_up, f.g_down, f.h_down};
  return {f.g_up, f.h_up, f.h_down, f.g_down};
}

/// sum_k (g_uk^2 h_dk + g_dk h_uk^2), side-symmetric.
inline double fourth_order_sum(const LargeScaleFading& f) {
  return (f.g_up.array().square() * f.h_down.array() +
          f.g_down.array() * f.h_up.array().square()).sum();
}

/// sum_k (g_uk h_dk + g_dk h_uk), side-symmetric.
inline double second_order_sum(const LargeScaleFading& f) {
  return (f.g_up.array() * f.h_down.array() + f.g_down.array() * f.h_up.array()).sum();
}

/// P_U sum_j (h_uj + g_uj) + P_R sigma_LIr^2: the mean diagonal of W.
inline double received_power(const SystemConfig& cfg, const LargeScaleFading& f) {
  return cfg.p_device * (f.h_up.sum() + f.g_up.sum()) + cfg.p_relay * cfg.sigma_loop;
}

inline double log_rate(double sinr, double cap) { return rate_from_sinr(sinr, cap); }

}  // namespace detail

inline double lemma1_j(const SystemConfig& cfg, const LargeScaleFading& fading) {
  const double n = cfg.n();
  return cfg.p_device * detail::fourth_order_sum(fading) +
         (cfg.kappa_r * cfg.kappa_r / n) * detail::second_order_sum(fading) *
             detail::received_power(cfg, fading);
}

inline LemmaTerms lemma1_terms(const SystemConfig& cfg, const LargeScaleFading& fading, int pair,
                               Side side) {
  const auto v = detail::view(fading, side);
  const double su = v.source_up[pair];
  const double rd = v.receive_down[pair];
  const double pu = cfg.p_device;
  const double pr = cfg.p_relay;

  LemmaTerms t;
  for (int j = 0; j < cfg.k(); ++j) {
    if (j == pair) continue;
    t.a_i += v.source_up[j] / su +
             v.source_up[j] * v.source_up[j] * v.receive_down[j] / (su * su * rd) +
             v.other_up[j] / su +
             v.other_up[j] * v.other_up[j] * v.other_down[j] / (su * su * rd);
  }
  t.j_const = lemma1_j(cfg, fading);
  const double noise = side == Side::A ? cfg.noise_device_a[pair] : cfg.noise_device_b[pair];
  t.b_i = cfg.noise_relay / (pu * su);
  t.c_i = noise * t.j_const / (pr * pu * rd * rd * su * su);
  t.d_i = cfg.kappa_r * cfg.kappa_r * detail::received_power(cfg, fading) / (pu * su);
  t.e_i = cfg.kappa_t * cfg.kappa_t * t.j_const / (pu * rd * su * su);
  t.f_i = pr * cfg.sigma_loop / (pu * su);
  t.g_i = t.j_const * same_side_interdevice(cfg, pair, side) / (pr * rd * rd * su * su);
  return t;
}

inline double lemma1_sinr(const SystemConfig& cfg, const LargeScaleFading& fading, int pair,
                          Side side) {
  const double den = lemma1_terms(cfg, fading, pair, side).denominator();
  return den == 0.0 ? std::numeric_limits<double>::infinity() : cfg.n() / den;
}

inline SEReport lemma1_se(const SystemConfig& cfg, const LargeScaleFading& fading,
                          double rate_cap = kDefaultRateCap) {
  require_valid(cfg, fading);
  SEReport r;
  r.estimator = Estimator::lemma1;
  r.per_pair_a.resize(cfg.k());
  r.per_pair_b.resize(cfg.k());
  for (int i = 0; i < cfg.k(); ++i) {
    r.per_pair_a[i] = detail::log_rate(lemma1_sinr(cfg, fading, i, Side::A), rate_cap);
    r.per_pair_b[i] = detail::log_rate(lemma1_sinr(cfg, fading, i, Side::B), rate_cap);
  }
  r.update_sum();
  return r;
}

inline AsymptoticTerms asymptotic_terms(const SystemConfig& cfg, const LargeScaleFading& fading) {
  const double two_k = 2.0 * cfg.k();
  AsymptoticTerms t;
  t.mu = (fading.h_up.sum() + fading.g_up.sum()) / two_k;
  t.xi = two_k * t.mu + cfg.p_relay * cfg.sigma_loop / cfg.p_device;
  t.mu_tilde = detail::fourth_order_sum(fading) / two_k;
  t.mu_bar = detail::second_order_sum(fading) / two_k;
  return t;
}

/// Large-N limit of the rate under kappa^2 = kappa0^2 N^z. Returns nullopt for
/// z > 1, where the rate has no nonzero limit. Ideal hardware (both kappa0 = 0)
/// has no impairment ceiling and reports the rate cap.
inline std::optional<SEReport> corollary1_limit(const SystemConfig& cfg,
                                                const LargeScaleFading& fading,
                                                const ScalingLaw& law, int n,
                                                double rate_cap = kDefaultRateCap) {
  if (!(law.z > 0.0)) throw ConfigError("corollary1_limit: scaling exponent must be > 0");
  require_valid(cfg, fading);
  if (law.z > 1.0) return std::nullopt;

  const auto at = asymptotic_terms(cfg, fading);
  const double two_k = 2.0 * cfg.k();
  const double k0r2 = law.kappa0_r * law.kappa0_r;
  const double k0t2 = law.kappa0_t * law.kappa0_t;

  const auto sinr = [&](int pair, Side side) {
    const auto v = detail::view(fading, side);
    const double rd = v.receive_down[pair];
    const double su = v.source_up[pair];
    double num = rd * su * su;
    double den = 0.0;
    if (law.z < 1.0) {
      num *= std::pow(static_cast<double>(n), 1.0 - law.z);
      den = k0r2 * rd * su * at.xi + two_k * k0t2 * at.mu_tilde;
    } else {
      den = k0r2 * (two_k * k0t2 * at.mu_bar + rd * su) * at.xi + two_k * k0t2 * at.mu_tilde;
    }
    return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
  };

  SEReport r;
  r.estimator = Estimator::corollary1;
  r.per_pair_a.resize(cfg.k());
  r.per_pair_b.resize(cfg.k());
  for (int i = 0; i < cfg.k(); ++i) {
    r.per_pair_a[i] = detail::log_rate(sinr(i, Side::A), rate_cap);
    r.per_pair_b[i] = detail::log_rate(sinr(i, Side::B), rate_cap);
  }
  r.update_sum();
  return r;
}

/// Half-duplex two-phase baseline: the large-N approximation without loop or
/// inter-device interference, with a pre-log factor 1/2.
inline SEReport hd_baseline_se(const SystemConfig& cfg, const LargeScaleFading& fading,
                               double rate_cap = kDefaultRateCap) {
  SystemConfig hd = cfg;
  hd.set_interference(0.0);
  SEReport r = lemma1_se(hd, fading, rate_cap);
  r.estimator = Estimator::hd_baseline;
  r.per_pair_a *= 0.5;
  r.per_pair_b *= 0.5;
  r.update_sum();
  return r;
}

}  // namespace fdrelay
