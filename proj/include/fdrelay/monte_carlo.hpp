#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "fdrelay/closed_form.hpp"
#include "fdrelay/relay.hpp"
#include "fdrelay/report.hpp"

namespace fdrelay {

struct MonteCarloOptions {
  int workers = 1;
  double rate_cap = kDefaultRateCap;
};

/// Large-N expectation identities checked by simulation. Ratio identities are
/// averaged over the K receivers on side A.
enum class Identity : int {
  inv_uplink_norm,     ///< E{1/||h_ui||^2}
  inv_desired_gain,    ///< E{1/|g_di^T F h_ui|^2}
  loop_ratio,          ///< E{||g_di^T F G_RR||^2 / |g_di^T F h_ui|^2}
  fa_norm,             ///< E{||F A||^2}
  loop_norm,           ///< E{||F G_RR||^2}
  precoder_norm,       ///< E{||F||^2}
  rho_sq,              ///< E{rho^2}
  inter_pair_h,        ///< E{sum_{j!=i} |g_di^T F h_uj|^2 / |g_di^T F h_ui|^2}
  inter_pair_g,        ///< E{sum_{j!=i} |g_di^T F g_uj|^2 / |g_di^T F h_ui|^2}
  rx_distortion_ratio, ///< E{|g_di^T F eta_r|^2 / |g_di^T F h_ui|^2}
  tx_distortion_ratio, ///< E{|g_di^T eta_t|^2 / |g_di^T F h_ui|^2}
};

inline constexpr int kIdentityCount = 11;

inline const char* identity_id(Identity id) {
  static constexpr std::array<const char*, kIdentityCount> names = {
      "a_inv_uplink_norm", "b_inv_desired_gain", "c_loop_ratio",         "d_fa_norm",
      "e_loop_norm",       "f_precoder_norm",    "g_rho_sq",             "h1_inter_pair_h",
      "h2_inter_pair_g",   "i1_rx_distortion",   "i2_tx_distortion"};
  return names[static_cast<int>(id)];
}

/// Raw per-trial output of a Monte-Carlo run.
struct MonteCarloRun {
  int n = 0;
  int k = 0;
  long trials = 0;
  RMatrix sinr;        ///< trials x 2K; columns A_0..A_{K-1}, then B_0..B_{K-1}
  RMatrix identities;  ///< trials x kIdentityCount
};

namespace detail {

inline void record_trial(const SystemConfig& cfg, const ChannelRealization& ch,
                         const ProjectedTrial& p, MonteCarloRun& run, long t) {
  const int k = cfg.k();
  for (int i = 0; i < k; ++i) {
    run.sinr(t, i) = projected_sinr_terms(cfg, ch, p, i, Side::A).sinr();
    run.sinr(t, k + i) = projected_sinr_terms(cfg, ch, p, i, Side::B).sinr();
  }

  std::array<double, kIdentityCount> acc{};
  for (int i = 0; i < k; ++i) {
    const auto idx = pair_indices(k, i, Side::A);
    const Eigen::RowVectorXcd v = p.downlink_gram.row(idx.receive);
    const Eigen::RowVectorXcd gains = v * p.uplink_gram;
    const double desired = std::norm(gains[idx.desired]);
    double via_h = 0.0;
    double via_g = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      via_h += std::norm(gains[k + j]);
      via_g += std::norm(gains[j]);
    }
    acc[0] += 1.0 / p.uplink_gram(idx.desired, idx.desired).real();
    acc[1] += 1.0 / desired;
    acc[2] += (v * p.loop_gram * v.adjoint())(0).real() / desired;
    acc[7] += via_h / desired;
    acc[8] += via_g / desired;
    acc[9] += std::norm((v * p.rx_distortion)(0)) / desired;
    acc[10] += std::norm(p.tx_distortion[idx.receive]) / desired;
  }
  for (double& x : acc) x /= k;
  acc[3] = p.fa_sq;
  acc[4] = p.fg_sq;
  acc[5] = p.f_sq;
  acc[6] = p.rho_sq;
  for (int c = 0; c < kIdentityCount; ++c) run.identities(t, c) = acc[static_cast<std::size_t>(c)];
}

/// Welford running mean/variance in trial order.
struct MeanVar {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / (count - 1) / count);
  }
};

}  // namespace detail

/// Runs `trials` independent coherence blocks. Trial t draws its channels from
/// derive_seed(seed, t, channel) and its distortions from derive_seed(seed, t, draw),
/// so the output does not depend on `options.workers`.
inline MonteCarloRun simulate(const SystemConfig& cfg, const LargeScaleFading& fading, long trials,
                              std::uint64_t seed, const MonteCarloOptions& options = {}) {
  require_valid(cfg, fading);
  if (trials < 1) throw ConfigError("Monte-Carlo run needs trials >= 1");

  MonteCarloRun run;
  run.n = cfg.n();
  run.k = cfg.k();
  run.trials = trials;
  run.sinr.resize(trials, 2 * cfg.k());
  run.identities.resize(trials, kIdentityCount);

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(trials)));
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&](int worker) {
    try {
      ChannelRealization ch;
      CMatrix scratch;
      for (long t = worker; t < trials; t += workers) {
        const auto index = static_cast<std::uint64_t>(t);
        sample_channels_into(cfg, fading, derive_seed(seed, index, Stream::channel), ch);
        const TrialDraw draw = sample_trial_draw(cfg, ch, derive_seed(seed, index, Stream::draw));
        const ProjectedTrial p = project_trial(cfg, ch, draw, scratch);
        detail::record_trial(cfg, ch, p, run, t);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return run;
}

/// Mean of log2(1 + SINR) per receiver.
inline SEReport ergodic_report(const MonteCarloRun& run, double rate_cap = kDefaultRateCap) {
  const int k = run.k;
  SEReport r;
  r.estimator = Estimator::mc_ergodic;
  r.trials = run.trials;
  r.per_pair_a.resize(k);
  r.per_pair_b.resize(k);
  RateErrors se;
  se.per_pair_a.resize(k);
  se.per_pair_b.resize(k);

  std::vector<detail::MeanVar> cols(static_cast<std::size_t>(2 * k));
  detail::MeanVar total;
  for (long t = 0; t < run.trials; ++t) {
    double sum = 0.0;
    for (int c = 0; c < 2 * k; ++c) {
      const double rate = rate_from_sinr(run.sinr(t, c), rate_cap);
      cols[static_cast<std::size_t>(c)].add(rate);
      sum += rate;
    }
    total.add(sum);
  }
  for (int i = 0; i < k; ++i) {
    r.per_pair_a[i] = cols[static_cast<std::size_t>(i)].mean;
    r.per_pair_b[i] = cols[static_cast<std::size_t>(k + i)].mean;
    se.per_pair_a[i] = cols[static_cast<std::size_t>(i)].std_error();
    se.per_pair_b[i] = cols[static_cast<std::size_t>(k + i)].std_error();
  }
  r.update_sum();
  se.sum_se = total.std_error();
  r.std_error = se;
  return r;
}

/// log2(1 + 1/E{1/SINR}) per receiver. Standard errors by the delta method.
inline SEReport jensen_report(const MonteCarloRun& run, double rate_cap = kDefaultRateCap) {
  const int k = run.k;
  std::vector<detail::MeanVar> cols(static_cast<std::size_t>(2 * k));
  for (long t = 0; t < run.trials; ++t) {
    for (int c = 0; c < 2 * k; ++c) {
      const double s = run.sinr(t, c);
      if (!(s > 0.0)) throw NumericalError("Jensen estimator undefined: a trial has zero SINR");
      cols[static_cast<std::size_t>(c)].add(1.0 / s);
    }
  }

  // d/dm log2(1 + 1/m) = -1 / (ln 2 (m^2 + m))
  std::vector<double> slope(static_cast<std::size_t>(2 * k), 0.0);
  RVector rates(2 * k);
  RVector errors(2 * k);
  for (int c = 0; c < 2 * k; ++c) {
    const auto& mv = cols[static_cast<std::size_t>(c)];
    const double m = mv.mean;
    rates[c] = m == 0.0 ? rate_cap : rate_from_sinr(1.0 / m, rate_cap);
    if (m > 0.0) slope[static_cast<std::size_t>(c)] = -1.0 / (std::numbers::ln2 * (m * m + m));
    errors[c] = std::abs(slope[static_cast<std::size_t>(c)]) * mv.std_error();
  }
  detail::MeanVar linearised;
  for (long t = 0; t < run.trials; ++t) {
    double z = 0.0;
    for (int c = 0; c < 2 * k; ++c) z += slope[static_cast<std::size_t>(c)] / run.sinr(t, c);
    linearised.add(z);
  }

  SEReport r;
  r.estimator = Estimator::mc_jensen;
  r.trials = run.trials;
  r.per_pair_a = rates.head(k);
  r.per_pair_b = rates.tail(k);
  r.update_sum();
  RateErrors se;
  se.per_pair_a = errors.head(k);
  se.per_pair_b = errors.tail(k);
  se.sum_se = linearised.std_error();
  r.std_error = se;
  return r;
}

inline SEReport mc_ergodic_se(const SystemConfig& cfg, const LargeScaleFading& fading, long trials,
                              std::uint64_t seed, const MonteCarloOptions& options = {}) {
  return ergodic_report(simulate(cfg, fading, trials, seed, options), options.rate_cap);
}

inline SEReport mc_jensen_se(const SystemConfig& cfg, const LargeScaleFading& fading, long trials,
                             std::uint64_t seed, const MonteCarloOptions& options = {}) {
  return jensen_report(simulate(cfg, fading, trials, seed, options), options.rate_cap);
}

/// Large-N value of every identity at cfg's N, averaged over side-A receivers
/// where the identity is per receiver.
inline std::array<double, kIdentityCount> identity_closed_forms(const SystemConfig& cfg,
                                                                const LargeScaleFading& f) {
  const int k = cfg.k();
  const double n = cfg.n();
  const double n4 = n * n * n * n;
  const double kr2 = cfg.kappa_r * cfg.kappa_r;
  const double kt2 = cfg.kappa_t * cfg.kappa_t;

  std::array<double, kIdentityCount> out{};
  for (int i = 0; i < k; ++i) {
    const double hu = f.h_up[i];
    const double gd = f.g_down[i];
    out[0] += 1.0 / (n * hu);
    out[1] += 1.0 / (n4 * gd * gd * hu * hu);
    out[2] += cfg.sigma_loop / hu;
    double via_h = 0.0;
    double via_g = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      via_h += f.h_up[j] / hu + f.h_up[j] * f.h_up[j] * f.g_down[j] / (hu * hu * gd);
      via_g += f.g_up[j] / hu + f.g_up[j] * f.g_up[j] * f.h_down[j] / (hu * hu * gd);
    }
    out[7] += via_h / n;
    out[8] += via_g / n;
    out[9] += kr2 * detail::received_power(cfg, f) / (n * hu);
    out[10] += kt2 * cfg.p_relay / (n4 * gd * hu * hu);
  }
  for (double& x : out) x /= k;
  out[3] = n * n * n * detail::fourth_order_sum(f);
  out[4] = n * n * n * cfg.sigma_loop * detail::second_order_sum(f);
  out[5] = n * n * detail::second_order_sum(f);
  out[6] = cfg.p_relay / (n * n * n * lemma1_j(cfg, f));
  return out;
}

struct IdentityRow {
  std::string id;
  int n = 0;
  double mc_estimate = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  double relative_std_error = 0.0;  ///< standard error of mc_estimate / closed_form
};

inline std::vector<IdentityRow> identity_table(const MonteCarloRun& run, const SystemConfig& cfg,
                                               const LargeScaleFading& fading) {
  const auto closed = identity_closed_forms(cfg, fading);
  std::vector<IdentityRow> rows;
  for (int c = 0; c < kIdentityCount; ++c) {
    detail::MeanVar mv;
    for (long t = 0; t < run.trials; ++t) mv.add(run.identities(t, c));
    IdentityRow row;
    row.id = identity_id(static_cast<Identity>(c));
    row.n = run.n;
    row.mc_estimate = mv.mean;
    row.closed_form = closed[static_cast<std::size_t>(c)];
    const double scale = std::abs(row.closed_form);
    const double diff = std::abs(row.mc_estimate - row.closed_form);
    row.relative_error = scale > 0.0 ? diff / scale : diff;
    row.relative_std_error = scale > 0.0 ? mv.std_error() / scale : mv.std_error();
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<IdentityRow> verify_appendix_identities(SystemConfig cfg,
                                                           const LargeScaleFading& fading, int n,
                                                           long trials, std::uint64_t seed,
                                                           const MonteCarloOptions& options = {}) {
  cfg.n_relay_antennas = n;
  return identity_table(simulate(cfg, fading, trials, seed, options), cfg, fading);
}

}  // namespace fdrelay
