#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "fdrelay/types.hpp"

namespace fdrelay {

/// Rate reported for an infinite SINR, in bits/s/Hz.
inline constexpr double kDefaultRateCap = 64.0;

enum class Estimator { mc_ergodic, mc_jensen, lemma1, corollary1, hd_baseline };

inline std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::mc_ergodic: return "mc_ergodic";
    case Estimator::mc_jensen: return "mc_jensen";
    case Estimator::lemma1: return "lemma1";
    case Estimator::corollary1: return "corollary1";
    case Estimator::hd_baseline: return "hd_baseline";
  }
  return "unknown";
}

inline std::optional<Estimator> parse_estimator(std::string_view s) {
  for (auto e : {Estimator::mc_ergodic, Estimator::mc_jensen, Estimator::lemma1,
                 Estimator::corollary1, Estimator::hd_baseline}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

inline bool is_monte_carlo(Estimator e) {
  return e == Estimator::mc_ergodic || e == Estimator::mc_jensen;
}

/// log2(1 + sinr), with +inf mapped to `cap`.
inline double rate_from_sinr(double sinr, double cap = kDefaultRateCap) {
  if (std::isinf(sinr)) return cap;
  return std::min(std::log2(1.0 + sinr), cap);
}

struct RateErrors {
  RVector per_pair_a;
  RVector per_pair_b;
  double sum_se = 0.0;
};

/// Per-pair and sum spectral efficiencies from one estimator.
struct SEReport {
  RVector per_pair_a;
  RVector per_pair_b;
  double sum_se = 0.0;
  Estimator estimator = Estimator::lemma1;
  long trials = 0;
  std::optional<RateErrors> std_error;

  /// Recomputes sum_se as the sum over both sides.
  void update_sum() { sum_se = per_pair_a.sum() + per_pair_b.sum(); }
};

}  // namespace fdrelay
