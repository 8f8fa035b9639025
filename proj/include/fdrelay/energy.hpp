#pragma once

#include <optional>
#include <vector>

#include "fdrelay/closed_form.hpp"

namespace fdrelay {

/// Circuit and amplifier power figures of the consumption model.
struct PowerModel {
  double p_tx_chain = 1.0;   ///< P_t per transmit RF chain, W
  double p_rx_chain = 0.3;   ///< P_r per receive RF chain, W
  double p_static = 2.0;     ///< P_0, W
  double amp_efficiency = 0.35;
};

inline void require_valid(const PowerModel& pm) {
  if (!(pm.p_tx_chain >= 0.0) || !(pm.p_rx_chain >= 0.0) || !(pm.p_static >= 0.0)) {
    throw ConfigError("power model: chain and static powers must be >= 0");
  }
  if (!(pm.amp_efficiency > 0.0 && pm.amp_efficiency <= 1.0)) {
    throw ConfigError("power model: amplifier efficiency must lie in (0, 1]");
  }
}

/// (N + 2K)(P_t + P_r) + P_0 + (2K P_U + P_R) / phi.
inline double total_power(const SystemConfig& cfg, const PowerModel& pm) {
  require_valid(pm);
  const double chains = cfg.n() + 2.0 * cfg.k();
  return chains * (pm.p_tx_chain + pm.p_rx_chain) + pm.p_static +
         (2.0 * cfg.k() * cfg.p_device + cfg.p_relay) / pm.amp_efficiency;
}

inline double energy_efficiency(const SystemConfig& cfg, const PowerModel& pm,
                                const SEReport& se) {
  const double p = total_power(cfg, pm);
  if (!(p > 0.0)) throw NumericalError("energy efficiency undefined: total power is zero");
  return se.sum_se / p;
}

/// EE with the sum SE taken from a closed-form estimator. Monte-Carlo estimators
/// need trials and a seed; compute their SEReport first and use the overload above.
inline double energy_efficiency(const SystemConfig& cfg, const LargeScaleFading& fading,
                                const PowerModel& pm, Estimator source,
                                const std::optional<ScalingLaw>& law = std::nullopt) {
  switch (source) {
    case Estimator::lemma1: return energy_efficiency(cfg, pm, lemma1_se(cfg, fading));
    case Estimator::hd_baseline: return energy_efficiency(cfg, pm, hd_baseline_se(cfg, fading));
    case Estimator::corollary1: {
      if (!law) throw ConfigError("corollary1 energy efficiency needs a scaling law");
      const auto se = corollary1_limit(cfg, fading, *law, cfg.n());
      return se ? energy_efficiency(cfg, pm, *se) : 0.0;
    }
    default:
      throw ConfigError("energy_efficiency: Monte-Carlo sources need an SEReport");
  }
}

struct EnergyPoint {
  int n = 0;
  double sum_se = 0.0;
  double p_total = 0.0;
  double ee = 0.0;
};

struct EnergyOptimum {
  int n_opt = 0;
  double ee_opt = 0.0;
  std::vector<EnergyPoint> sweep;
};

/// Large-N sum SE, total power and EE at antenna count `n`.
inline EnergyPoint energy_point(const SystemConfig& cfg_template, const LargeScaleFading& fading,
                                const PowerModel& pm, int n,
                                const std::optional<ScalingLaw>& law) {
  SystemConfig cfg = cfg_template;
  cfg.n_relay_antennas = n;
  if (law) cfg = with_scaling(cfg, *law);
  EnergyPoint pt;
  pt.n = n;
  pt.sum_se = lemma1_se(cfg, fading).sum_se;
  pt.p_total = total_power(cfg, pm);
  pt.ee = pt.sum_se / pt.p_total;
  return pt;
}

/// Index of the EE maximum, ties to the earliest (smallest N when sorted).
inline std::size_t argmax_ee(const std::vector<EnergyPoint>& sweep) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (sweep[i].ee > sweep[best].ee) best = i;
  }
  return best;
}

/// Exhaustive integer search of the EE-optimal antenna count over [n_min, n_max].
inline EnergyOptimum optimal_antennas(const SystemConfig& cfg_template,
                                      const LargeScaleFading& fading, const PowerModel& pm,
                                      int n_min, int n_max,
                                      const std::optional<ScalingLaw>& law = std::nullopt) {
  if (n_min < 1) throw ConfigError("optimal_antennas: n_min must be >= 1");
  if (n_max < n_min) throw ConfigError("optimal_antennas: empty antenna range");
  EnergyOptimum out;
  out.sweep.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) out.sweep.push_back(energy_point(cfg_template, fading, pm, n, law));
  const auto& best = out.sweep[argmax_ee(out.sweep)];
  out.n_opt = best.n;
  out.ee_opt = best.ee;
  return out;
}

}  // namespace fdrelay
