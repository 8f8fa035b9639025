#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fdrelay/closed_form.hpp"
#include "fdrelay/energy.hpp"
#include "fdrelay/experiments/csv.hpp"
#include "fdrelay/experiments/scenario.hpp"
#include "fdrelay/monte_carlo.hpp"

namespace fdrelay::experiments {

inline constexpr const char* kCrossoverVar = "crossover_sigma_sq";
inline constexpr const char* kOptimumVar = "n_opt";
inline constexpr const char* kGapId = "lemma1_vs_mc_jensen";

/// log10-spaced grid from 10^lo to 10^hi inclusive, `per_decade` points per decade.
inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround((hi - lo) * per_decade));
  for (int i = 0; i <= steps; ++i) out.push_back(std::pow(10.0, lo + (hi - lo) * i / steps));
  return out;
}

/// First point where `fd` drops below `hd`, located by linear interpolation of
/// fd - hd in log10(sigma_sq) between the bracketing grid points. nullopt when
/// fd never drops below hd or already starts below it.
inline std::optional<double> locate_crossover(const std::vector<double>& sigma_sq,
                                              const std::vector<double>& fd,
                                              const std::vector<double>& hd) {
  for (std::size_t i = 0; i < sigma_sq.size(); ++i) {
    if (!(fd[i] < hd[i])) continue;
    if (i == 0) return std::nullopt;
    const double d0 = fd[i - 1] - hd[i - 1];
    const double d1 = fd[i] - hd[i];
    const double t = d0 / (d0 - d1);
    if (sigma_sq[i - 1] > 0.0) {
      const double x0 = std::log10(sigma_sq[i - 1]);
      const double x1 = std::log10(sigma_sq[i]);
      return std::pow(10.0, x0 + t * (x1 - x0));
    }
    return sigma_sq[i - 1] + t * (sigma_sq[i] - sigma_sq[i - 1]);
  }
  return std::nullopt;
}

namespace detail {

/// The laws a sweep iterates over; a single "no law" entry when the scenario has none.
inline std::vector<std::optional<ScalingLaw>> sweep_laws(const Scenario& s) {
  std::vector<std::optional<ScalingLaw>> out;
  for (const auto& law : s.laws()) out.emplace_back(law);
  if (out.empty()) out.emplace_back(std::nullopt);
  return out;
}

inline SweepRow base_row(const std::string& var, double value, Estimator e,
                         const std::optional<ScalingLaw>& law, const std::string& hash) {
  SweepRow r;
  r.sweep_var = var;
  r.sweep_value = value;
  r.estimator = std::string(to_string(e));
  if (law) {
    r.kappa0 = law->kappa0_r;
    r.z = law->z;
  }
  r.scenario_hash = hash;
  return r;
}

inline SystemConfig at_n(const Scenario& s, int n, const std::optional<ScalingLaw>& law) {
  SystemConfig cfg = s.system;
  cfg.n_relay_antennas = n;
  if (law) cfg = with_scaling(cfg, *law);
  return cfg;
}

inline MonteCarloOptions mc_options(const Scenario& s) {
  MonteCarloOptions o;
  o.workers = s.workers;
  o.rate_cap = s.rate_cap;
  return o;
}

}  // namespace detail

/// Sum SE against N for every (z, kappa0) law and requested estimator. kappa
/// follows the scaling law at each N; Monte-Carlo estimators share one run per point.
inline std::vector<SweepRow> run_sweep_n(const Scenario& s, const std::vector<int>& n_values,
                                         const std::vector<Estimator>& estimators) {
  validate_scenario(s);
  const std::string hash = scenario_hash(s);
  const auto laws = detail::sweep_laws(s);
  const bool needs_mc = std::any_of(estimators.begin(), estimators.end(), is_monte_carlo);
  for (auto e : estimators) {
    if (e == Estimator::corollary1 && !laws.front()) {
      throw ConfigError("corollary1 rows need a scaling law (scaling.z / scaling.kappa0)");
    }
  }

  std::vector<SweepRow> rows;
  for (const auto& law : laws) {
    for (int n : n_values) {
      if (n < 1) throw ConfigError("antenna count must be >= 1");
      const SystemConfig cfg = detail::at_n(s, n, law);
      std::optional<MonteCarloRun> run;
      if (needs_mc) run = simulate(cfg, s.fading, s.trials, s.seed, detail::mc_options(s));

      for (auto e : estimators) {
        SweepRow row = detail::base_row("n", n, e, law, hash);
        std::optional<SEReport> se;
        switch (e) {
          case Estimator::mc_ergodic: se = ergodic_report(*run, s.rate_cap); break;
          case Estimator::mc_jensen: se = jensen_report(*run, s.rate_cap); break;
          case Estimator::lemma1: se = lemma1_se(cfg, s.fading, s.rate_cap); break;
          case Estimator::corollary1: se = corollary1_limit(cfg, s.fading, *law, n, s.rate_cap); break;
          case Estimator::hd_baseline: se = hd_baseline_se(cfg, s.fading, s.rate_cap); break;
        }
        if (se) {
          row.sum_se = se->sum_se;
          if (se->std_error) row.std_error = se->std_error->sum_se;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// FD and HD sum SE against the common loop/inter-device variance at the
/// scenario's N, followed by one crossover row per law. Without configured
/// laws, kappa0 in {0, 0.1} with z = 1 are used.
inline std::vector<SweepRow> run_sweep_interference(const Scenario& scenario,
                                                    const std::vector<double>& sigma_sq_values) {
  validate_scenario(scenario);
  if (std::any_of(sigma_sq_values.begin(), sigma_sq_values.end(),
                  [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
    throw ConfigError("interference variances must be finite and >= 0");
  }
  Scenario s = scenario;
  if (!s.has_scaling) {
    s.has_scaling = true;
    s.kappa0 = {0.0, 0.1};
    s.z = {1.0};
  }
  const std::string hash = scenario_hash(s);
  const int n = s.system.n();

  std::vector<SweepRow> rows;
  std::vector<SweepRow> crossovers;
  for (const auto& law : s.laws()) {
    std::vector<double> fd_sum;
    std::vector<double> hd_sum;
    for (double sigma_sq : sigma_sq_values) {
      SystemConfig cfg = detail::at_n(s, n, law);
      cfg.set_interference(sigma_sq);

      const SEReport fd = lemma1_se(cfg, s.fading, s.rate_cap);
      const SEReport hd = hd_baseline_se(cfg, s.fading, s.rate_cap);
      fd_sum.push_back(fd.sum_se);
      hd_sum.push_back(hd.sum_se);

      SweepRow r = detail::base_row("sigma_sq", sigma_sq, Estimator::lemma1, law, hash);
      r.sum_se = fd.sum_se;
      rows.push_back(r);

      r = detail::base_row("sigma_sq", sigma_sq, Estimator::corollary1, law, hash);
      if (const auto lim = corollary1_limit(cfg, s.fading, law, n, s.rate_cap)) r.sum_se = lim->sum_se;
      rows.push_back(r);

      r = detail::base_row("sigma_sq", sigma_sq, Estimator::hd_baseline, law, hash);
      r.sum_se = hd.sum_se;
      rows.push_back(r);
    }
    SweepRow c = detail::base_row(kCrossoverVar, 0.0, Estimator::lemma1, law, hash);
    c.sweep_value = locate_crossover(sigma_sq_values, fd_sum, hd_sum);
    crossovers.push_back(c);
  }
  rows.insert(rows.end(), crossovers.begin(), crossovers.end());
  return rows;
}

/// Large-N sum SE, total power and EE against N for every law, then one row
/// per law holding its EE-optimal N (ties to the smaller N).
inline std::vector<SweepRow> run_sweep_ee(const Scenario& s, const std::vector<int>& n_values) {
  validate_scenario(s);
  const std::string hash = scenario_hash(s);
  if (n_values.empty()) throw ConfigError("EE sweep needs at least one antenna count");

  std::vector<SweepRow> rows;
  std::vector<SweepRow> optima;
  for (const auto& law : detail::sweep_laws(s)) {
    std::vector<EnergyPoint> sweep;
    for (int n : n_values) {
      if (n < 1) throw ConfigError("antenna count must be >= 1");
      const EnergyPoint pt = energy_point(s.system, s.fading, s.power, n, law);
      sweep.push_back(pt);
      SweepRow r = detail::base_row("n", n, Estimator::lemma1, law, hash);
      r.sum_se = pt.sum_se;
      r.p_total = pt.p_total;
      r.ee = pt.ee;
      rows.push_back(r);
    }
    // Smallest N among equal maxima, whatever order n_values came in.
    std::size_t best = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i) {
      if (sweep[i].ee > sweep[best].ee || (sweep[i].ee == sweep[best].ee && sweep[i].n < sweep[best].n)) {
        best = i;
      }
    }
    SweepRow o = detail::base_row(kOptimumVar, sweep[best].n, Estimator::lemma1, law, hash);
    o.sum_se = sweep[best].sum_se;
    o.p_total = sweep[best].p_total;
    o.ee = sweep[best].ee;
    optima.push_back(o);
  }
  rows.insert(rows.end(), optima.begin(), optima.end());
  return rows;
}

/// Identity table and closed-form vs simulation gap per N, from one Monte-Carlo run
/// per N (all N share the scenario seed). Uses the first scaling law if any.
inline std::vector<ValidationRow> run_validate(const Scenario& s, const std::vector<int>& n_values) {
  validate_scenario(s);
  if (s.trials < 100) throw ConfigError("validation needs mc.trials >= 100");
  const std::string hash = scenario_hash(s);
  const auto law = detail::sweep_laws(s).front();

  std::vector<ValidationRow> rows;
  for (int n : n_values) {
    if (n < 1) throw ConfigError("antenna count must be >= 1");
    const SystemConfig cfg = detail::at_n(s, n, law);
    const MonteCarloRun run = simulate(cfg, s.fading, s.trials, s.seed, detail::mc_options(s));
    for (const auto& id : identity_table(run, cfg, s.fading)) {
      rows.push_back({n, id.id, id.mc_estimate, id.closed_form, id.relative_error,
                      id.relative_std_error, hash});
    }
    const SEReport jensen = jensen_report(run, s.rate_cap);
    const SEReport lemma = lemma1_se(cfg, s.fading, s.rate_cap);
    const double se = jensen.std_error ? jensen.std_error->sum_se : 0.0;
    rows.push_back({n, kGapId, jensen.sum_se, lemma.sum_se,
                    std::abs(jensen.sum_se - lemma.sum_se) / lemma.sum_se, se / lemma.sum_se, hash});
  }
  return rows;
}

}  // namespace fdrelay::experiments
