#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fdrelay/config.hpp"
#include "fdrelay/energy.hpp"
#include "fdrelay/impairments.hpp"
#include "fdrelay/report.hpp"

namespace fdrelay::experiments {

/// Everything one experiment run needs. `system.n_relay_antennas` is the
/// operating point of sweeps that do not vary N.
struct Scenario {
  SystemConfig system = make_config(1000, 10);
  LargeScaleFading fading = LargeScaleFading::uniform(10);

  // Scaling laws are the cross product of `z` and `kappa0` (applied to both
  // receive and transmit). kappa0_r/kappa0_t replace the kappa0 list.
  bool has_scaling = false;
  std::vector<double> kappa0;
  std::optional<double> kappa0_r;
  std::optional<double> kappa0_t;
  std::vector<double> z;

  PowerModel power;
  long trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  double rate_cap = kDefaultRateCap;

  std::vector<ScalingLaw> laws() const {
    std::vector<ScalingLaw> out;
    if (!has_scaling) return out;
    for (double zv : z) {
      if (kappa0_r || kappa0_t) {
        out.push_back({kappa0_r.value_or(0.0), kappa0_t.value_or(0.0), zv});
      } else {
        for (double k0 : kappa0) out.push_back({k0, k0, zv});
      }
    }
    return out;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": '" + text + "' is not a number");
  }
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": '" + text + "' is not an integer");
  }
  return v;
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

inline std::string join(const RVector& values) {
  return join(std::vector<double>(values.data(), values.data() + values.size()));
}

/// A scalar is broadcast to all K entries, otherwise exactly K values are required.
inline RVector per_pair(const std::string& key, const std::string& text, int k) {
  const auto values = parse_doubles(key, text);
  if (values.size() == 1) return RVector::Constant(k, values[0]);
  if (static_cast<int>(values.size()) != k) {
    throw ConfigError(key + ": expected 1 or " + std::to_string(k) + " values, got " +
                      std::to_string(values.size()));
  }
  return Eigen::Map<const RVector>(values.data(), k);
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "system.n",          "system.k",           "system.p_device",
      "system.p_relay",    "system.noise_relay", "system.noise_device_a",
      "system.noise_device_b", "system.sigma_loop", "system.sigma_interdevice",
      "system.kappa_r",    "system.kappa_t",     "system.interdevice_mode",
      "system.include_own_interdevice", "system.rate_cap",
      "fading.g_up",       "fading.h_up",        "fading.g_down",
      "fading.h_down",     "scaling.kappa0",     "scaling.kappa0_r",
      "scaling.kappa0_t",  "scaling.z",          "power.p_tx_chain",
      "power.p_rx_chain",  "power.p_static",     "power.amp_efficiency",
      "mc.trials",         "mc.seed",            "mc.workers"};
  return keys;
}

}  // namespace detail

/// Parses `section.key = value` lines. '#' starts a comment. Lists are comma
/// separated. Unknown and repeated keys are errors.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (!detail::known_keys().count(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

inline Scenario scenario_from_key_values(const std::map<std::string, std::string>& kv) {
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto real = [&](const char* key, double& target) {
    if (const auto* v = get(key)) target = detail::parse_double(key, *v);
  };

  Scenario s;
  int n = 1000;
  int k = 10;
  if (const auto* v = get("system.n")) n = static_cast<int>(detail::parse_integer("system.n", *v));
  if (const auto* v = get("system.k")) k = static_cast<int>(detail::parse_integer("system.k", *v));
  if (n < 1) throw ConfigError("system.n: must be >= 1");
  if (k < 1) throw ConfigError("system.k: must be >= 1");
  s.system = make_config(n, k);
  s.fading = LargeScaleFading::uniform(k);

  auto& c = s.system;
  real("system.p_device", c.p_device);
  real("system.p_relay", c.p_relay);
  real("system.noise_relay", c.noise_relay);
  real("system.sigma_loop", c.sigma_loop);
  real("system.kappa_r", c.kappa_r);
  real("system.kappa_t", c.kappa_t);
  real("system.rate_cap", s.rate_cap);
  if (const auto* v = get("system.noise_device_a")) c.noise_device_a = detail::per_pair("system.noise_device_a", *v, k);
  if (const auto* v = get("system.noise_device_b")) c.noise_device_b = detail::per_pair("system.noise_device_b", *v, k);
  if (const auto* v = get("system.sigma_interdevice")) {
    const auto values = detail::parse_doubles("system.sigma_interdevice", *v);
    const int m = 2 * k;
    if (values.size() == 1) {
      c.sigma_interdevice.setConstant(m, m, values[0]);
    } else if (static_cast<int>(values.size()) == m * m) {
      c.sigma_interdevice = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                            Eigen::RowMajor>>(values.data(), m, m);
    } else {
      throw ConfigError("system.sigma_interdevice: expected 1 or " + std::to_string(m * m) +
                        " values (row-major, victim rows)");
    }
  }
  if (const auto* v = get("system.interdevice_mode")) {
    if (*v == "expected") c.interdevice_mode = InterDeviceMode::expected;
    else if (*v == "sampled") c.interdevice_mode = InterDeviceMode::sampled;
    else throw ConfigError("system.interdevice_mode: expected 'expected' or 'sampled'");
  }
  if (const auto* v = get("system.include_own_interdevice")) {
    if (*v == "true") c.include_own_interdevice = true;
    else if (*v == "false") c.include_own_interdevice = false;
    else throw ConfigError("system.include_own_interdevice: expected 'true' or 'false'");
  }

  if (const auto* v = get("fading.g_up")) s.fading.g_up = detail::per_pair("fading.g_up", *v, k);
  if (const auto* v = get("fading.h_up")) s.fading.h_up = detail::per_pair("fading.h_up", *v, k);
  if (const auto* v = get("fading.g_down")) s.fading.g_down = detail::per_pair("fading.g_down", *v, k);
  if (const auto* v = get("fading.h_down")) s.fading.h_down = detail::per_pair("fading.h_down", *v, k);

  const auto* k0 = get("scaling.kappa0");
  const auto* k0r = get("scaling.kappa0_r");
  const auto* k0t = get("scaling.kappa0_t");
  const auto* zs = get("scaling.z");
  if (k0 || k0r || k0t || zs) {
    s.has_scaling = true;
    if (k0 && (k0r || k0t)) {
      throw ConfigError("scaling.kappa0 cannot be combined with scaling.kappa0_r/kappa0_t");
    }
    if (k0) s.kappa0 = detail::parse_doubles("scaling.kappa0", *k0);
    if (k0r) s.kappa0_r = detail::parse_double("scaling.kappa0_r", *k0r);
    if (k0t) s.kappa0_t = detail::parse_double("scaling.kappa0_t", *k0t);
    if (!k0 && !k0r && !k0t) s.kappa0 = {0.0};
    s.z = zs ? detail::parse_doubles("scaling.z", *zs) : std::vector<double>{1.0};
    for (double v : s.kappa0) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("scaling.kappa0: must be finite and >= 0");
    }
    for (double v : s.z) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("scaling.z: must be finite and > 0");
    }
  }

  real("power.p_tx_chain", s.power.p_tx_chain);
  real("power.p_rx_chain", s.power.p_rx_chain);
  real("power.p_static", s.power.p_static);
  real("power.amp_efficiency", s.power.amp_efficiency);

  if (const auto* v = get("mc.trials")) s.trials = detail::parse_integer("mc.trials", *v);
  if (const auto* v = get("mc.seed")) {
    const long long seed = detail::parse_integer("mc.seed", *v);
    if (seed < 0) throw ConfigError("mc.seed: must be >= 0");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (const auto* v = get("mc.workers")) s.workers = static_cast<int>(detail::parse_integer("mc.workers", *v));
  return s;
}

/// Rejects a scenario whose materialized models are invalid.
inline void validate_scenario(const Scenario& s) {
  require_valid(s.system, s.fading);
  require_valid(s.power);
  if (s.trials < 1) throw ConfigError("mc.trials: must be >= 1");
  if (s.workers < 1) throw ConfigError("mc.workers: must be >= 1");
  if (!(s.rate_cap > 0.0)) throw ConfigError("system.rate_cap: must be > 0");
}

inline Scenario parse_scenario(std::istream& in) {
  Scenario s = scenario_from_key_values(parse_key_values(in));
  validate_scenario(s);
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

/// Every effective setting, one `key = value` per line in sorted key order.
/// Parsing this text reproduces the scenario.
inline std::string canonical_serialization(const Scenario& s) {
  using detail::format_double;
  const auto& c = s.system;
  std::map<std::string, std::string> kv;
  kv["system.n"] = std::to_string(c.n_relay_antennas);
  kv["system.k"] = std::to_string(c.n_pairs);
  kv["system.p_device"] = format_double(c.p_device);
  kv["system.p_relay"] = format_double(c.p_relay);
  kv["system.noise_relay"] = format_double(c.noise_relay);
  kv["system.noise_device_a"] = detail::join(c.noise_device_a);
  kv["system.noise_device_b"] = detail::join(c.noise_device_b);
  kv["system.sigma_loop"] = format_double(c.sigma_loop);
  {
    std::vector<double> flat;
    for (Eigen::Index r = 0; r < c.sigma_interdevice.rows(); ++r) {
      for (Eigen::Index col = 0; col < c.sigma_interdevice.cols(); ++col) flat.push_back(c.sigma_interdevice(r, col));
    }
    kv["system.sigma_interdevice"] = detail::join(flat);
  }
  kv["system.kappa_r"] = format_double(c.kappa_r);
  kv["system.kappa_t"] = format_double(c.kappa_t);
  kv["system.interdevice_mode"] = c.interdevice_mode == InterDeviceMode::expected ? "expected" : "sampled";
  kv["system.include_own_interdevice"] = c.include_own_interdevice ? "true" : "false";
  kv["system.rate_cap"] = format_double(s.rate_cap);
  kv["fading.g_up"] = detail::join(s.fading.g_up);
  kv["fading.h_up"] = detail::join(s.fading.h_up);
  kv["fading.g_down"] = detail::join(s.fading.g_down);
  kv["fading.h_down"] = detail::join(s.fading.h_down);
  if (s.has_scaling) {
    if (s.kappa0_r || s.kappa0_t) {
      if (s.kappa0_r) kv["scaling.kappa0_r"] = format_double(*s.kappa0_r);
      if (s.kappa0_t) kv["scaling.kappa0_t"] = format_double(*s.kappa0_t);
    } else {
      kv["scaling.kappa0"] = detail::join(s.kappa0);
    }
    kv["scaling.z"] = detail::join(s.z);
  }
  kv["power.p_tx_chain"] = format_double(s.power.p_tx_chain);
  kv["power.p_rx_chain"] = format_double(s.power.p_rx_chain);
  kv["power.p_static"] = format_double(s.power.p_static);
  kv["power.amp_efficiency"] = format_double(s.power.amp_efficiency);
  kv["mc.trials"] = std::to_string(s.trials);
  kv["mc.seed"] = std::to_string(s.seed);
  kv["mc.workers"] = std::to_string(s.workers);

  std::string out;
  for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  return out;
}

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits. The worker
/// count does not affect results and is left out.
inline std::string scenario_hash(const Scenario& s) {
  Scenario copy = s;
  copy.workers = 1;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_serialization(copy)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fdrelay::experiments
