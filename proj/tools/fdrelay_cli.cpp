// Command-line driver for the sweeps and the validation table.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdrelay/fdrelay.hpp"

namespace {

using namespace fdrelay;
using namespace fdrelay::experiments;

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string scenario;
  std::string out;
  std::string dat;
  std::optional<long> trials;
  std::optional<long long> seed;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "scenario file (section.key = value lines)");
  cmd->add_option("--out", c.out, "CSV output path (default: stdout)");
  cmd->add_option("--dat", c.dat, "also write a space-separated .dat file");
  cmd->add_option("--trials", c.trials, "Monte-Carlo trials, overrides mc.trials");
  cmd->add_option("--seed", c.seed, "master seed, overrides mc.seed");
  cmd->add_option("--workers", c.workers, "worker threads, overrides mc.workers");
}

Scenario load(const Common& c) {
  Scenario s = c.scenario.empty() ? Scenario{} : load_scenario(c.scenario);
  if (c.trials) s.trials = *c.trials;
  if (c.seed) {
    if (*c.seed < 0) throw ConfigError("--seed must be >= 0");
    s.seed = static_cast<std::uint64_t>(*c.seed);
  }
  if (c.workers) s.workers = *c.workers;
  validate_scenario(s);
  for (const auto& v : validate_config(s.system, s.fading)) {
    if (v.severity == Violation::Severity::warning) std::cerr << "warning: " << v.field << " " << v.message << "\n";
  }
  return s;
}

/// "64,128,256" or "start:step:stop".
std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    std::vector<long long> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(experiments::detail::parse_integer("--n", item));
    if (parts.size() != 3 || parts[1] <= 0 || parts[2] < parts[0]) {
      throw ConfigError("--n range must be start:step:stop with step > 0 and stop >= start");
    }
    for (long long n = parts[0]; n <= parts[2]; n += parts[1]) out.push_back(static_cast<int>(n));
    return out;
  }
  for (const auto& item : experiments::detail::split_list(text)) {
    out.push_back(static_cast<int>(experiments::detail::parse_integer("--n", item)));
  }
  return out;
}

std::vector<Estimator> parse_estimators(const std::string& text) {
  std::vector<Estimator> out;
  for (const auto& item : experiments::detail::split_list(text)) {
    const auto e = parse_estimator(item);
    if (!e) throw ConfigError("unknown estimator '" + item + "'");
    out.push_back(*e);
  }
  return out;
}

template <typename Row>
void emit(const Common& c, const std::vector<Row>& rows) {
  if (c.out.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + c.out + "'");
    write_csv(f, rows);
  }
  if (!c.dat.empty()) {
    std::ofstream f(c.dat, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + c.dat + "'");
    write_dat(f, rows);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way full-duplex massive MIMO relay: spectral and energy efficiency sweeps"};
  app.require_subcommand(1);

  Common sweep_n_opts, interf_opts, ee_opts, validate_opts;
  std::string n_text;
  std::string ee_n_text = "10:1:2000";
  std::string validate_n_text = "128,256,512,1024";
  std::string estimators_text;
  std::string sigma_text;

  auto* sweep_n = app.add_subcommand("sweep-n", "sum SE against relay antenna count");
  add_common(sweep_n, sweep_n_opts);
  sweep_n->add_option("--n", n_text, "antenna counts: comma list or start:step:stop")
      ->default_str("64,128,256,512,1024");
  sweep_n->add_option("--estimators", estimators_text,
                      "mc_ergodic, mc_jensen, lemma1, corollary1, hd_baseline")
      ->default_str("lemma1 (+corollary1 with a scaling law)");

  auto* interf = app.add_subcommand("sweep-interference", "FD and HD sum SE against loop/inter-device variance");
  add_common(interf, interf_opts);
  interf->add_option("--sigma-sq", sigma_text, "comma list of variances")->default_str("10^-1..10^2, 20 per decade");

  auto* ee = app.add_subcommand("sweep-ee", "energy efficiency against antenna count");
  add_common(ee, ee_opts);
  ee->add_option("--n", ee_n_text, "antenna counts: comma list or start:step:stop")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "large-N identities and closed-form vs simulation gap");
  add_common(validate, validate_opts);
  validate->add_option("--n", validate_n_text, "antenna counts: comma list or start:step:stop")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sweep_n) {
      const Scenario s = load(sweep_n_opts);
      const auto ns = parse_n_list(n_text.empty() ? "64,128,256,512,1024" : n_text);
      std::vector<Estimator> est;
      if (estimators_text.empty()) {
        est.push_back(Estimator::lemma1);
        if (s.has_scaling) est.push_back(Estimator::corollary1);
      } else {
        est = parse_estimators(estimators_text);
      }
      emit(sweep_n_opts, run_sweep_n(s, ns, est));
    } else if (*interf) {
      const Scenario s = load(interf_opts);
      std::vector<double> sigma;
      if (sigma_text.empty()) {
        sigma = log_grid(-1.0, 2.0, 20);
      } else {
        sigma = experiments::detail::parse_doubles("--sigma-sq", sigma_text);
      }
      emit(interf_opts, run_sweep_interference(s, sigma));
    } else if (*ee) {
      const Scenario s = load(ee_opts);
      emit(ee_opts, run_sweep_ee(s, parse_n_list(ee_n_text)));
    } else if (*validate) {
      const Scenario s = load(validate_opts);
      emit(validate_opts, run_validate(s, parse_n_list(validate_n_text)));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
