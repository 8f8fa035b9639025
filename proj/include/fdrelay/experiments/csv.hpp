#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdrelay/experiments/scenario.hpp"

namespace fdrelay::experiments {

/// One output line of a sweep. Unset optionals are written as empty cells.
struct SweepRow {
  std::string sweep_var;
  std::optional<double> sweep_value;
  std::string estimator;
  std::optional<double> kappa0;
  std::optional<double> z;
  std::optional<double> sum_se;
  std::optional<double> std_error;
  std::optional<double> p_total;
  std::optional<double> ee;
  std::string scenario_hash;

  bool operator==(const SweepRow&) const = default;
};

/// Output of the validation command: identity rows and closed-form vs simulation gaps.
struct ValidationRow {
  int n = 0;
  std::string identity;
  double mc_estimate = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  double std_error = 0.0;
  std::string scenario_hash;

  bool operator==(const ValidationRow&) const = default;
};

inline constexpr const char* kSweepHeader =
    "sweep_var,sweep_value,estimator,kappa0,z,sum_se,std_error,p_total,ee,scenario_hash";
inline constexpr const char* kValidationHeader =
    "n,identity,mc_estimate,closed_form,relative_error,std_error,scenario_hash";

/// 10 significant digits, the precision of every emitted number.
inline std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_cell(const std::optional<double>& v) {
  return v ? format_cell(*v) : std::string();
}

/// The value a number takes after a write/parse cycle.
inline double quantize(double v) { return std::strtod(format_cell(v).c_str(), nullptr); }

inline std::optional<double> quantize(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return quantize(*v);
}

inline SweepRow quantize(SweepRow r) {
  r.sweep_value = quantize(r.sweep_value);
  r.kappa0 = quantize(r.kappa0);
  r.z = quantize(r.z);
  r.sum_se = quantize(r.sum_se);
  r.std_error = quantize(r.std_error);
  r.p_total = quantize(r.p_total);
  r.ee = quantize(r.ee);
  return r;
}

inline std::vector<SweepRow> quantize(std::vector<SweepRow> rows) {
  for (auto& r : rows) r = quantize(std::move(r));
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.sweep_var << ',' << format_cell(r.sweep_value) << ',' << r.estimator << ','
        << format_cell(r.kappa0) << ',' << format_cell(r.z) << ',' << format_cell(r.sum_se) << ','
        << format_cell(r.std_error) << ',' << format_cell(r.p_total) << ',' << format_cell(r.ee)
        << ',' << r.scenario_hash << '\n';
  }
}

inline void write_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
  out << kValidationHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.identity << ',' << format_cell(r.mc_estimate) << ','
        << format_cell(r.closed_form) << ',' << format_cell(r.relative_error) << ','
        << format_cell(r.std_error) << ',' << r.scenario_hash << '\n';
  }
}

/// gnuplot-friendly copy: same columns separated by spaces, header commented,
/// empty cells written as NaN.
inline void write_dat(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "# sweep_var sweep_value estimator kappa0 z sum_se std_error p_total ee scenario_hash\n";
  const auto cell = [](const std::optional<double>& v) { return v ? format_cell(*v) : std::string("NaN"); };
  for (const auto& r : rows) {
    out << r.sweep_var << ' ' << cell(r.sweep_value) << ' ' << r.estimator << ' ' << cell(r.kappa0)
        << ' ' << cell(r.z) << ' ' << cell(r.sum_se) << ' ' << cell(r.std_error) << ' '
        << cell(r.p_total) << ' ' << cell(r.ee) << ' ' << r.scenario_hash << '\n';
  }
}

inline void write_dat(std::ostream& out, const std::vector<ValidationRow>& rows) {
  out << "# n identity mc_estimate closed_form relative_error std_error scenario_hash\n";
  for (const auto& r : rows) {
    out << r.n << ' ' << r.identity << ' ' << format_cell(r.mc_estimate) << ' '
        << format_cell(r.closed_form) << ' ' << format_cell(r.relative_error) << ' '
        << format_cell(r.std_error) << ' ' << r.scenario_hash << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_cells(const std::string& line, std::size_t expected, int lineno) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (cells.size() != expected) {
    throw ConfigError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(expected) +
                      " cells, got " + std::to_string(cells.size()));
  }
  return cells;
}

inline std::optional<double> optional_cell(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_double("csv cell", text);
}

}  // namespace detail

inline std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw ConfigError("csv: unexpected header");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = detail::split_cells(line, 10, lineno);
    SweepRow r;
    r.sweep_var = c[0];
    r.sweep_value = detail::optional_cell(c[1]);
    r.estimator = c[2];
    r.kappa0 = detail::optional_cell(c[3]);
    r.z = detail::optional_cell(c[4]);
    r.sum_se = detail::optional_cell(c[5]);
    r.std_error = detail::optional_cell(c[6]);
    r.p_total = detail::optional_cell(c[7]);
    r.ee = detail::optional_cell(c[8]);
    r.scenario_hash = c[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_csv(in);
}

inline std::vector<ValidationRow> parse_validation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kValidationHeader) throw ConfigError("csv: unexpected header");
  std::vector<ValidationRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = detail::split_cells(line, 7, lineno);
    ValidationRow r;
    r.n = static_cast<int>(detail::parse_integer("csv n", c[0]));
    r.identity = c[1];
    r.mc_estimate = detail::parse_double("csv mc_estimate", c[2]);
    r.closed_form = detail::parse_double("csv closed_form", c[3]);
    r.relative_error = detail::parse_double("csv relative_error", c[4]);
    r.std_error = detail::parse_double("csv std_error", c[5]);
    r.scenario_hash = c[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fdrelay::experiments
