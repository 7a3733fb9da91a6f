#pragma once

// Empirical quantile maps onto a standard normal or uniform(0,1) target.
//
// The empirical CDF places the i-th smallest of n reference values (0-based)
// at level (i + 0.5) / n, interpolates linearly between neighbours and clamps
// outside the sample range to 0.5/n and 1 - 0.5/n. An input equal to a run
// of tied reference values takes the mid level of the run.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ccx/common.hpp"

namespace ccx {

enum class QuantileTarget { normal, uniform };

inline const char* to_string(QuantileTarget t) { return t == QuantileTarget::normal ? "normal" : "uniform"; }

class EmpiricalQuantileMap {
 public:
  EmpiricalQuantileMap() = default;

  static EmpiricalQuantileMap fit(std::vector<double> values, QuantileTarget target) {
    if (values.size() < 2) fail_data("quantile map: need at least two values");
    for (double v : values) {
      if (!std::isfinite(v)) fail_data("quantile map: non-finite value");
    }
    std::sort(values.begin(), values.end());
    EmpiricalQuantileMap m;
    m.sorted_ = std::move(values);
    m.target_ = target;
    return m;
  }

  std::size_t size() const { return sorted_.size(); }
  QuantileTarget target() const { return target_; }
  const std::vector<double>& reference() const { return sorted_; }

  // F-hat(x), always within [0.5/n, 1 - 0.5/n].
  double cdf_level(double x) const {
    const double n = static_cast<double>(sorted_.size());
    if (std::isnan(x)) fail_numeric("quantile map: NaN input");
    auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    auto hi = std::upper_bound(lo, sorted_.end(), x);
    const auto i_lo = static_cast<double>(lo - sorted_.begin());
    const auto i_hi = static_cast<double>(hi - sorted_.begin());
    if (hi != lo) return (0.5 * (i_lo + i_hi - 1.0) + 0.5) / n;
    if (hi == sorted_.begin()) return 0.5 / n;
    if (hi == sorted_.end()) return 1.0 - 0.5 / n;
    const double a = *(hi - 1), b = *hi;
    const double frac = (x - a) / (b - a);
    return (i_hi - 1.0 + 0.5 + frac) / n;
  }

  // F-hat^{-1}(u), linear between reference points, clamped at the ends.
  double quantile_of_level(double u) const {
    const double n = static_cast<double>(sorted_.size());
    if (std::isnan(u)) fail_numeric("quantile map: NaN level");
    const double p = u * n - 0.5;
    if (p <= 0.0) return sorted_.front();
    if (p >= n - 1.0) return sorted_.back();
    const auto i = static_cast<std::size_t>(std::floor(p));
    const double frac = p - static_cast<double>(i);
    if (frac == 0.0) return sorted_[i];
    return sorted_[i] + frac * (sorted_[i + 1] - sorted_[i]);
  }

  double transform(double x) const {
    const double u = cdf_level(x);
    return target_ == QuantileTarget::normal ? normal_quantile(u) : u;
  }

  double inverse_transform(double y) const {
    if (!std::isfinite(y)) fail_numeric("quantile map: non-finite input to inverse_transform");
    double u = y;
    if (target_ == QuantileTarget::normal) {
      u = normal_cdf(y);
    } else if (!(y > 0.0 && y < 1.0)) {
      fail_numeric("quantile map: uniform inverse_transform needs y in (0,1)");
    }
    return quantile_of_level(u);
  }

  bool operator==(const EmpiricalQuantileMap&) const = default;

 private:
  std::vector<double> sorted_;
  QuantileTarget target_ = QuantileTarget::uniform;
};

// Format: `target,<normal|uniform>` line, `n,<count>` line, then one value per line.
inline void write_quantile_map(std::ostream& out, const EmpiricalQuantileMap& m) {
  out << "target," << to_string(m.target()) << '\n' << "n," << m.size() << '\n';
  for (double v : m.reference()) out << format_double(v) << '\n';
}

inline EmpiricalQuantileMap read_quantile_map(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string {
    if (!std::getline(in, line)) fail_data(name + ": unexpected end of file after line " + std::to_string(line_no));
    ++line_no;
    return trim(line);
  };
  auto where = [&]() { return name + " line " + std::to_string(line_no); };
  auto target_line = split(next(), ',');
  if (target_line.size() != 2 || target_line[0] != "target") fail_data(where() + ": expected 'target,...'");
  QuantileTarget target;
  if (target_line[1] == "normal") target = QuantileTarget::normal;
  else if (target_line[1] == "uniform") target = QuantileTarget::uniform;
  else fail_data(where() + ": unknown target '" + target_line[1] + "'");
  auto n_line = split(next(), ',');
  if (n_line.size() != 2 || n_line[0] != "n") fail_data(where() + ": expected 'n,...'");
  const auto n = parse_int(n_line[1], where());
  if (n < 2) fail_data(where() + ": need at least two values");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) values.push_back(parse_double(next(), where()));
  if (!std::is_sorted(values.begin(), values.end())) fail_data(name + ": reference values must be sorted");
  return EmpiricalQuantileMap::fit(std::move(values), target);
}

inline void save_quantile_map(const std::string& path, const EmpiricalQuantileMap& m) {
  auto out = open_output(path);
  write_quantile_map(out, m);
  if (!out) fail_usage("write failed: " + path);
}

inline EmpiricalQuantileMap load_quantile_map(const std::string& path) {
  auto in = open_input(path);
  return read_quantile_map(in, path);
}

}  // namespace ccx
