#pragma once

// Dual transformation between a benchmark and a target score sample, the
// Complexity AUC under that curve, and effectiveness.
//
// Convention: a target concentrated at higher complexity than the benchmark
// bends the curve above the identity, so AUC > 0.5 and effectiveness < 0.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ccx/common.hpp"
#include "ccx/transforms.hpp"

namespace ccx {

namespace detail {
inline void check_score_sample(const std::vector<double>& s, const char* which) {
  if (s.size() < 2) fail_data(std::string("complexity auc: ") + which + " sample needs at least two scores");
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (*lo == *hi) fail_data(std::string("complexity auc: ") + which + " sample is constant");
}
}  // namespace detail

// f = T_T^{N,-1} . T_B^N, built once and evaluated many times.
class DualTransform {
 public:
  DualTransform(std::vector<double> benchmark, std::vector<double> target, QuantileTarget via = QuantileTarget::normal) {
    detail::check_score_sample(benchmark, "benchmark");
    detail::check_score_sample(target, "target");
    benchmark_ = EmpiricalQuantileMap::fit(std::move(benchmark), via);
    target_ = EmpiricalQuantileMap::fit(std::move(target), via);
  }

  double operator()(double x) const {
    if (target_.target() == QuantileTarget::normal) return target_.inverse_transform(benchmark_.transform(x));
    // Uniform route: levels stay inside [0.5/n, 1-0.5/n], so go through the
    // level functions directly.
    return target_.quantile_of_level(benchmark_.cdf_level(x));
  }

  std::size_t benchmark_size() const { return benchmark_.size(); }
  std::size_t target_size() const { return target_.size(); }

 private:
  EmpiricalQuantileMap benchmark_;
  EmpiricalQuantileMap target_;
};

inline double dual_transform(const std::vector<double>& benchmark, const std::vector<double>& target, double x) {
  return DualTransform(benchmark, target)(x);
}

inline double effectiveness(double auc) {
  if (!(auc >= 0.0 && auc <= 1.0)) fail_numeric("effectiveness: auc must lie in [0,1]");
  return 1.0 - auc / 0.5;
}

struct DualCurve {
  std::vector<double> x;
  std::vector<double> f;
  double auc = 0;
  double effectiveness = 0;
  std::size_t n_benchmark = 0;
  std::size_t n_target = 0;
};

inline DualCurve complexity_auc(const std::vector<double>& benchmark, const std::vector<double>& target, int K = 1000) {
  if (K < 2) fail_usage("complexity_auc: K must be at least 2");
  const DualTransform dual(benchmark, target);
  DualCurve c;
  c.n_benchmark = benchmark.size();
  c.n_target = target.size();
  c.x.reserve(static_cast<std::size_t>(K) + 1);
  c.f.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    const double x = static_cast<double>(k) / K;
    c.x.push_back(x);
    c.f.push_back(dual(x));
  }
  double area = 0.0;
  for (int k = 0; k < K; ++k) area += 0.5 * (c.f[static_cast<std::size_t>(k)] + c.f[static_cast<std::size_t>(k) + 1]);
  c.auc = std::clamp(area / K, 0.0, 1.0);
  c.effectiveness = effectiveness(c.auc);
  return c;
}

struct GroupRow {
  std::string name;
  double auc = 0;
  double effectiveness = 0;
  std::size_t n = 0;
};

struct GroupReport {
  std::vector<GroupRow> rows;  // sorted by auc, descending
  double reference_auc = 0.5;
};

inline GroupReport group_report(const std::vector<double>& background,
                                const std::map<std::string, std::vector<double>>& groups, int K = 1000) {
  if (groups.empty()) fail_usage("group_report: no groups given");
  GroupReport r;
  for (const auto& [name, scores] : groups) {
    const auto c = complexity_auc(background, scores, K);
    r.rows.push_back({name, c.auc, c.effectiveness, scores.size()});
  }
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const GroupRow& a, const GroupRow& b) { return a.auc > b.auc; });
  return r;
}

inline void save_curve(const std::string& path, const DualCurve& c) {
  auto out = open_output(path);
  out << "x,f_x\n";
  for (std::size_t k = 0; k < c.x.size(); ++k) out << format_double(c.x[k]) << ',' << format_double(c.f[k]) << '\n';
  if (!out) fail_usage("write failed: " + path);
}

inline void save_curve_summary(const std::string& path, const DualCurve& c) {
  auto out = open_output(path);
  out << "auc,effectiveness,n_benchmark,n_target\n"
      << format_double(c.auc) << ',' << format_double(c.effectiveness) << ',' << c.n_benchmark << ',' << c.n_target << '\n';
  if (!out) fail_usage("write failed: " + path);
}

inline void save_group_report(const std::string& path, const GroupReport& r) {
  auto out = open_output(path);
  out << "group,auc,effectiveness,n,reference_auc\n";
  for (const auto& row : r.rows) {
    out << row.name << ',' << format_double(row.auc) << ',' << format_double(row.effectiveness) << ',' << row.n << ','
        << format_double(r.reference_auc) << '\n';
  }
  if (!out) fail_usage("write failed: " + path);
}

}  // namespace ccx
