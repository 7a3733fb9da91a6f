#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccx/cauc.hpp"
#include "test_util.hpp"

using namespace ccx;

namespace {

std::vector<double> uniform_sample(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(u(rng));
  return v;
}

// CDF y^2 on [0,1]: mass toward high scores.
std::vector<double> high_sample(int n, std::uint64_t seed) {
  auto v = uniform_sample(n, seed);
  for (auto& x : v) x = std::sqrt(x);
  return v;
}

// CDF 1-(1-y)^2: mass toward low scores.
std::vector<double> low_sample(int n, std::uint64_t seed) {
  auto v = uniform_sample(n, seed);
  for (auto& x : v) x = 1.0 - std::sqrt(1.0 - x);
  return v;
}

}  // namespace

TEST(DualTransform, IdenticalSamplesGiveIdentityAtSamplePoints) {
  const auto s = uniform_sample(2000, 1);
  const DualTransform f(s, s);
  for (double x : s) EXPECT_NEAR(f(x), x, 1e-9);
}

TEST(DualTransform, SquareRootOracle) {
  const auto b = uniform_sample(10000, 2);
  const auto t = high_sample(10000, 3);
  EXPECT_NEAR(dual_transform(b, t, 0.25), 0.5, 0.02);
  const DualTransform f(b, t);
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) EXPECT_NEAR(f(x), std::sqrt(x), 0.02);
}

TEST(DualTransform, NormalRouteEqualsDirectQuantileMatching) {
  const auto b = uniform_sample(3000, 4);
  const auto t = high_sample(2500, 5);
  const DualTransform via_normal(b, t, QuantileTarget::normal);
  const DualTransform via_uniform(b, t, QuantileTarget::uniform);
  for (int k = 0; k <= 2000; ++k) {
    const double x = -0.1 + 1.2 * k / 2000.0;
    EXPECT_NEAR(via_normal(x), via_uniform(x), 1e-9) << "x=" << x;
  }
}

TEST(DualTransform, MonotoneAndWithinTargetRange) {
  const auto b = low_sample(500, 6);
  const auto t = high_sample(700, 7);
  const DualTransform f(b, t);
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  double prev = -1;
  for (int k = 0; k <= 1000; ++k) {
    const double y = f(k / 1000.0);
    EXPECT_GE(y, prev);
    EXPECT_GE(y, *lo);
    EXPECT_LE(y, *hi);
    prev = y;
  }
}

TEST(DualTransform, RejectsDegenerateSamples) {
  const auto ok = uniform_sample(10, 8);
  EXPECT_THROW(dual_transform({0.3, 0.3, 0.3}, ok, 0.5), Error);
  EXPECT_THROW(dual_transform(ok, {0.4}, 0.5), Error);
}

TEST(ComplexityAuc, IdenticalDistributionsGiveHalf) {
  const auto c = complexity_auc(uniform_sample(10000, 9), uniform_sample(10000, 10));
  EXPECT_NEAR(c.auc, 0.5, 0.01);
  EXPECT_NEAR(c.effectiveness, 0.0, 0.02);
}

TEST(ComplexityAuc, HighComplexityTargetIsConcaveAndLessEffective) {
  const auto c = complexity_auc(uniform_sample(10000, 11), high_sample(10000, 12));
  EXPECT_NEAR(c.auc, 2.0 / 3.0, 0.02);
  EXPECT_NEAR(c.effectiveness, -1.0 / 3.0, 0.04);
}

TEST(ComplexityAuc, LowComplexityTargetIsMoreEffective) {
  const auto c = complexity_auc(uniform_sample(10000, 13), low_sample(10000, 14));
  EXPECT_NEAR(c.auc, 1.0 / 3.0, 0.02);
  EXPECT_NEAR(c.effectiveness, 1.0 / 3.0, 0.04);
}

TEST(ComplexityAuc, SwapAntisymmetry) {
  const auto a = uniform_sample(10000, 15);
  const auto b = high_sample(10000, 16);
  EXPECT_NEAR(complexity_auc(a, b).auc + complexity_auc(b, a).auc, 1.0, 0.02);
}

TEST(ComplexityAuc, UpwardShiftStrictlyIncreasesAuc) {
  const auto b = uniform_sample(3000, 17);
  auto t = uniform_sample(3000, 18);
  for (auto& x : t) x *= 0.9;
  double prev = complexity_auc(b, t).auc;
  for (int step = 0; step < 3; ++step) {
    for (auto& x : t) x += 0.02;
    const double next = complexity_auc(b, t).auc;
    EXPECT_GT(next, prev);
    prev = next;
  }
}

TEST(ComplexityAuc, CurveInvariants) {
  const auto c = complexity_auc(low_sample(800, 19), high_sample(900, 20), 250);
  ASSERT_EQ(c.x.size(), 251u);
  ASSERT_EQ(c.f.size(), 251u);
  EXPECT_EQ(c.x.front(), 0.0);
  EXPECT_EQ(c.x.back(), 1.0);
  for (std::size_t k = 1; k < c.f.size(); ++k) EXPECT_GE(c.f[k], c.f[k - 1]);
  for (double v : c.f) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_NEAR(c.effectiveness, 1.0 - c.auc / 0.5, 1e-12);
  EXPECT_EQ(c.n_benchmark, 800u);
  EXPECT_EQ(c.n_target, 900u);
  EXPECT_THROW(complexity_auc(low_sample(10, 1), high_sample(10, 2), 1), Error);
}

TEST(Effectiveness, PaperArithmetic) {
  EXPECT_EQ(effectiveness(0.5), 0.0);
  EXPECT_NEAR(effectiveness(0.698), -0.396, 1e-3);
  EXPECT_NEAR(effectiveness(0.294), 0.412, 1e-3);
  EXPECT_EQ(effectiveness(0.0), 1.0);
  EXPECT_EQ(effectiveness(1.0), -1.0);
  EXPECT_THROW(effectiveness(1.2), Error);
  EXPECT_THROW(effectiveness(-0.1), Error);
  EXPECT_THROW(effectiveness(NAN), Error);
}

TEST(GroupReport, SingleIdenticalGroup) {
  const auto bg = uniform_sample(5000, 21);
  const auto r = group_report(bg, {{"same", bg}});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_NEAR(r.rows[0].auc, 0.5, 0.01);
  EXPECT_EQ(r.reference_auc, 0.5);
}

TEST(GroupReport, ShiftedGroupsStraddleHalfInOrder) {
  const auto bg = uniform_sample(10000, 22);
  const auto r = group_report(bg, {{"low", low_sample(5000, 23)}, {"high", high_sample(5000, 24)}, {"mid", uniform_sample(5000, 25)}});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].name, "high");
  EXPECT_EQ(r.rows[1].name, "mid");
  EXPECT_EQ(r.rows[2].name, "low");
  EXPECT_GT(r.rows[0].auc, 0.5);
  EXPECT_LT(r.rows[2].auc, 0.5);
  EXPECT_EQ(r.rows[0].n, 5000u);
  EXPECT_THROW(group_report(bg, {}), Error);
}

TEST(CaucFiles, CurveSummaryAndReportLayout) {
  ccx::testing::TempDir d;
  const auto c = complexity_auc(uniform_sample(100, 26), high_sample(120, 27), 4);
  save_curve(d.file("curve.csv"), c);
  save_curve_summary(d.file("summary.csv"), c);
  const auto curve = ccx::testing::slurp(d.file("curve.csv"));
  EXPECT_EQ(curve.rfind("x,f_x\n0,", 0), 0u);
  EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 6);
  const auto summary = ccx::testing::slurp(d.file("summary.csv"));
  EXPECT_EQ(summary.rfind("auc,effectiveness,n_benchmark,n_target\n", 0), 0u);
  EXPECT_NE(summary.find(",100,120\n"), std::string::npos);
  save_group_report(d.file("groups.csv"), group_report(uniform_sample(100, 28), {{"a", high_sample(50, 29)}}));
  EXPECT_EQ(ccx::testing::slurp(d.file("groups.csv")).rfind("group,auc,effectiveness,n,reference_auc\na,", 0), 0u);
}
