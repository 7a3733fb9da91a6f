#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccx/transforms.hpp"
#include "test_util.hpp"

using namespace ccx;

namespace {
std::vector<double> draws(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(g(rng));
  return v;
}
}  // namespace

TEST(QuantileMap, MedianGoesToCentre) {
  const auto u = EmpiricalQuantileMap::fit({1, 2, 3, 4, 5}, QuantileTarget::uniform);
  EXPECT_DOUBLE_EQ(u.transform(3), 0.5);
  const auto n = EmpiricalQuantileMap::fit({1, 2, 3, 4, 5}, QuantileTarget::normal);
  EXPECT_NEAR(n.transform(3), 0.0, 1e-15);
  EXPECT_NEAR(n.inverse_transform(0.0), 3.0, 1e-12);
}

TEST(QuantileMap, ClampsOutsideSample) {
  const auto u = EmpiricalQuantileMap::fit({1, 2, 3, 4, 5}, QuantileTarget::uniform);
  EXPECT_DOUBLE_EQ(u.transform(-100), 0.1);
  EXPECT_DOUBLE_EQ(u.transform(100), 0.9);
  EXPECT_DOUBLE_EQ(u.transform(1), 0.1);
  EXPECT_DOUBLE_EQ(u.transform(1.5), 0.2);
}

TEST(QuantileMap, TwoPointInverseInterpolates) {
  const auto u = EmpiricalQuantileMap::fit({0, 1}, QuantileTarget::uniform);
  EXPECT_DOUBLE_EQ(u.inverse_transform(0.5), 0.5);
  EXPECT_DOUBLE_EQ(u.inverse_transform(0.25), 0.0);
  EXPECT_DOUBLE_EQ(u.inverse_transform(0.75), 1.0);
}

TEST(QuantileMap, TiesTakeMidLevelAndStayMonotone) {
  const auto u = EmpiricalQuantileMap::fit({1, 2, 2, 2, 3}, QuantileTarget::uniform);
  EXPECT_DOUBLE_EQ(u.transform(2), 0.5);
  EXPECT_LT(u.transform(1.999), u.transform(2));
  EXPECT_LT(u.transform(2), u.transform(2.001));
}

TEST(QuantileMap, NormalSampleMapsNearIdentity) {
  const auto v = draws(100000, 1);
  const auto m = EmpiricalQuantileMap::fit(v, QuantileTarget::normal);
  double worst = 0;
  for (double x = -2.0; x <= 2.0; x += 0.01) worst = std::max(worst, std::abs(m.transform(x) - x));
  EXPECT_LT(worst, 0.05);
}

TEST(QuantileMap, MonotoneInBothDirections) {
  const auto v = draws(500, 2);
  for (auto target : {QuantileTarget::normal, QuantileTarget::uniform}) {
    const auto m = EmpiricalQuantileMap::fit(v, target);
    double prev = -1e300;
    for (double x = -5; x <= 5; x += 0.003) {
      const double y = m.transform(x);
      EXPECT_GE(y, prev);
      prev = y;
    }
    prev = -1e300;
    const double lo = target == QuantileTarget::normal ? -4.0 : 0.001, hi = target == QuantileTarget::normal ? 4.0 : 0.999;
    for (double y = lo; y <= hi; y += (hi - lo) / 2000) {
      const double x = m.inverse_transform(y);
      EXPECT_GE(x, prev);
      prev = x;
    }
  }
}

TEST(QuantileMap, UniformOutputsInsideOpenInterval) {
  const auto m = EmpiricalQuantileMap::fit(draws(50, 3), QuantileTarget::uniform);
  for (double x : {-1e9, -1.0, 0.0, 1.0, 1e9}) {
    EXPECT_GT(m.transform(x), 0.0);
    EXPECT_LT(m.transform(x), 1.0);
  }
}

TEST(QuantileMap, RoundTripAtSamplePoints) {
  const auto v = draws(1000, 4);
  for (auto target : {QuantileTarget::normal, QuantileTarget::uniform}) {
    const auto m = EmpiricalQuantileMap::fit(v, target);
    for (double x : v) EXPECT_NEAR(m.inverse_transform(m.transform(x)), x, 1e-9);
  }
}

TEST(QuantileMap, RankInvarianceUnderExp) {
  const auto v = draws(400, 5);
  std::vector<double> ev;
  for (double x : v) ev.push_back(std::exp(x));
  for (auto target : {QuantileTarget::normal, QuantileTarget::uniform}) {
    const auto a = EmpiricalQuantileMap::fit(v, target);
    const auto b = EmpiricalQuantileMap::fit(ev, target);
    for (double x : v) EXPECT_NEAR(a.transform(x), b.transform(std::exp(x)), 1e-12);
  }
}

TEST(QuantileMap, FittingSampleBecomesUniform) {
  const auto v = draws(5000, 6);
  const auto m = EmpiricalQuantileMap::fit(v, QuantileTarget::uniform);
  std::vector<double> u;
  for (double x : v) u.push_back(m.transform(x));
  EXPECT_LT(stats::ks_uniform(u), 2.0 / std::sqrt(5000.0));
}

TEST(QuantileMap, Errors) {
  EXPECT_THROW(EmpiricalQuantileMap::fit({1.0}, QuantileTarget::normal), Error);
  EXPECT_THROW(EmpiricalQuantileMap::fit({1.0, NAN}, QuantileTarget::normal), Error);
  EXPECT_THROW(EmpiricalQuantileMap::fit({1.0, INFINITY}, QuantileTarget::normal), Error);
  const auto n = EmpiricalQuantileMap::fit({1, 2}, QuantileTarget::normal);
  EXPECT_THROW(n.inverse_transform(NAN), Error);
  EXPECT_THROW(n.inverse_transform(INFINITY), Error);
  const auto u = EmpiricalQuantileMap::fit({1, 2}, QuantileTarget::uniform);
  EXPECT_THROW(u.inverse_transform(1.0), Error);
}

TEST(QuantileMapFile, RoundTrip) {
  ccx::testing::TempDir d;
  const auto m = EmpiricalQuantileMap::fit(draws(300, 7), QuantileTarget::normal);
  save_quantile_map(d.file("m.txt"), m);
  EXPECT_EQ(load_quantile_map(d.file("m.txt")), m);
  ccx::testing::write_text(d.file("bad.txt"), "target,normal\nn,3\n1\n0\n2\n");
  EXPECT_THROW(load_quantile_map(d.file("bad.txt")), Error);
}
