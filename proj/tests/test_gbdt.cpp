#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ccx/gbdt.hpp"
#include "test_util.hpp"

using namespace ccx;
using namespace ccx::gbdt;

namespace {

// 40 points, two features, class 1 iff x0 + x1 > 1 with a clear margin.
void separable(std::vector<std::vector<double>>& X, std::vector<int>& y) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (X.size() < 40) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a + b - 1.0) < 0.15) continue;
    X.push_back({a, b});
    y.push_back(a + b > 1.0 ? 1 : 0);
  }
}

double log_loss(const ProbVector& p, int y) { return -std::log(p[static_cast<std::size_t>(y)]); }

Ensemble constant_ensemble(Task task, int classes, int rounds) {
  Ensemble e;
  e.task = task;
  e.n_classes = classes;
  e.rounds = rounds;
  e.n_features = 3;
  e.base_scores.assign(static_cast<std::size_t>(e.outputs()), 0.0);
  for (int i = 0; i < rounds * e.outputs(); ++i) e.trees.push_back(Tree{{Node{}}});
  return e;
}

// Random multiclass sparse data used by the staged-consistency checks.
struct SparseData {
  std::vector<SparseVector> X;
  std::vector<int> y;
  int features = 30;
};

SparseData random_sparse(int n, int classes, std::uint64_t seed) {
  SparseData d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const int label = i % classes;
    SparseVector v;
    for (int f = 0; f < d.features; ++f) {
      const double boost = (f % classes == label) ? 0.5 : 0.0;
      if (u(rng) < 0.2 + boost) v.push_back({f, u(rng)});
    }
    d.X.push_back(v);
    d.y.push_back(label);
  }
  return d;
}

}  // namespace

TEST(Train, SeparableToySetReachesPerfectAccuracy) {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  separable(X, y);
  TrainConfig cfg{Task::binary, 2, 20, 0.3, 3, 2, 1.0};
  const auto e = train(X, y, cfg);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto p = predict_proba(e, X[i]);
    EXPECT_EQ(p[1] >= 0.5 ? 1 : 0, y[i]) << "row " << i;
  }
}

TEST(Train, StagedLossNonIncreasingOnToySet) {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  separable(X, y);
  TrainConfig cfg{Task::binary, 2, 20, 0.3, 3, 2, 1.0};
  std::vector<double> trace;
  const auto e = train(X, y, cfg, &trace);
  for (std::size_t r = 1; r < trace.size(); ++r) EXPECT_LE(trace[r], trace[r - 1] + 1e-12);
  double prev = 1e300;
  for (int i = 0; i < e.rounds; ++i) {
    double total = 0;
    for (std::size_t r = 0; r < X.size(); ++r) total += log_loss(staged_predict_proba(e, X[r])[static_cast<std::size_t>(i)], y[r]);
    EXPECT_LE(total, prev + 1e-9);
    prev = total;
  }
}

TEST(Train, StumpsAtRootReproduceClassPrior) {
  const std::vector<std::vector<double>> X{{0}, {1}, {2}, {3}, {4}, {5}};
  const std::vector<int> y{0, 0, 0, 1, 2, 2};
  TrainConfig cfg{Task::multiclass, 0, 1, 1.0, 0, 1, 1.0};
  const auto e = train(X, y, cfg);
  for (const auto& x : X) {
    const auto p = predict_proba(e, x);
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(p[2], 1.0 / 3.0, 1e-12);
  }
}

TEST(Train, Deterministic) {
  const auto d = random_sparse(300, 3, 9);
  TrainConfig cfg{Task::multiclass, 3, 10, 0.1, 3, 5, 1.0};
  EXPECT_EQ(train(d.X, d.features, d.y, cfg), train(d.X, d.features, d.y, cfg));
}

TEST(Train, TreesRespectDepthAndLeafSize) {
  const auto d = random_sparse(400, 4, 2);
  TrainConfig cfg{Task::multiclass, 4, 5, 0.1, 2, 30, 1.0};
  const auto e = train(d.X, d.features, d.y, cfg);
  ASSERT_EQ(e.trees.size(), 20u);
  for (const auto& t : e.trees) {
    EXPECT_LE(t.depth(), 2);
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) {
        EXPECT_TRUE(std::isfinite(n.threshold));
      }
    }
  }
}

TEST(Train, SparseAndDenseAgree) {
  const auto d = random_sparse(200, 3, 4);
  std::vector<std::vector<double>> dense;
  for (const auto& v : d.X) {
    std::vector<double> row(static_cast<std::size_t>(d.features), 0.0);
    for (const auto& e : v) row[static_cast<std::size_t>(e.index)] = e.weight;
    dense.push_back(row);
  }
  TrainConfig cfg{Task::multiclass, 3, 5, 0.1, 3, 5, 1.0};
  EXPECT_EQ(train(d.X, d.features, d.y, cfg), train(dense, d.y, cfg));
}

TEST(Train, RejectsDegenerateData) {
  TrainConfig cfg{Task::multiclass, 3, 2, 0.1, 2, 1, 1.0};
  EXPECT_THROW(train(std::vector<std::vector<double>>{{1.0}}, std::vector<int>{0}, cfg), Error);
  EXPECT_THROW(train(std::vector<std::vector<double>>{{1.0}, {2.0}}, std::vector<int>{0, 2}, cfg), Error);  // class 1 missing
  EXPECT_THROW(train(std::vector<std::vector<double>>{{1.0}, {2.0}}, std::vector<int>{0, 5}, cfg), Error);
  TrainConfig bin{Task::binary, 2, 2, 0.1, 2, 1, 1.0};
  EXPECT_THROW(train(std::vector<std::vector<double>>{{1.0}, {2.0}}, std::vector<int>{0, 2}, bin), Error);
  TrainConfig bad = cfg;
  bad.rounds = 0;
  EXPECT_THROW(train(std::vector<std::vector<double>>{{1.0}, {2.0}, {3.0}}, std::vector<int>{0, 1, 2}, bad), Error);
}

TEST(Predict, ConstantEnsembles) {
  const auto b = constant_ensemble(Task::binary, 2, 3);
  EXPECT_EQ(predict_proba(b, std::vector<double>{1, 2, 3}), (ProbVector{0.5, 0.5}));
  const auto m = constant_ensemble(Task::multiclass, 3, 4);
  const auto p = predict_proba(m, std::vector<double>{0, 0, 0});
  for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  const auto staged = staged_predict_proba(m, std::vector<double>{0, 0, 0});
  ASSERT_EQ(staged.size(), 4u);
  for (const auto& s : staged) EXPECT_EQ(s, staged.front());
}

TEST(Predict, SingleRoundStagedIsPredict) {
  const auto d = random_sparse(100, 2, 8);
  TrainConfig cfg{Task::binary, 2, 1, 0.5, 2, 5, 1.0};
  const auto e = train(d.X, d.features, d.y, cfg);
  for (const auto& x : d.X) {
    const auto staged = staged_predict_proba(e, x);
    ASSERT_EQ(staged.size(), 1u);
    EXPECT_EQ(staged[0], predict_proba(e, x));
  }
}

TEST(Predict, StagedLastEqualsPredictBitExactly) {
  const auto d = random_sparse(300, 5, 12);
  TrainConfig cfg{Task::multiclass, 5, 15, 0.1, 3, 10, 1.0};
  const auto e = train(d.X, d.features, d.y, cfg);
  const auto probe = random_sparse(200, 5, 13);
  for (const auto& x : probe.X) {
    const auto staged = staged_predict_proba(e, x);
    ASSERT_EQ(staged.size(), 15u);
    EXPECT_EQ(staged.back(), predict_proba(e, x));
    for (const auto& s : staged) {
      double sum = 0;
      for (double v : s) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(ModelFile, RoundTripIsBitExact) {
  const auto d = random_sparse(300, 3, 21);
  TrainConfig cfg{Task::multiclass, 3, 8, 0.1, 4, 5, 1.0};
  const auto e = train(d.X, d.features, d.y, cfg);
  std::stringstream ss;
  write_model(ss, e);
  const auto back = read_model(ss);
  EXPECT_EQ(back, e);
  for (const auto& x : d.X) EXPECT_EQ(predict_proba(back, x), predict_proba(e, x));
}

TEST(ModelFile, BinaryRoundTripThroughDisk) {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  separable(X, y);
  const auto e = train(X, y, TrainConfig{Task::binary, 2, 5, 0.3, 2, 2, 1.0});
  ccx::testing::TempDir dir;
  save_model(dir.file("m.txt"), e);
  EXPECT_EQ(load_model(dir.file("m.txt")), e);
}

TEST(ModelFile, MalformedInputNamesLine) {
  std::stringstream ss("ccx-gbdt 1\ntask multiclass\nclasses 2\nfeatures 1\nrounds 1\nlearning_rate 0.1\nbase_scores 0 0\ntree 0 0 1\nleaf 0\ntree 0 1 1\nbranch\n");
  try {
    read_model(ss, "m");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 11"), std::string::npos) << e.what();
  }
}
