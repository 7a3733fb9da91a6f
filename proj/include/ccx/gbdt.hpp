#pragma once

// Gradient-boosted regression trees with softmax (multiclass) or logistic
// (binary) cross-entropy, exact greedy splits and Newton leaf values.
// Staged outputs after every boosting round are first-class: the complexity
// measures read the whole trajectory, not just the final prediction.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ccx/common.hpp"
#include "ccx/textvec.hpp"

namespace ccx::gbdt {

enum class Task { binary, multiclass };

inline const char* to_string(Task t) { return t == Task::binary ? "binary" : "multiclass"; }

using ProbVector = std::vector<double>;

struct Node {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output with shrinkage applied
  bool is_leaf() const { return feature < 0; }
  bool operator==(const Node&) const = default;
};

// Row accessors: `row(f)` returns the value of feature f (absent = 0).
struct SparseRow {
  const SparseVector& v;
  double operator()(int f) const { return value_at(v, f); }
};

struct DenseRow {
  std::span<const double> v;
  double operator()(int f) const { return f < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(f)] : 0.0; }
};

struct Tree {
  std::vector<Node> nodes;  // nodes[0] is the root

  // Goes left iff value <= threshold.
  template <class Row>
  double predict(const Row& row) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const Node& n = nodes[static_cast<std::size_t>(i)];
      i = row(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }

  int depth() const {
    std::function<int(int)> rec = [&](int i) -> int {
      const Node& n = nodes[static_cast<std::size_t>(i)];
      return n.is_leaf() ? 0 : 1 + std::max(rec(n.left), rec(n.right));
    };
    return nodes.empty() ? 0 : rec(0);
  }

  bool operator==(const Tree&) const = default;
};

struct Ensemble {
  Task task = Task::multiclass;
  int n_classes = 2;
  int n_features = 0;
  int rounds = 0;
  double learning_rate = 0.1;
  std::vector<double> base_scores;  // one per output
  std::vector<Tree> trees;          // round-major: trees[round * outputs() + k]

  int outputs() const { return task == Task::binary ? 1 : n_classes; }
  const Tree& tree(int round, int k) const { return trees[static_cast<std::size_t>(round * outputs() + k)]; }
  bool operator==(const Ensemble&) const = default;
};

struct TrainConfig {
  Task task = Task::multiclass;
  int n_classes = 0;  // 0: infer as max label + 1
  int rounds = 60;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_samples_leaf = 20;
  double l2 = 1.0;
};

// Column-major view of the training matrix, each column sorted by value
// descending (ties by row). Sparse columns whose explicit values are all
// positive keep their zeros implicit.
class FeatureMatrix {
 public:
  static FeatureMatrix from_sparse(std::span<const SparseVector> rows, int n_features) {
    FeatureMatrix m;
    m.n_rows_ = static_cast<int>(rows.size());
    m.n_features_ = n_features;
    m.columns_.resize(static_cast<std::size_t>(n_features));
    for (int r = 0; r < m.n_rows_; ++r) {
      int prev = -1;
      for (const auto& e : rows[static_cast<std::size_t>(r)]) {
        if (e.index < 0 || e.index >= n_features) fail_data("gbdt: feature index out of range");
        if (e.index <= prev) fail_data("gbdt: sparse indices must be strictly increasing");
        if (!std::isfinite(e.weight)) fail_numeric("gbdt: non-finite feature value");
        prev = e.index;
        auto& col = m.columns_[static_cast<std::size_t>(e.index)];
        col.values.push_back(e.weight);
        col.rows.push_back(r);
      }
    }
    for (auto& col : m.columns_) {
      bool all_positive = std::all_of(col.values.begin(), col.values.end(), [](double v) { return v > 0.0; });
      if (!all_positive) {
        std::vector<double> dense(static_cast<std::size_t>(m.n_rows_), 0.0);
        for (std::size_t i = 0; i < col.rows.size(); ++i) dense[static_cast<std::size_t>(col.rows[i])] = col.values[i];
        col.values = std::move(dense);
        col.rows.resize(static_cast<std::size_t>(m.n_rows_));
        for (int r = 0; r < m.n_rows_; ++r) col.rows[static_cast<std::size_t>(r)] = r;
      }
      col.implicit_zeros = all_positive && static_cast<int>(col.rows.size()) < m.n_rows_;
      col.sort();
    }
    return m;
  }

  static FeatureMatrix from_dense(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix m;
    m.n_rows_ = static_cast<int>(rows.size());
    m.n_features_ = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    m.columns_.resize(static_cast<std::size_t>(m.n_features_));
    for (auto& col : m.columns_) {
      col.values.reserve(rows.size());
      col.rows.reserve(rows.size());
    }
    for (int r = 0; r < m.n_rows_; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (static_cast<int>(row.size()) != m.n_features_) fail_data("gbdt: dense rows must share one width");
      for (int f = 0; f < m.n_features_; ++f) {
        double v = row[static_cast<std::size_t>(f)];
        if (!std::isfinite(v)) fail_numeric("gbdt: non-finite feature value");
        m.columns_[static_cast<std::size_t>(f)].values.push_back(v);
        m.columns_[static_cast<std::size_t>(f)].rows.push_back(r);
      }
    }
    for (auto& col : m.columns_) col.sort();
    return m;
  }

  int rows() const { return n_rows_; }
  int features() const { return n_features_; }

  struct Column {
    std::vector<double> values;
    std::vector<int> rows;
    bool implicit_zeros = false;

    void sort() {
      std::vector<std::size_t> order(values.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return rows[a] < rows[b];
      });
      std::vector<double> v(values.size());
      std::vector<int> r(rows.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = values[order[i]];
        r[i] = rows[order[i]];
      }
      values = std::move(v);
      rows = std::move(r);
    }
  };

  const Column& column(int f) const { return columns_[static_cast<std::size_t>(f)]; }

 private:
  int n_rows_ = 0;
  int n_features_ = 0;
  std::vector<Column> columns_;
};

namespace detail {

// Threshold with a <= t < b.
inline double split_point(double a, double b) {
  double t = a + 0.5 * (b - a);
  return t < b ? t : a;
}

inline void softmax_into(const std::vector<double>& scores, ProbVector& out) {
  out.resize(scores.size());
  double mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) sum += (out[k] = std::exp(scores[k] - mx));
  for (double& p : out) p /= sum;
}

inline void to_proba(Task task, const std::vector<double>& scores, ProbVector& out) {
  if (task == Task::binary) {
    double p = 1.0 / (1.0 + std::exp(-scores[0]));
    out.assign({1.0 - p, p});
  } else {
    softmax_into(scores, out);
  }
}

struct Stats {
  double g = 0.0;
  double h = 0.0;
  int n = 0;
};

struct Candidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Grows one regression tree on (grad, hess); returns the tree and the leaf
// node reached by each training row.
inline Tree grow_tree(const FeatureMatrix& X, const std::vector<double>& grad, const std::vector<double>& hess,
                      const TrainConfig& cfg, std::vector<int>& node_of) {
  constexpr double kMinGain = 1e-12;
  const int n = X.rows();
  const double lambda = cfg.l2;
  Tree tree;
  std::vector<Stats> stats;

  auto add_node = [&](const std::vector<int>& members_of_node, int id) {
    Stats s;
    for (int r = 0; r < n; ++r) {
      if (members_of_node[static_cast<std::size_t>(r)] == id) {
        s.g += grad[static_cast<std::size_t>(r)];
        s.h += hess[static_cast<std::size_t>(r)];
        ++s.n;
      }
    }
    return s;
  };

  node_of.assign(static_cast<std::size_t>(n), 0);
  tree.nodes.push_back(Node{});
  stats.push_back(add_node(node_of, 0));

  std::vector<int> frontier;
  if (stats[0].n >= 2 * cfg.min_samples_leaf) frontier.push_back(0);

  auto score = [lambda](double g, double h) { return g * g / (h + lambda); };

  for (int depth = 0; depth < cfg.max_depth && !frontier.empty(); ++depth) {
    const int n_slots = static_cast<int>(frontier.size());
    std::vector<int> slot_of(tree.nodes.size(), -1);
    for (int s = 0; s < n_slots; ++s) slot_of[static_cast<std::size_t>(frontier[static_cast<std::size_t>(s)])] = s;
    std::vector<int> row_slot(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) row_slot[static_cast<std::size_t>(r)] = slot_of[static_cast<std::size_t>(node_of[static_cast<std::size_t>(r)])];

    std::vector<Stats> total(static_cast<std::size_t>(n_slots));
    std::vector<double> parent(static_cast<std::size_t>(n_slots));
    for (int s = 0; s < n_slots; ++s) {
      total[static_cast<std::size_t>(s)] = stats[static_cast<std::size_t>(frontier[static_cast<std::size_t>(s)])];
      parent[static_cast<std::size_t>(s)] = score(total[static_cast<std::size_t>(s)].g, total[static_cast<std::size_t>(s)].h);
    }
    std::vector<Candidate> best(static_cast<std::size_t>(n_slots));
    std::vector<Stats> cum(static_cast<std::size_t>(n_slots));
    std::vector<double> last(static_cast<std::size_t>(n_slots));

    auto consider = [&](int s, int f, double thr) {
      const Stats& right = cum[static_cast<std::size_t>(s)];
      const Stats& all = total[static_cast<std::size_t>(s)];
      const int n_left = all.n - right.n;
      if (right.n < cfg.min_samples_leaf || n_left < cfg.min_samples_leaf) return;
      double gain = score(all.g - right.g, all.h - right.h) + score(right.g, right.h) - parent[static_cast<std::size_t>(s)];
      Candidate& b = best[static_cast<std::size_t>(s)];
      // Features ascend and thresholds descend within a feature, so equal
      // gains resolve to the lowest feature, then the lowest threshold.
      if (gain > b.gain || (gain == b.gain && b.feature == f)) b = Candidate{gain, f, thr};
    };

    for (auto& b : best) b = Candidate{kMinGain, -1, 0.0};
    for (int f = 0; f < X.features(); ++f) {
      const auto& col = X.column(f);
      if (col.values.empty()) continue;
      std::fill(cum.begin(), cum.end(), Stats{});
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        const int r = col.rows[i];
        const int s = row_slot[static_cast<std::size_t>(r)];
        if (s < 0) continue;
        const double v = col.values[i];
        Stats& c = cum[static_cast<std::size_t>(s)];
        if (c.n > 0 && v < last[static_cast<std::size_t>(s)]) consider(s, f, split_point(v, last[static_cast<std::size_t>(s)]));
        c.g += grad[static_cast<std::size_t>(r)];
        c.h += hess[static_cast<std::size_t>(r)];
        ++c.n;
        last[static_cast<std::size_t>(s)] = v;
      }
      if (col.implicit_zeros) {
        for (int s = 0; s < n_slots; ++s) {
          const Stats& c = cum[static_cast<std::size_t>(s)];
          if (c.n > 0 && c.n < total[static_cast<std::size_t>(s)].n) consider(s, f, split_point(0.0, last[static_cast<std::size_t>(s)]));
        }
      }
    }

    std::vector<int> next;
    for (int s = 0; s < n_slots; ++s) {
      const Candidate& b = best[static_cast<std::size_t>(s)];
      if (b.feature < 0) continue;
      const int id = frontier[static_cast<std::size_t>(s)];
      const int left = static_cast<int>(tree.nodes.size());
      const int right = left + 1;
      tree.nodes.push_back(Node{});
      tree.nodes.push_back(Node{});
      Node& parent_node = tree.nodes[static_cast<std::size_t>(id)];
      parent_node.feature = b.feature;
      parent_node.threshold = b.threshold;
      parent_node.left = left;
      parent_node.right = right;
      for (int r = 0; r < n; ++r) {
        if (row_slot[static_cast<std::size_t>(r)] == s) node_of[static_cast<std::size_t>(r)] = left;
      }
      const auto& col = X.column(b.feature);
      for (std::size_t i = 0; i < col.values.size() && col.values[i] > b.threshold; ++i) {
        const int r = col.rows[i];
        if (row_slot[static_cast<std::size_t>(r)] == s) node_of[static_cast<std::size_t>(r)] = right;
      }
      stats.push_back(add_node(node_of, left));
      stats.push_back(add_node(node_of, right));
      for (int child : {left, right}) {
        if (depth + 1 < cfg.max_depth && stats[static_cast<std::size_t>(child)].n >= 2 * cfg.min_samples_leaf) next.push_back(child);
      }
    }
    frontier = std::move(next);
  }

  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].is_leaf()) tree.nodes[i].value = -cfg.learning_rate * stats[i].g / (stats[i].h + lambda);
  }
  // Renumber in preorder, the layout the model file uses.
  std::vector<int> new_id(tree.nodes.size(), -1);
  Tree ordered;
  std::function<int(int)> visit = [&](int i) -> int {
    const int id = static_cast<int>(ordered.nodes.size());
    new_id[static_cast<std::size_t>(i)] = id;
    ordered.nodes.push_back(tree.nodes[static_cast<std::size_t>(i)]);
    if (!tree.nodes[static_cast<std::size_t>(i)].is_leaf()) {
      int l = visit(tree.nodes[static_cast<std::size_t>(i)].left);
      int r = visit(tree.nodes[static_cast<std::size_t>(i)].right);
      ordered.nodes[static_cast<std::size_t>(id)].left = l;
      ordered.nodes[static_cast<std::size_t>(id)].right = r;
    }
    return id;
  };
  visit(0);
  for (int& v : node_of) v = new_id[static_cast<std::size_t>(v)];
  return ordered;
}

inline void validate_config(const TrainConfig& cfg) {
  if (cfg.rounds < 1) fail_usage("gbdt: rounds must be >= 1");
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) fail_usage("gbdt: learning rate must lie in (0,1]");
  if (cfg.max_depth < 0) fail_usage("gbdt: max_depth must be >= 0");
  if (cfg.min_samples_leaf < 1) fail_usage("gbdt: min_samples_leaf must be >= 1");
  if (cfg.l2 < 0.0) fail_usage("gbdt: l2 must be non-negative");
}

}  // namespace detail

// Trains on X with integer labels. `loss_trace`, when given, receives the mean
// training log-loss after each round.
inline Ensemble train(const FeatureMatrix& X, std::span<const int> y, TrainConfig cfg,
                      std::vector<double>* loss_trace = nullptr) {
  detail::validate_config(cfg);
  const int n = X.rows();
  if (static_cast<int>(y.size()) != n) fail_data("gbdt: feature rows and labels differ in length");
  if (n < 2) fail_data("gbdt: need at least two samples");
  int max_label = *std::max_element(y.begin(), y.end());
  if (*std::min_element(y.begin(), y.end()) < 0) fail_data("gbdt: labels must be non-negative");
  if (cfg.task == Task::binary) {
    if (max_label > 1) fail_data("gbdt: binary labels must be 0 or 1");
    cfg.n_classes = 2;
  } else if (cfg.n_classes == 0) {
    cfg.n_classes = max_label + 1;
  }
  if (max_label >= cfg.n_classes) fail_data("gbdt: label " + std::to_string(max_label) + " outside 0.." + std::to_string(cfg.n_classes - 1));
  if (cfg.task == Task::multiclass && cfg.n_classes < 2) fail_data("gbdt: multiclass needs at least two classes");
  std::vector<int> counts(static_cast<std::size_t>(cfg.n_classes), 0);
  for (int label : y) ++counts[static_cast<std::size_t>(label)];
  for (int k = 0; k < cfg.n_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) fail_data("gbdt: class " + std::to_string(k) + " never appears in the labels");
  }

  Ensemble e;
  e.task = cfg.task;
  e.n_classes = cfg.n_classes;
  e.n_features = X.features();
  e.rounds = cfg.rounds;
  e.learning_rate = cfg.learning_rate;
  const int K = e.outputs();
  if (cfg.task == Task::binary) {
    double p = static_cast<double>(counts[1]) / n;
    e.base_scores = {std::log(p / (1.0 - p))};
  } else {
    for (int k = 0; k < K; ++k) e.base_scores.push_back(std::log(static_cast<double>(counts[static_cast<std::size_t>(k)]) / n));
  }

  std::vector<std::vector<double>> scores(static_cast<std::size_t>(n), e.base_scores);
  std::vector<ProbVector> probs(static_cast<std::size_t>(n));
  std::vector<double> grad(static_cast<std::size_t>(n)), hess(static_cast<std::size_t>(n));
  std::vector<int> leaf_of;

  auto refresh = [&]() {
    double loss = 0.0;
    for (int r = 0; r < n; ++r) {
      detail::to_proba(e.task, scores[static_cast<std::size_t>(r)], probs[static_cast<std::size_t>(r)]);
      loss -= std::log(std::max(probs[static_cast<std::size_t>(r)][static_cast<std::size_t>(y[static_cast<std::size_t>(r)])], 1e-300));
    }
    return loss / n;
  };

  refresh();
  e.trees.reserve(static_cast<std::size_t>(cfg.rounds * K));
  for (int round = 0; round < cfg.rounds; ++round) {
    std::vector<Tree> round_trees;
    std::vector<std::vector<int>> round_leaves;
    for (int k = 0; k < K; ++k) {
      for (int r = 0; r < n; ++r) {
        const auto& p = probs[static_cast<std::size_t>(r)];
        // Binary keeps one output on the positive class.
        const double pk = cfg.task == Task::binary ? p[1] : p[static_cast<std::size_t>(k)];
        const int target = cfg.task == Task::binary ? y[static_cast<std::size_t>(r)] : (y[static_cast<std::size_t>(r)] == k ? 1 : 0);
        grad[static_cast<std::size_t>(r)] = pk - target;
        hess[static_cast<std::size_t>(r)] = std::max(pk * (1.0 - pk), 1e-16);
      }
      round_trees.push_back(detail::grow_tree(X, grad, hess, cfg, leaf_of));
      round_leaves.push_back(leaf_of);
    }
    // Class trees of a round all see the same starting scores.
    for (int k = 0; k < K; ++k) {
      const Tree& t = round_trees[static_cast<std::size_t>(k)];
      for (int r = 0; r < n; ++r) {
        scores[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] += t.nodes[static_cast<std::size_t>(round_leaves[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)])].value;
      }
      e.trees.push_back(std::move(round_trees[static_cast<std::size_t>(k)]));
    }
    double loss = refresh();
    if (loss_trace) loss_trace->push_back(loss);
  }
  return e;
}

inline Ensemble train(std::span<const SparseVector> X, int n_features, std::span<const int> y, const TrainConfig& cfg,
                      std::vector<double>* loss_trace = nullptr) {
  return train(FeatureMatrix::from_sparse(X, n_features), y, cfg, loss_trace);
}

inline Ensemble train(const std::vector<std::vector<double>>& X, std::span<const int> y, const TrainConfig& cfg,
                      std::vector<double>* loss_trace = nullptr) {
  return train(FeatureMatrix::from_dense(X), y, cfg, loss_trace);
}

// Probability vectors P_1..P_M: element i-1 uses the base score plus rounds 1..i.
template <class Row>
std::vector<ProbVector> staged_predict_proba(const Ensemble& e, const Row& row) {
  std::vector<double> scores = e.base_scores;
  std::vector<ProbVector> out(static_cast<std::size_t>(e.rounds));
  const int K = e.outputs();
  for (int round = 0; round < e.rounds; ++round) {
    for (int k = 0; k < K; ++k) scores[static_cast<std::size_t>(k)] += e.tree(round, k).predict(row);
    detail::to_proba(e.task, scores, out[static_cast<std::size_t>(round)]);
  }
  return out;
}

// Same accumulation order as the staged path, so the result equals its last
// element bit for bit.
template <class Row>
ProbVector predict_proba(const Ensemble& e, const Row& row) {
  std::vector<double> scores = e.base_scores;
  const int K = e.outputs();
  for (int round = 0; round < e.rounds; ++round) {
    for (int k = 0; k < K; ++k) scores[static_cast<std::size_t>(k)] += e.tree(round, k).predict(row);
  }
  ProbVector out;
  detail::to_proba(e.task, scores, out);
  return out;
}

inline ProbVector predict_proba(const Ensemble& e, const SparseVector& x) { return predict_proba(e, SparseRow{x}); }
inline ProbVector predict_proba(const Ensemble& e, std::span<const double> x) { return predict_proba(e, DenseRow{x}); }
inline std::vector<ProbVector> staged_predict_proba(const Ensemble& e, const SparseVector& x) {
  return staged_predict_proba(e, SparseRow{x});
}
inline std::vector<ProbVector> staged_predict_proba(const Ensemble& e, std::span<const double> x) {
  return staged_predict_proba(e, DenseRow{x});
}
inline ProbVector predict_proba(const Ensemble& e, const std::vector<double>& x) { return predict_proba(e, DenseRow{x}); }
inline std::vector<ProbVector> staged_predict_proba(const Ensemble& e, const std::vector<double>& x) {
  return staged_predict_proba(e, DenseRow{x});
}

// ---------------------------------------------------------------------------
// Text model format:
//   ccx-gbdt 1
//   task <binary|multiclass>
//   classes C / features F / rounds M / learning_rate eta
//   base_scores s_1 ... s_K
//   tree <round> <class> <node count>, then preorder nodes:
//     split <feature> <threshold>   |   leaf <value>

inline void write_model(std::ostream& out, const Ensemble& e) {
  out << "ccx-gbdt 1\n"
      << "task " << to_string(e.task) << '\n'
      << "classes " << e.n_classes << '\n'
      << "features " << e.n_features << '\n'
      << "rounds " << e.rounds << '\n'
      << "learning_rate " << format_double(e.learning_rate) << '\n'
      << "base_scores";
  for (double b : e.base_scores) out << ' ' << format_double(b);
  out << '\n';
  const int K = e.outputs();
  for (int round = 0; round < e.rounds; ++round) {
    for (int k = 0; k < K; ++k) {
      const Tree& t = e.tree(round, k);
      out << "tree " << round << ' ' << k << ' ' << t.nodes.size() << '\n';
      std::function<void(int)> rec = [&](int i) {
        const Node& nd = t.nodes[static_cast<std::size_t>(i)];
        if (nd.is_leaf()) {
          out << "leaf " << format_double(nd.value) << '\n';
        } else {
          out << "split " << nd.feature << ' ' << format_double(nd.threshold) << '\n';
          rec(nd.left);
          rec(nd.right);
        }
      };
      rec(0);
    }
  }
}

inline Ensemble read_model(std::istream& in, const std::string& name = "model") {
  std::size_t line_no = 0;
  std::string line;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return split(trim(line), ' ');
    }
    fail_data(name + ": unexpected end of file after line " + std::to_string(line_no));
  };
  auto where = [&]() { return name + " line " + std::to_string(line_no); };
  auto expect = [&](const char* key, std::size_t min_fields) {
    auto f = next();
    if (f.empty() || f[0] != key || f.size() < min_fields) fail_data(where() + ": expected '" + key + "'");
    return f;
  };

  auto magic = next();
  if (magic.size() != 2 || magic[0] != "ccx-gbdt" || magic[1] != "1") fail_data(where() + ": not a ccx-gbdt v1 model");
  Ensemble e;
  auto task = expect("task", 2);
  if (task[1] == "binary") e.task = Task::binary;
  else if (task[1] == "multiclass") e.task = Task::multiclass;
  else fail_data(where() + ": unknown task '" + task[1] + "'");
  e.n_classes = static_cast<int>(parse_int(expect("classes", 2)[1], where()));
  e.n_features = static_cast<int>(parse_int(expect("features", 2)[1], where()));
  e.rounds = static_cast<int>(parse_int(expect("rounds", 2)[1], where()));
  e.learning_rate = parse_double(expect("learning_rate", 2)[1], where());
  auto base = expect("base_scores", 1);
  for (std::size_t i = 1; i < base.size(); ++i) e.base_scores.push_back(parse_double(base[i], where()));
  const int K = e.outputs();
  if (e.rounds < 1 || static_cast<int>(e.base_scores.size()) != K) fail_data(where() + ": inconsistent header");
  for (int round = 0; round < e.rounds; ++round) {
    for (int k = 0; k < K; ++k) {
      auto head = expect("tree", 4);
      if (parse_int(head[1], where()) != round || parse_int(head[2], where()) != k) fail_data(where() + ": tree grid out of order");
      const auto count = static_cast<std::size_t>(parse_int(head[3], where()));
      Tree t;
      t.nodes.reserve(count);
      std::function<int()> rec = [&]() -> int {
        auto f = next();
        const int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back(Node{});
        if (f.size() == 2 && f[0] == "leaf") {
          t.nodes[static_cast<std::size_t>(id)].value = parse_double(f[1], where());
        } else if (f.size() == 3 && f[0] == "split") {
          Node nd;
          nd.feature = static_cast<int>(parse_int(f[1], where()));
          nd.threshold = parse_double(f[2], where());
          if (nd.feature < 0 || !std::isfinite(nd.threshold)) fail_data(where() + ": invalid split");
          nd.left = rec();
          nd.right = rec();
          t.nodes[static_cast<std::size_t>(id)] = nd;
        } else {
          fail_data(where() + ": expected 'split' or 'leaf'");
        }
        return id;
      };
      rec();
      if (t.nodes.size() != count) fail_data(where() + ": node count mismatch");
      e.trees.push_back(std::move(t));
    }
  }
  return e;
}

inline void save_model(const std::string& path, const Ensemble& e) {
  auto out = open_output(path);
  write_model(out, e);
  if (!out) fail_usage("write failed: " + path);
}

inline Ensemble load_model(const std::string& path) {
  auto in = open_input(path);
  return read_model(in, path);
}

}  // namespace ccx::gbdt
