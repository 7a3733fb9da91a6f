#pragma once

// Student side: threshold labels from teacher scores, entity embeddings for
// categorical pre-contact features, and a binary boosted router on top.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccx/common.hpp"
#include "ccx/corpus.hpp"
#include "ccx/gbdt.hpp"

namespace ccx {

// y = 1 iff Q >= threshold.
inline std::vector<int> make_labels(std::span<const double> scores, double threshold = 0.8) {
  std::vector<int> y;
  y.reserve(scores.size());
  for (double q : scores) y.push_back(q >= threshold ? 1 : 0);
  return y;
}

struct PrecisionRecall {
  std::optional<double> precision;  // absent without positive predictions
  std::optional<double> recall;     // absent without positive labels
  int true_positive = 0;
  int false_positive = 0;
  int false_negative = 0;
  int true_negative = 0;
};

inline PrecisionRecall evaluate(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) fail_usage("evaluate: predictions and labels differ in length");
  PrecisionRecall m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] != 0, y = labels[i] != 0;
    if (p && y) ++m.true_positive;
    else if (p) ++m.false_positive;
    else if (y) ++m.false_negative;
    else ++m.true_negative;
  }
  if (m.true_positive + m.false_positive > 0) {
    m.precision = static_cast<double>(m.true_positive) / (m.true_positive + m.false_positive);
  }
  if (m.true_positive + m.false_negative > 0) {
    m.recall = static_cast<double>(m.true_positive) / (m.true_positive + m.false_negative);
  }
  return m;
}

// Training-set mean/std per numeric column; zero-variance columns map to 0.
struct NumericScaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static NumericScaler fit(std::span<const PreContactRecord> records) {
    NumericScaler s;
    if (records.empty()) return s;
    const std::size_t p = records.front().numeric_features.size();
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> col;
      col.reserve(records.size());
      for (const auto& r : records) col.push_back(r.numeric_features[j]);
      s.mean.push_back(stats::mean(col));
      s.stddev.push_back(stats::stddev(col));
    }
    return s;
  }

  double apply(std::size_t j, double v) const { return stddev[j] > 0.0 ? (v - mean[j]) / stddev[j] : 0.0; }
  bool operator==(const NumericScaler&) const = default;
};

inline constexpr const char* kUnseenLevel = "__unseen__";

// Per categorical feature: the known levels (sorted) and one vector per level
// plus a trailing fallback vector for unseen levels.
struct EmbeddingTable {
  struct Feature {
    std::vector<std::string> levels;
    std::vector<std::vector<double>> vectors;  // levels.size() + 1 rows

    int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
    int index_of(const std::string& level) const {
      auto it = std::lower_bound(levels.begin(), levels.end(), level);
      return (it != levels.end() && *it == level) ? static_cast<int>(it - levels.begin()) : static_cast<int>(levels.size());
    }
    bool operator==(const Feature&) const = default;
  };
  std::vector<Feature> features;

  int width() const {
    int w = 0;
    for (const auto& f : features) w += f.dim();
    return w;
  }
  bool operator==(const EmbeddingTable&) const = default;
};

inline std::vector<std::vector<std::string>> collect_levels(std::span<const PreContactRecord> records) {
  std::vector<std::vector<std::string>> out;
  if (records.empty()) return out;
  const std::size_t k = records.front().categorical_features.size();
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::string> lv;
    for (const auto& r : records) lv.push_back(r.categorical_features[f]);
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    out.push_back(std::move(lv));
  }
  return out;
}

inline int default_embedding_dim(int cardinality) { return std::clamp((cardinality + 1) / 2, 1, 16); }

// One-hot as a degenerate table: identity vectors, all-zero fallback.
inline EmbeddingTable one_hot_table(std::span<const PreContactRecord> records) {
  EmbeddingTable t;
  for (auto& lv : collect_levels(records)) {
    EmbeddingTable::Feature f;
    const std::size_t n = lv.size();
    f.levels = std::move(lv);
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<double> v(n, 0.0);
      if (i < n) v[i] = 1.0;
      f.vectors.push_back(std::move(v));
    }
    t.features.push_back(std::move(f));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Embedding network: concatenated level vectors and standardized numerics
// feed one linear unit with a logistic output. Parameters live in one flat
// vector: per feature (levels + 1) x dim embedding rows, then numeric
// weights, embedding weights, bias.

struct EmbeddingExample {
  std::vector<double> numeric;  // standardized
  std::vector<int> level;       // per categorical feature; levels.size() means unseen
  int label = 0;
};

class EmbeddingNet {
 public:
  EmbeddingNet(std::vector<int> n_levels, std::vector<int> dims, int n_numeric)
      : n_levels_(std::move(n_levels)), dims_(std::move(dims)), n_numeric_(n_numeric) {
    if (n_levels_.size() != dims_.size()) fail_usage("embedding net: levels and dims differ in length");
    std::size_t off = 0;
    for (std::size_t f = 0; f < dims_.size(); ++f) {
      table_offset_.push_back(off);
      off += static_cast<std::size_t>(n_levels_[f] + 1) * static_cast<std::size_t>(dims_[f]);
    }
    numeric_w_ = off;
    off += static_cast<std::size_t>(n_numeric_);
    embed_w_ = off;
    for (int d : dims_) off += static_cast<std::size_t>(d);
    bias_ = off;
    params_.assign(off + 1, 0.0);
  }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t features() const { return dims_.size(); }
  int dim(std::size_t f) const { return dims_[f]; }
  int levels(std::size_t f) const { return n_levels_[f]; }

  // Row `level` of feature f (level == levels(f) is the fallback).
  std::span<const double> vector(std::size_t f, int level) const {
    return {params_.data() + row_offset(f, level), static_cast<std::size_t>(dims_[f])};
  }

  void initialize(std::uint64_t seed, double base_rate) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    for (std::size_t i = 0; i < bias_; ++i) params_[i] = g(rng);
    params_[bias_] = std::log(base_rate / (1.0 - base_rate));
  }

  double logit(const EmbeddingExample& ex) const {
    double z = params_[bias_];
    for (int j = 0; j < n_numeric_; ++j) z += params_[numeric_w_ + static_cast<std::size_t>(j)] * ex.numeric[static_cast<std::size_t>(j)];
    std::size_t w = embed_w_;
    for (std::size_t f = 0; f < dims_.size(); ++f) {
      const std::size_t row = row_offset(f, ex.level[f]);
      for (int d = 0; d < dims_[f]; ++d) z += params_[w + static_cast<std::size_t>(d)] * params_[row + static_cast<std::size_t>(d)];
      w += static_cast<std::size_t>(dims_[f]);
    }
    return z;
  }

  // Mean binary cross-entropy.
  double loss(std::span<const EmbeddingExample> batch) const {
    double l = 0.0;
    for (const auto& ex : batch) {
      const double z = logit(ex);
      // log(1 + e^z) - y z, computed stably.
      l += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - ex.label * z;
    }
    return l / static_cast<double>(batch.size());
  }

  // Gradient of loss() with respect to params().
  std::vector<double> gradient(std::span<const EmbeddingExample> batch) const {
    std::vector<double> grad(params_.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const auto& ex : batch) accumulate(ex, inv, grad);
    return grad;
  }

  // One stochastic gradient step on a single example.
  void sgd_step(const EmbeddingExample& ex, double step) {
    const double r = sigmoid(logit(ex)) - ex.label;
    for (int j = 0; j < n_numeric_; ++j) params_[numeric_w_ + static_cast<std::size_t>(j)] -= step * r * ex.numeric[static_cast<std::size_t>(j)];
    std::size_t w = embed_w_;
    for (std::size_t f = 0; f < dims_.size(); ++f) {
      const std::size_t row = row_offset(f, ex.level[f]);
      for (int d = 0; d < dims_[f]; ++d) {
        const std::size_t wi = w + static_cast<std::size_t>(d), ei = row + static_cast<std::size_t>(d);
        const double wv = params_[wi], ev = params_[ei];
        params_[wi] -= step * r * ev;
        params_[ei] -= step * r * wv;
      }
      w += static_cast<std::size_t>(dims_[f]);
    }
    params_[bias_] -= step * r;
  }

 private:
  static double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

  std::size_t row_offset(std::size_t f, int level) const {
    return table_offset_[f] + static_cast<std::size_t>(level) * static_cast<std::size_t>(dims_[f]);
  }

  void accumulate(const EmbeddingExample& ex, double scale, std::vector<double>& grad) const {
    const double r = (sigmoid(logit(ex)) - ex.label) * scale;
    for (int j = 0; j < n_numeric_; ++j) grad[numeric_w_ + static_cast<std::size_t>(j)] += r * ex.numeric[static_cast<std::size_t>(j)];
    std::size_t w = embed_w_;
    for (std::size_t f = 0; f < dims_.size(); ++f) {
      const std::size_t row = row_offset(f, ex.level[f]);
      for (int d = 0; d < dims_[f]; ++d) {
        grad[w + static_cast<std::size_t>(d)] += r * params_[row + static_cast<std::size_t>(d)];
        grad[row + static_cast<std::size_t>(d)] += r * params_[w + static_cast<std::size_t>(d)];
      }
      w += static_cast<std::size_t>(dims_[f]);
    }
    grad[bias_] += r;
  }

  std::vector<int> n_levels_;
  std::vector<int> dims_;
  int n_numeric_ = 0;
  std::vector<std::size_t> table_offset_;
  std::size_t numeric_w_ = 0;
  std::size_t embed_w_ = 0;
  std::size_t bias_ = 0;
  std::vector<double> params_;
};

struct EmbeddingConfig {
  std::vector<int> dims;  // empty: default_embedding_dim per feature
  int epochs = 10;
  double step_size = 0.002;
  // Per-example chance of routing a level to the fallback row during SGD,
  // which is how the fallback vector gets trained.
  double unseen_rate = 0.02;
  std::uint64_t seed = 11;
};

inline std::vector<EmbeddingExample> make_examples(std::span<const PreContactRecord> records, std::span<const int> labels,
                                                   const NumericScaler& scaler, const EmbeddingTable& index) {
  std::vector<EmbeddingExample> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EmbeddingExample ex;
    for (std::size_t j = 0; j < records[i].numeric_features.size(); ++j) ex.numeric.push_back(scaler.apply(j, records[i].numeric_features[j]));
    for (std::size_t f = 0; f < index.features.size(); ++f) ex.level.push_back(index.features[f].index_of(records[i].categorical_features[f]));
    ex.label = labels.empty() ? 0 : labels[i];
    out.push_back(std::move(ex));
  }
  return out;
}

struct EmbeddingFit {
  EmbeddingTable table;
  std::vector<double> loss_trace;  // full training loss after each epoch
};

inline EmbeddingFit fit_entity_embeddings(std::span<const PreContactRecord> records, std::span<const int> labels,
                                          const EmbeddingConfig& cfg) {
  if (records.size() < 2) fail_data("fit_entity_embeddings: need at least two records");
  if (records.size() != labels.size()) fail_usage("fit_entity_embeddings: records and labels differ in length");
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    fail_data("fit_entity_embeddings: labels contain a single class");
  }
  const auto scaler = NumericScaler::fit(records);
  EmbeddingTable index;
  std::vector<int> n_levels, dims;
  auto levels = collect_levels(records);
  for (std::size_t f = 0; f < levels.size(); ++f) {
    const int card = static_cast<int>(levels[f].size());
    n_levels.push_back(card);
    dims.push_back(cfg.dims.empty() ? default_embedding_dim(card) : cfg.dims.at(f));
    index.features.push_back({std::move(levels[f]), {}});
  }
  auto examples = make_examples(records, labels, scaler, index);
  EmbeddingNet net(n_levels, dims, static_cast<int>(scaler.mean.size()));
  net.initialize(cfg.seed, static_cast<double>(positives) / static_cast<double>(labels.size()));

  EmbeddingFit fit;
  std::mt19937_64 rng(mix_seed(cfg.seed, 1));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      EmbeddingExample ex = examples[i];
      for (std::size_t f = 0; f < ex.level.size(); ++f) {
        if (u(rng) < cfg.unseen_rate) ex.level[f] = n_levels[f];
      }
      net.sgd_step(ex, cfg.step_size);
    }
    fit.loss_trace.push_back(net.loss(examples));
  }
  for (std::size_t f = 0; f < index.features.size(); ++f) {
    auto& feat = index.features[f];
    for (int l = 0; l <= n_levels[f]; ++l) {
      auto v = net.vector(f, l);
      feat.vectors.emplace_back(v.begin(), v.end());
    }
  }
  fit.table = std::move(index);
  return fit;
}

// Row = [standardized numerics | level vectors]; unseen levels use the fallback row.
inline std::vector<double> encode(const PreContactRecord& r, const NumericScaler& scaler, const EmbeddingTable& table) {
  if (r.numeric_features.size() != scaler.mean.size() || r.categorical_features.size() != table.features.size()) {
    fail_data("encode: record '" + r.contact_id + "' has " + std::to_string(r.numeric_features.size()) + " numeric and " +
              std::to_string(r.categorical_features.size()) + " categorical features, model expects " +
              std::to_string(scaler.mean.size()) + " and " + std::to_string(table.features.size()));
  }
  std::vector<double> row;
  row.reserve(scaler.mean.size() + static_cast<std::size_t>(table.width()));
  for (std::size_t j = 0; j < r.numeric_features.size(); ++j) row.push_back(scaler.apply(j, r.numeric_features[j]));
  for (std::size_t f = 0; f < table.features.size(); ++f) {
    const auto& feat = table.features[f];
    const auto& v = feat.vectors[static_cast<std::size_t>(feat.index_of(r.categorical_features[f]))];
    row.insert(row.end(), v.begin(), v.end());
  }
  return row;
}

inline std::vector<std::vector<double>> encode(std::span<const PreContactRecord> records, const NumericScaler& scaler,
                                               const EmbeddingTable& table) {
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(encode(r, scaler, table));
  return rows;
}

enum class CategoricalEncoding { embedding, one_hot };

struct StudentConfig {
  CategoricalEncoding encoding = CategoricalEncoding::embedding;
  EmbeddingConfig embedding;
  gbdt::TrainConfig booster{gbdt::Task::binary, 2, 100, 0.1, 4, 20, 1.0};
  double tau = 0.5;
};

struct StudentModel {
  CategoricalEncoding encoding = CategoricalEncoding::embedding;
  NumericScaler scaler;
  EmbeddingTable table;
  gbdt::Ensemble booster;
  double tau = 0.5;

  double probability(const PreContactRecord& r) const {
    const auto row = encode(r, scaler, table);
    return gbdt::predict_proba(booster, std::span<const double>(row))[1];
  }
  int predict(const PreContactRecord& r) const { return probability(r) >= tau ? 1 : 0; }
};

inline StudentModel train_student(std::span<const PreContactRecord> records, std::span<const int> labels,
                                  const StudentConfig& cfg) {
  if (records.size() != labels.size()) fail_usage("train_student: records and labels differ in length");
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) fail_usage("train_student: tau must lie in (0,1)");
  StudentModel m;
  m.encoding = cfg.encoding;
  m.tau = cfg.tau;
  m.scaler = NumericScaler::fit(records);
  m.table = cfg.encoding == CategoricalEncoding::embedding ? fit_entity_embeddings(records, labels, cfg.embedding).table
                                                           : one_hot_table(records);
  auto booster_cfg = cfg.booster;
  booster_cfg.task = gbdt::Task::binary;
  m.booster = gbdt::train(encode(records, m.scaler, m.table), labels, booster_cfg);
  return m;
}

// Deterministic split of 0..n-1 into (train, test).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double test_fraction,
                                                                                   std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::round(test_fraction * static_cast<double>(n)));
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

// ---------------------------------------------------------------------------
// Persistence. Embedding table: `feature,level,v0..vd` rows (the fallback row
// uses level __unseen__). Student manifest: key,value lines.

inline void save_embedding_table(const std::string& path, const EmbeddingTable& t) {
  auto out = open_output(path);
  int max_dim = 0;
  for (const auto& f : t.features) max_dim = std::max(max_dim, f.dim());
  out << "feature,level";
  for (int d = 0; d < max_dim; ++d) out << ",v" << d;
  out << '\n';
  for (std::size_t f = 0; f < t.features.size(); ++f) {
    const auto& feat = t.features[f];
    for (std::size_t l = 0; l < feat.vectors.size(); ++l) {
      out << 'c' << f << ',' << (l < feat.levels.size() ? feat.levels[l] : std::string(kUnseenLevel));
      for (double v : feat.vectors[l]) out << ',' << format_double(v);
      out << '\n';
    }
  }
  if (!out) fail_usage("write failed: " + path);
}

inline EmbeddingTable load_embedding_table(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line).rfind("feature,level", 0) != 0) fail_data(path + " line 1: expected header 'feature,level,...'");
  EmbeddingTable t;
  std::size_t line_no = 1;
  bool open_feature = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    const std::string where = path + " line " + std::to_string(line_no);
    auto c = split(s, ',');
    if (c.size() < 2) fail_data(where + ": expected at least 2 fields");
    if (c[0] != "c" + std::to_string(open_feature ? t.features.size() - 1 : t.features.size())) {
      fail_data(where + ": unexpected feature '" + c[0] + "'");
    }
    if (!open_feature) {
      t.features.emplace_back();
      open_feature = true;
    }
    std::vector<double> v;
    for (std::size_t i = 2; i < c.size(); ++i) v.push_back(parse_double(c[i], where));
    auto& feat = t.features.back();
    if (!feat.vectors.empty() && v.size() != feat.vectors.front().size()) fail_data(where + ": vector width differs within feature");
    feat.vectors.push_back(std::move(v));
    if (c[1] == kUnseenLevel) {
      open_feature = false;
    } else {
      if (!feat.levels.empty() && !(feat.levels.back() < c[1])) fail_data(where + ": levels must be sorted and unique");
      feat.levels.push_back(c[1]);
    }
  }
  if (open_feature) fail_data(path + ": last feature lacks its __unseen__ row");
  return t;
}

inline void save_student(const std::string& dir, const StudentModel& m) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  save_embedding_table((d / "embeddings.csv").string(), m.table);
  gbdt::save_model((d / "booster.txt").string(), m.booster);
  auto out = open_output((d / "student.txt").string());
  out << "encoding," << (m.encoding == CategoricalEncoding::embedding ? "embedding" : "one_hot") << '\n'
      << "tau," << format_double(m.tau) << '\n';
  out << "numeric_mean";
  for (double v : m.scaler.mean) out << ',' << format_double(v);
  out << "\nnumeric_std";
  for (double v : m.scaler.stddev) out << ',' << format_double(v);
  out << "\nembeddings,embeddings.csv\nbooster,booster.txt\n";
}

inline StudentModel load_student(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  const std::string manifest = (d / "student.txt").string();
  auto in = open_input(manifest);
  std::map<std::string, std::vector<std::string>> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto c = split(trim(line), ',');
    if (c.empty() || c[0].empty()) continue;
    kv[c[0]] = std::vector<std::string>(c.begin() + 1, c.end());
  }
  auto get = [&](const char* key) -> const std::vector<std::string>& {
    auto it = kv.find(key);
    if (it == kv.end()) fail_data(manifest + ": missing field '" + key + "'");
    return it->second;
  };
  StudentModel m;
  const auto& enc = get("encoding");
  if (enc.size() != 1 || (enc[0] != "embedding" && enc[0] != "one_hot")) fail_data(manifest + ": bad field 'encoding'");
  m.encoding = enc[0] == "embedding" ? CategoricalEncoding::embedding : CategoricalEncoding::one_hot;
  m.tau = parse_double(get("tau").at(0), manifest + ": field 'tau'");
  for (const auto& s : get("numeric_mean")) m.scaler.mean.push_back(parse_double(s, manifest + ": field 'numeric_mean'"));
  for (const auto& s : get("numeric_std")) m.scaler.stddev.push_back(parse_double(s, manifest + ": field 'numeric_std'"));
  if (m.scaler.mean.size() != m.scaler.stddev.size()) fail_data(manifest + ": numeric_mean and numeric_std differ in length");
  m.table = load_embedding_table((d / get("embeddings").at(0)).string());
  m.booster = gbdt::load_model((d / get("booster").at(0)).string());
  if (m.booster.n_features != static_cast<int>(m.scaler.mean.size()) + m.table.width()) {
    fail_data(dir + ": booster width does not match the encoder");
  }
  return m;
}

struct Prediction {
  std::string contact_id;
  double probability = 0;
  int label = 0;
};

inline void save_predictions(const std::string& path, const std::vector<Prediction>& ps) {
  auto out = open_output(path);
  out << "contact_id,probability,predicted_label\n";
  for (const auto& p : ps) out << p.contact_id << ',' << format_double(p.probability) << ',' << p.label << '\n';
  if (!out) fail_usage("write failed: " + path);
}

// Labels file: `contact_id,label`.
inline void save_labels(const std::string& path, const std::vector<std::string>& ids, std::span<const int> labels) {
  auto out = open_output(path);
  out << "contact_id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << labels[i] << '\n';
  if (!out) fail_usage("write failed: " + path);
}

inline std::vector<std::pair<std::string, int>> load_labels(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::vector<std::pair<std::string, int>> out;
  if (!std::getline(in, line)) return out;
  if (trim(line) != "contact_id,label") fail_data(path + " line 1: expected header 'contact_id,label'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    auto c = split(s, ',');
    const std::string where = path + " line " + std::to_string(line_no);
    if (c.size() != 2) fail_data(where + ": expected 2 fields");
    auto y = parse_int(c[1], where + ": field 'label'");
    if (y != 0 && y != 1) fail_data(where + ": field 'label' must be 0 or 1");
    out.emplace_back(c[0], static_cast<int>(y));
  }
  return out;
}

}  // namespace ccx
