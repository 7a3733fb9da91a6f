#pragma once

// Teacher side: length / uncertainty / skillfulness measures read off a
// multiclass boosted classifier, and their fusion into a uniform complexity
// score Q = T_uniform(w * L_norm + H_norm + S_norm).

#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccx/common.hpp"
#include "ccx/corpus.hpp"
#include "ccx/gbdt.hpp"
#include "ccx/textvec.hpp"
#include "ccx/transforms.hpp"

namespace ccx {

using gbdt::ProbVector;

struct ComplexityTriple {
  int length = 0;      // agent sentences
  double entropy = 0;  // nats
  double skill = 0;    // nats
  bool operator==(const ComplexityTriple&) const = default;
};

inline int agent_sentence_count(const Transcript& t) {
  return static_cast<int>(std::count_if(t.utterances.begin(), t.utterances.end(),
                                        [](const Utterance& u) { return u.speaker == Speaker::agent; }));
}

inline double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double pc : p) {
    if (pc > 0.0) h -= pc * std::log(pc);
  }
  return std::max(h, 0.0);
}

// Terms with p_c = 0 contribute nothing; q is floored at 1e-12.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    fail_usage("kl_divergence: dimension mismatch (" + std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  double d = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] > 0.0) d += p[c] * std::log(p[c] / std::max(q[c], 1e-12));
  }
  return std::max(d, 0.0);
}

// Sum over rounds i = 1..M of KL(P_i || P_M); the i = M term is exactly 0.
inline double skillfulness(const std::vector<ProbVector>& staged) {
  if (staged.empty()) fail_usage("skillfulness: empty staged sequence");
  const ProbVector& last = staged.back();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < staged.size(); ++i) s += kl_divergence(staged[i], last);
  return s;
}

inline ComplexityTriple complexity_triple(const Transcript& t, const gbdt::Ensemble& model, const Vocabulary& vocab) {
  const SparseVector x = vectorize(vocab, t);
  const auto staged = gbdt::staged_predict_proba(model, x);
  return {agent_sentence_count(t), entropy(staged.back()), skillfulness(staged)};
}

struct ScorePipeline {
  EmpiricalQuantileMap length_map;   // to normal
  EmpiricalQuantileMap entropy_map;  // to normal
  EmpiricalQuantileMap skill_map;    // to normal
  double weight = 2.0;
  EmpiricalQuantileMap sum_map;      // weighted sums to uniform

  double combined(const ComplexityTriple& t) const {
    return weight * length_map.transform(t.length) + entropy_map.transform(t.entropy) + skill_map.transform(t.skill);
  }
  bool operator==(const ScorePipeline&) const = default;
};

namespace detail {

struct Columns {
  std::vector<double> length, entropy, skill;
};

inline Columns columns_of(std::span<const ComplexityTriple> triples) {
  Columns c;
  for (const auto& t : triples) {
    c.length.push_back(t.length);
    c.entropy.push_back(t.entropy);
    c.skill.push_back(t.skill);
  }
  return c;
}

inline void require_spread(const std::vector<double>& v, const char* name) {
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    fail_data(std::string("score pipeline: attribute ") + name + " is constant across the corpus");
  }
}

}  // namespace detail

inline ScorePipeline fit_score_pipeline(std::span<const ComplexityTriple> triples, double weight = 2.0) {
  if (triples.size() < 2) fail_data("score pipeline: need at least two triples");
  if (!(weight > 0.0)) fail_usage("score pipeline: weight must be positive");
  auto cols = detail::columns_of(triples);
  detail::require_spread(cols.length, "L");
  detail::require_spread(cols.entropy, "H");
  detail::require_spread(cols.skill, "S");
  ScorePipeline p;
  p.weight = weight;
  p.length_map = EmpiricalQuantileMap::fit(cols.length, QuantileTarget::normal);
  p.entropy_map = EmpiricalQuantileMap::fit(cols.entropy, QuantileTarget::normal);
  p.skill_map = EmpiricalQuantileMap::fit(cols.skill, QuantileTarget::normal);
  std::vector<double> sums;
  sums.reserve(triples.size());
  for (const auto& t : triples) sums.push_back(p.combined(t));
  p.sum_map = EmpiricalQuantileMap::fit(std::move(sums), QuantileTarget::uniform);
  return p;
}

// Q in (0,1); non-decreasing in each attribute.
inline double score(const ScorePipeline& p, const ComplexityTriple& t) { return p.sum_map.transform(p.combined(t)); }

struct WeightCandidate {
  double weight = 0;
  double anderson_darling = 0;  // of the standardized weighted sums
  double skewness = 0;
};

struct WeightSelection {
  double selected = 0;
  std::vector<WeightCandidate> candidates;
};

// Picks the grid weight whose weighted sums look most Gaussian; ties go to the smaller weight.
inline WeightSelection select_weight(std::span<const ComplexityTriple> triples, std::vector<double> grid) {
  if (grid.empty()) fail_usage("select_weight: empty grid");
  for (double w : grid) {
    if (!(w > 0.0)) fail_usage("select_weight: weights must be positive");
  }
  // Normalized columns do not depend on w; fit once.
  const ScorePipeline base = fit_score_pipeline(triples, 1.0);
  std::vector<double> ln, hn, sn;
  for (const auto& t : triples) {
    ln.push_back(base.length_map.transform(t.length));
    hn.push_back(base.entropy_map.transform(t.entropy));
    sn.push_back(base.skill_map.transform(t.skill));
  }
  WeightSelection out;
  double best = 0.0;
  for (double w : grid) {
    std::vector<double> sums(ln.size());
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] = w * ln[i] + hn[i] + sn[i];
    WeightCandidate c{w, stats::anderson_darling_normal(sums), stats::skewness(sums)};
    if (out.candidates.empty() || c.anderson_darling < best || (c.anderson_darling == best && w < out.selected)) {
      best = c.anderson_darling;
      out.selected = w;
    }
    out.candidates.push_back(c);
  }
  return out;
}

enum class ComplexityLabel { low = 0, normal = 1, high = 2 };

// Validation labels from a latent complexity in [0,1].
inline ComplexityLabel label_from_latent(double z) {
  if (z < 0.33) return ComplexityLabel::low;
  if (z > 0.66) return ComplexityLabel::high;
  return ComplexityLabel::normal;
}

struct LabelCurve {
  int n_bins = 20;
  std::vector<int> counts;
  // Per bin P(low), P(normal), P(high); empty bins hold nullopt.
  std::vector<std::optional<std::array<double, 3>>> probabilities;

  std::vector<double> series(ComplexityLabel l) const {
    std::vector<double> out;
    for (const auto& p : probabilities) out.push_back(p ? (*p)[static_cast<std::size_t>(l)] : std::nan(""));
    return out;
  }
};

inline LabelCurve binned_label_curve(std::span<const double> scores, std::span<const ComplexityLabel> labels, int n_bins = 20) {
  if (scores.size() != labels.size()) fail_usage("binned_label_curve: scores and labels differ in length");
  if (n_bins < 2) fail_usage("binned_label_curve: need at least two bins");
  LabelCurve curve;
  curve.n_bins = n_bins;
  curve.counts.assign(static_cast<std::size_t>(n_bins), 0);
  std::vector<std::array<int, 3>> hits(static_cast<std::size_t>(n_bins), {0, 0, 0});
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int b = std::clamp(static_cast<int>(std::floor(scores[i] * n_bins)), 0, n_bins - 1);
    ++curve.counts[static_cast<std::size_t>(b)];
    ++hits[static_cast<std::size_t>(b)][static_cast<std::size_t>(labels[i])];
  }
  for (int b = 0; b < n_bins; ++b) {
    const int n = curve.counts[static_cast<std::size_t>(b)];
    if (n == 0) {
      curve.probabilities.emplace_back(std::nullopt);
      continue;
    }
    std::array<double, 3> p{};
    for (std::size_t l = 0; l < 3; ++l) p[l] = static_cast<double>(hits[static_cast<std::size_t>(b)][l]) / n;
    curve.probabilities.emplace_back(p);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Trained teacher: vocabulary + multiclass ensemble + score pipeline.

struct TeacherConfig {
  int rounds = 60;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_samples_leaf = 20;
  int min_doc_freq = 2;
  int n_classes = 0;  // 0: infer from labels
  // Empty grid: use `weight` directly.
  double weight = 2.0;
  std::vector<double> weight_grid;
};

struct TeacherModel {
  Vocabulary vocab;
  gbdt::Ensemble classifier;
  ScorePipeline pipeline;

  ComplexityTriple triple(const Transcript& t) const { return complexity_triple(t, classifier, vocab); }
  double score(const Transcript& t) const { return ccx::score(pipeline, triple(t)); }
};

struct TeacherFit {
  TeacherModel model;
  std::vector<ComplexityTriple> triples;  // of the training corpus
  std::vector<double> scores;             // Q of the training corpus
  std::vector<double> loss_trace;
  std::optional<WeightSelection> selection;
};

inline TeacherFit train_teacher(const std::vector<Transcript>& transcripts, const TeacherConfig& cfg) {
  if (transcripts.size() < 2) fail_data("train_teacher: need at least two transcripts");
  TeacherFit fit;
  std::vector<std::vector<std::string>> docs;
  docs.reserve(transcripts.size());
  for (const auto& t : transcripts) docs.push_back(tokenize(t));
  fit.model.vocab = fit_vocabulary(docs, cfg.min_doc_freq);
  std::vector<SparseVector> X;
  std::vector<int> y;
  X.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    X.push_back(vectorize(fit.model.vocab, docs[i]));
    y.push_back(transcripts[i].label);
  }
  gbdt::TrainConfig gc;
  gc.task = gbdt::Task::multiclass;
  gc.n_classes = cfg.n_classes;
  gc.rounds = cfg.rounds;
  gc.learning_rate = cfg.learning_rate;
  gc.max_depth = cfg.max_depth;
  gc.min_samples_leaf = cfg.min_samples_leaf;
  fit.model.classifier = gbdt::train(X, fit.model.vocab.size(), y, gc, &fit.loss_trace);

  fit.triples.reserve(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto staged = gbdt::staged_predict_proba(fit.model.classifier, X[i]);
    fit.triples.push_back({agent_sentence_count(transcripts[i]), entropy(staged.back()), skillfulness(staged)});
  }
  double w = cfg.weight;
  if (!cfg.weight_grid.empty()) {
    fit.selection = select_weight(fit.triples, cfg.weight_grid);
    w = fit.selection->selected;
  }
  fit.model.pipeline = fit_score_pipeline(fit.triples, w);
  fit.scores.reserve(fit.triples.size());
  for (const auto& t : fit.triples) fit.scores.push_back(score(fit.model.pipeline, t));
  return fit;
}

// Directory layout: vocabulary.csv, classifier.txt, map_length.txt,
// map_entropy.txt, map_skill.txt, map_sum.txt and pipeline.txt (weight plus
// the file references).
inline void save_teacher(const std::string& dir, const TeacherModel& m) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  save_vocabulary((d / "vocabulary.csv").string(), m.vocab);
  gbdt::save_model((d / "classifier.txt").string(), m.classifier);
  save_quantile_map((d / "map_length.txt").string(), m.pipeline.length_map);
  save_quantile_map((d / "map_entropy.txt").string(), m.pipeline.entropy_map);
  save_quantile_map((d / "map_skill.txt").string(), m.pipeline.skill_map);
  save_quantile_map((d / "map_sum.txt").string(), m.pipeline.sum_map);
  auto out = open_output((d / "pipeline.txt").string());
  out << "weight," << format_double(m.pipeline.weight) << '\n'
      << "vocabulary,vocabulary.csv\n"
      << "classifier,classifier.txt\n"
      << "map_length,map_length.txt\n"
      << "map_entropy,map_entropy.txt\n"
      << "map_skill,map_skill.txt\n"
      << "map_sum,map_sum.txt\n";
}

inline TeacherModel load_teacher(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  const std::string manifest = (d / "pipeline.txt").string();
  auto in = open_input(manifest);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty()) continue;
    auto cells = split(t, ',');
    if (cells.size() != 2) fail_data(manifest + ": malformed line '" + t + "'");
    kv[cells[0]] = cells[1];
  }
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) fail_data(manifest + ": missing field '" + key + "'");
    return it->second;
  };
  TeacherModel m;
  m.pipeline.weight = parse_double(get("weight"), manifest);
  m.vocab = load_vocabulary((d / get("vocabulary")).string());
  m.classifier = gbdt::load_model((d / get("classifier")).string());
  m.pipeline.length_map = load_quantile_map((d / get("map_length")).string());
  m.pipeline.entropy_map = load_quantile_map((d / get("map_entropy")).string());
  m.pipeline.skill_map = load_quantile_map((d / get("map_skill")).string());
  m.pipeline.sum_map = load_quantile_map((d / get("map_sum")).string());
  if (m.classifier.n_features != m.vocab.size()) fail_data(dir + ": classifier width does not match the vocabulary");
  return m;
}

// ---------------------------------------------------------------------------
// Score file: `contact_id,group,L,H,S,Q`.

struct ScoreRow {
  std::string contact_id;
  std::string group;
  ComplexityTriple triple;
  double q = 0;
  bool operator==(const ScoreRow&) const = default;
};

inline void save_scores(const std::string& path, const std::vector<ScoreRow>& rows) {
  auto out = open_output(path);
  out << "contact_id,group,L,H,S,Q\n";
  for (const auto& r : rows) {
    out << r.contact_id << ',' << r.group << ',' << r.triple.length << ',' << format_double(r.triple.entropy) << ','
        << format_double(r.triple.skill) << ',' << format_double(r.q) << '\n';
  }
  if (!out) fail_usage("write failed: " + path);
}

inline std::vector<ScoreRow> load_scores(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::vector<ScoreRow> rows;
  if (!std::getline(in, line)) return rows;
  if (trim(line) != "contact_id,group,L,H,S,Q") fail_data(path + " line 1: expected header 'contact_id,group,L,H,S,Q'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty()) continue;
    const std::string where = path + " line " + std::to_string(line_no);
    auto c = split(t, ',');
    if (c.size() != 6) fail_data(where + ": expected 6 fields");
    ScoreRow r;
    r.contact_id = c[0];
    r.group = c[1];
    r.triple.length = static_cast<int>(parse_int(c[2], where + ": field 'L'"));
    r.triple.entropy = parse_double(c[3], where + ": field 'H'");
    r.triple.skill = parse_double(c[4], where + ": field 'S'");
    r.q = parse_double(c[5], where + ": field 'Q'");
    if (!(r.q > 0.0 && r.q < 1.0)) fail_data(where + ": field 'Q' must lie in (0,1)");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ScoreRow> score_transcripts(const TeacherModel& m, const std::vector<Transcript>& ts) {
  std::vector<ScoreRow> rows;
  rows.reserve(ts.size());
  for (const auto& t : ts) {
    ScoreRow r{t.id, t.group, m.triple(t), 0.0};
    r.q = ccx::score(m.pipeline, r.triple);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ccx
