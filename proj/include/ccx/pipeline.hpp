#pragma once

// End-to-end pipeline stages over an output workspace:
//
//   <out>/corpus/      transcripts.jsonl, precontact.csv, latents.csv
//   <out>/teacher/     vocabulary, classifier, quantile maps
//   <out>/student/     embeddings, booster, manifest
//   <out>/scores.csv, labels.csv, predictions.csv
//   <out>/reports/     CSV tables (and SVG figures when enabled)
//
// Every stage reads its inputs from the workspace and is deterministic in
// the configured seed.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccx/cauc.hpp"
#include "ccx/common.hpp"
#include "ccx/corpus.hpp"
#include "ccx/student.hpp"
#include "ccx/svg.hpp"
#include "ccx/teacher.hpp"

namespace ccx {

struct PipelineConfig {
  std::string out = ".";
  std::uint64_t seed = 7;
  bool svg = false;

  CorpusConfig corpus;

  TeacherConfig teacher;
  std::vector<double> weight_grid{0.5, 1.0, 2.0, 4.0};
  bool select_weight = false;  // when false the grid is reported only
  int histogram_bins = 30;

  double label_threshold = 0.8;
  StudentConfig student;
  double test_fraction = 0.2;

  int cauc_k = 1000;
  std::string benchmark_group = "background";

  int emulate_background = 10000;
  int emulate_pool = 10000;
  int emulate_arm = 2000;
  double emulate_reduction = 0.5;
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& part : split(v, ',')) out.push_back(parse_double(trim(part), "config key '" + key + "'"));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  if (trim(v).empty()) return out;
  for (const auto& part : split(v, ',')) out.push_back(static_cast<int>(parse_int(trim(part), "config key '" + key + "'")));
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail_usage("config key '" + key + "': expected true or false, got '" + v + "'");
}

}  // namespace detail

// Applies one `key=value` setting. Unknown keys are usage errors.
inline void apply_setting(PipelineConfig& c, const std::string& key, const std::string& value) {
  const std::string ctx = "config key '" + key + "'";
  auto d = [&] { return parse_double(value, ctx); };
  auto i = [&] { return static_cast<int>(parse_int(value, ctx)); };
  if (key == "out") c.out = value;
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
  else if (key == "svg") c.svg = detail::parse_bool(value, key);
  else if (key == "n_contacts") c.corpus.n_contacts = i();
  else if (key == "n_classes") c.corpus.n_classes = i();
  else if (key == "world_seed") c.corpus.world_seed = static_cast<std::uint64_t>(parse_int(value, ctx));
  else if (key == "mixing") c.corpus.mixing = d();
  else if (key == "confuser_share") c.corpus.confuser_share = d();
  else if (key == "rare_rate") c.corpus.rare_rate = d();
  else if (key == "agent_base") c.corpus.agent_base = d();
  else if (key == "agent_growth") c.corpus.agent_growth = d();
  else if (key == "tokens_per_utterance") c.corpus.tokens_per_utterance = d();
  else if (key == "categorical_cardinalities") c.corpus.categorical_cardinalities = detail::parse_int_list(value, key);
  else if (key == "teacher_rounds") c.teacher.rounds = i();
  else if (key == "teacher_learning_rate") c.teacher.learning_rate = d();
  else if (key == "teacher_max_depth") c.teacher.max_depth = i();
  else if (key == "teacher_min_leaf") c.teacher.min_samples_leaf = i();
  else if (key == "min_doc_freq") c.teacher.min_doc_freq = i();
  else if (key == "weight") c.teacher.weight = d();
  else if (key == "weight_grid") c.weight_grid = detail::parse_double_list(value, key);
  else if (key == "select_weight") c.select_weight = detail::parse_bool(value, key);
  else if (key == "histogram_bins") c.histogram_bins = i();
  else if (key == "label_threshold") c.label_threshold = d();
  else if (key == "student_rounds") c.student.booster.rounds = i();
  else if (key == "student_learning_rate") c.student.booster.learning_rate = d();
  else if (key == "student_max_depth") c.student.booster.max_depth = i();
  else if (key == "student_min_leaf") c.student.booster.min_samples_leaf = i();
  else if (key == "tau") c.student.tau = d();
  else if (key == "embedding_dims") c.student.embedding.dims = detail::parse_int_list(value, key);
  else if (key == "embedding_epochs") c.student.embedding.epochs = i();
  else if (key == "embedding_step") c.student.embedding.step_size = d();
  else if (key == "embedding_unseen_rate") c.student.embedding.unseen_rate = d();
  else if (key == "test_fraction") c.test_fraction = d();
  else if (key == "cauc_k") c.cauc_k = i();
  else if (key == "benchmark_group") c.benchmark_group = value;
  else if (key == "emulate_background") c.emulate_background = i();
  else if (key == "emulate_pool") c.emulate_pool = i();
  else if (key == "emulate_arm") c.emulate_arm = i();
  else if (key == "emulate_reduction") c.emulate_reduction = d();
  else fail_usage("unknown config key '" + key + "'");
}

inline void apply_assignment(PipelineConfig& c, const std::string& assignment, const std::string& where) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail_usage(where + ": expected key=value, got '" + assignment + "'");
  apply_setting(c, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

// `key = value` lines; `#` starts a comment.
inline void load_config_file(PipelineConfig& c, const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    apply_assignment(c, body, path + " line " + std::to_string(line_no));
  }
}

// Derives per-stage seeds from the global seed and checks ranges.
inline void finalize(PipelineConfig& c) {
  c.corpus.seed = c.seed;
  c.student.embedding.seed = mix_seed(c.seed, 0x5eed0001);
  validate(c.corpus);
  if (c.teacher.rounds < 1) fail_usage("teacher_rounds must be at least 1");
  if (!(c.label_threshold > 0.0 && c.label_threshold < 1.0)) fail_usage("label_threshold must lie in (0,1)");
  if (!(c.student.tau > 0.0 && c.student.tau < 1.0)) fail_usage("tau must lie in (0,1)");
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) fail_usage("test_fraction must lie in (0,1)");
  if (c.cauc_k < 2) fail_usage("cauc_k must be at least 2");
  if (c.histogram_bins < 1) fail_usage("histogram_bins must be at least 1");
  if (c.emulate_arm < 2 || c.emulate_background < 2) fail_usage("emulation groups need at least two contacts");
  if (c.emulate_pool < 2 * c.emulate_arm) fail_usage("emulate_pool must hold at least two arms");
  if (!(c.emulate_reduction >= 0.0)) fail_usage("emulate_reduction must be non-negative");
}

class Workspace {
 public:
  explicit Workspace(const std::string& root) : root_(root) {
    if (!std::filesystem::is_directory(root_)) fail_usage("output directory does not exist: " + root);
  }
  std::filesystem::path root() const { return root_; }
  std::string corpus_dir() const { return dir("corpus"); }
  std::string teacher_dir() const { return dir("teacher"); }
  std::string student_dir() const { return dir("student"); }
  std::string reports_dir() const { return dir("reports"); }
  std::string scores() const { return (root_ / "scores.csv").string(); }
  std::string labels() const { return (root_ / "labels.csv").string(); }
  std::string predictions() const { return (root_ / "predictions.csv").string(); }
  std::string latents() const { return (root_ / "corpus" / "latents.csv").string(); }
  std::string report(const std::string& name) const { return (root_ / "reports" / name).string(); }

 private:
  std::string dir(const char* name) const {
    const auto p = root_ / name;
    std::filesystem::create_directories(p);
    return p.string();
  }
  std::filesystem::path root_;
};

// ---------------------------------------------------------------------------
// generate

struct GenerateSummary {
  std::size_t transcripts = 0;
  std::size_t records = 0;
};

inline void save_latents(const std::string& path, const Corpus& c, const std::vector<double>& z) {
  auto out = open_output(path);
  out << "contact_id,z\n";
  for (std::size_t i = 0; i < z.size(); ++i) out << c.transcripts[i].id << ',' << format_double(z[i]) << '\n';
  if (!out) fail_usage("write failed: " + path);
}

// Latents are synthetic ground truth, kept only for validation reports.
inline std::map<std::string, double> load_latents(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::map<std::string, double> out;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto c = split(trim(line), ',');
    if (c.size() != 2) fail_data(path + " line " + std::to_string(line_no) + ": expected 2 fields");
    out[c[0]] = parse_double(c[1], path + " line " + std::to_string(line_no));
  }
  return out;
}

inline GenerateSummary run_generate(const PipelineConfig& cfg) {
  const Workspace ws(cfg.out);
  const auto g = generate_corpus(cfg.corpus);
  const auto dir = ws.corpus_dir();
  save_corpus(dir, g.corpus);
  save_latents(ws.latents(), g.corpus, g.latents);
  return {g.corpus.transcripts.size(), g.corpus.records.size()};
}

// ---------------------------------------------------------------------------
// train-teacher

struct Histogram {
  std::string attribute;
  std::vector<double> edges;  // bins + 1
  std::vector<int> counts;
};

inline Histogram histogram(const std::string& name, const std::vector<double>& v, int bins) {
  Histogram h{name, {}, std::vector<int>(static_cast<std::size_t>(bins), 0)};
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it > *lo_it ? *hi_it : *lo_it + 1.0;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + (hi - lo) * b / bins);
  for (double x : v) {
    const int b = std::clamp(static_cast<int>((x - lo) / (hi - lo) * bins), 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

struct TeacherSummary {
  std::size_t n = 0;
  double weight = 0;
  double ks_uniform = 0;
  double ks_bound = 0;
  double skew_length = 0, skew_entropy = 0, skew_skill = 0;
  double final_loss = 0;
  std::optional<double> spearman_latent_score;
  std::optional<double> high_curve_trend;  // Spearman(bin index, P(high | bin))
};

struct TeacherRun {
  TeacherFit fit;
  WeightSelection weights;
  std::vector<Histogram> histograms;
  TeacherSummary summary;
  std::optional<LabelCurve> curve;
};

inline void save_key_values(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  auto out = open_output(path);
  out << "key,value\n";
  for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
  if (!out) fail_usage("write failed: " + path);
}

inline double nonempty_trend(const std::vector<double>& series) {
  std::vector<double> idx, val;
  for (std::size_t b = 0; b < series.size(); ++b) {
    if (std::isnan(series[b])) continue;
    idx.push_back(static_cast<double>(b));
    val.push_back(series[b]);
  }
  return idx.size() < 2 ? std::nan("") : stats::spearman(idx, val);
}

inline TeacherRun run_train_teacher(const PipelineConfig& cfg) {
  const Workspace ws(cfg.out);
  const auto corpus = load_corpus(ws.corpus_dir());
  TeacherConfig tc = cfg.teacher;
  tc.weight_grid = cfg.select_weight ? cfg.weight_grid : std::vector<double>{};
  TeacherRun run;
  run.fit = train_teacher(corpus.transcripts, tc);
  run.weights = cfg.weight_grid.empty() ? WeightSelection{tc.weight, {}} : select_weight(run.fit.triples, cfg.weight_grid);
  run.weights.selected = run.fit.model.pipeline.weight;

  save_teacher(ws.teacher_dir(), run.fit.model);
  std::vector<ScoreRow> rows;
  for (std::size_t i = 0; i < corpus.transcripts.size(); ++i) {
    rows.push_back({corpus.transcripts[i].id, corpus.transcripts[i].group, run.fit.triples[i], run.fit.scores[i]});
  }
  save_scores(ws.scores(), rows);

  std::vector<double> L, H, S;
  for (const auto& t : run.fit.triples) {
    L.push_back(t.length);
    H.push_back(t.entropy);
    S.push_back(t.skill);
  }
  run.histograms = {histogram("L", L, cfg.histogram_bins), histogram("H", H, cfg.histogram_bins),
                    histogram("S", S, cfg.histogram_bins), histogram("Q", run.fit.scores, cfg.histogram_bins)};

  auto& sm = run.summary;
  sm.n = rows.size();
  sm.weight = run.fit.model.pipeline.weight;
  sm.ks_uniform = stats::ks_uniform(run.fit.scores);
  sm.ks_bound = 2.0 / std::sqrt(static_cast<double>(sm.n));
  sm.skew_length = stats::skewness(L);
  sm.skew_entropy = stats::skewness(H);
  sm.skew_skill = stats::skewness(S);
  sm.final_loss = run.fit.loss_trace.empty() ? std::nan("") : run.fit.loss_trace.back();

  if (std::filesystem::exists(ws.latents())) {
    const auto z = load_latents(ws.latents());
    std::vector<double> zs, qs;
    std::vector<ComplexityLabel> labels;
    for (const auto& r : rows) {
      auto it = z.find(r.contact_id);
      if (it == z.end()) continue;
      zs.push_back(it->second);
      qs.push_back(r.q);
      labels.push_back(label_from_latent(it->second));
    }
    if (zs.size() == rows.size()) {
      sm.spearman_latent_score = stats::spearman(zs, qs);
      run.curve = binned_label_curve(qs, labels, 20);
      sm.high_curve_trend = nonempty_trend(run.curve->series(ComplexityLabel::high));
    }
  }

  ws.reports_dir();
  {
    auto out = open_output(ws.report("weight_selection.csv"));
    out << "weight,anderson_darling,skewness,selected\n";
    for (const auto& c : run.weights.candidates) {
      out << format_double(c.weight) << ',' << format_double(c.anderson_darling) << ',' << format_double(c.skewness) << ','
          << (c.weight == run.weights.selected ? 1 : 0) << '\n';
    }
  }
  {
    auto out = open_output(ws.report("attribute_histograms.csv"));
    out << "attribute,bin_lo,bin_hi,count\n";
    for (const auto& h : run.histograms) {
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << h.attribute << ',' << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
      }
    }
  }
  if (run.curve) {
    auto out = open_output(ws.report("label_curve.csv"));
    out << "bin,score_lo,score_hi,count,p_low,p_normal,p_high\n";
    for (int b = 0; b < run.curve->n_bins; ++b) {
      const auto& p = run.curve->probabilities[static_cast<std::size_t>(b)];
      out << b << ',' << format_double(static_cast<double>(b) / run.curve->n_bins) << ','
          << format_double(static_cast<double>(b + 1) / run.curve->n_bins) << ',' << run.curve->counts[static_cast<std::size_t>(b)];
      for (std::size_t l = 0; l < 3; ++l) out << ',' << (p ? format_double((*p)[l]) : std::string("NA"));
      out << '\n';
    }
  }
  std::vector<std::pair<std::string, std::string>> kv{
      {"n", std::to_string(sm.n)},
      {"weight", format_double(sm.weight)},
      {"ks_uniform", format_double(sm.ks_uniform)},
      {"ks_bound", format_double(sm.ks_bound)},
      {"skew_L", format_double(sm.skew_length)},
      {"skew_H", format_double(sm.skew_entropy)},
      {"skew_S", format_double(sm.skew_skill)},
      {"final_train_loss", format_double(sm.final_loss)},
  };
  if (sm.spearman_latent_score) kv.emplace_back("spearman_latent_Q", format_double(*sm.spearman_latent_score));
  if (sm.high_curve_trend) kv.emplace_back("high_curve_trend", format_double(*sm.high_curve_trend));
  save_key_values(ws.report("teacher_summary.csv"), kv);

  if (cfg.svg) {
    for (const auto& h : run.histograms) {
      std::vector<double> x, y;
      double peak = 1.0;
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        x.push_back(0.5 * (h.edges[b] + h.edges[b + 1]));
        y.push_back(h.counts[b]);
        peak = std::max(peak, static_cast<double>(h.counts[b]));
      }
      svg::save(ws.report("histogram_" + h.attribute + ".svg"),
                svg::line_chart({h.edges.front(), h.edges.back(), 0, peak * 1.05, "Distribution of " + h.attribute, h.attribute, "count"},
                                {{h.attribute, x, y}}));
    }
    if (run.curve) {
      std::vector<double> x;
      for (int b = 0; b < run.curve->n_bins; ++b) x.push_back((b + 0.5) / run.curve->n_bins);
      svg::save(ws.report("label_curve.svg"),
                svg::line_chart({0, 1, 0, 1, "Latent label share by complexity score", "Q", "share"},
                                {{"low", x, run.curve->series(ComplexityLabel::low), "#2ca02c"},
                                 {"normal", x, run.curve->series(ComplexityLabel::normal), "#7f7f7f"},
                                 {"high", x, run.curve->series(ComplexityLabel::high), "#d62728"}}));
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// score / label / predict

inline std::size_t run_score(const PipelineConfig& cfg, const std::string& transcripts_path, const std::string& out_path) {
  const Workspace ws(cfg.out);
  const auto model = load_teacher(ws.teacher_dir());
  const auto ts = load_transcripts(transcripts_path);
  const auto rows = score_transcripts(model, ts);
  save_scores(out_path, rows);
  return rows.size();
}

struct LabelSummary {
  std::size_t n = 0;
  double positive_rate = 0;
};

inline LabelSummary run_label(const PipelineConfig& cfg, const std::string& scores_path, const std::string& out_path) {
  const auto rows = load_scores(scores_path);
  std::vector<std::string> ids;
  std::vector<double> q;
  for (const auto& r : rows) {
    ids.push_back(r.contact_id);
    q.push_back(r.q);
  }
  const auto y = make_labels(q, cfg.label_threshold);
  save_labels(out_path, ids, y);
  LabelSummary s{y.size(), 0.0};
  if (!y.empty()) s.positive_rate = static_cast<double>(std::count(y.begin(), y.end(), 1)) / static_cast<double>(y.size());
  return s;
}

inline std::size_t run_predict(const PipelineConfig& cfg, const std::string& records_path, const std::string& out_path) {
  const Workspace ws(cfg.out);
  const auto model = load_student(ws.student_dir());
  const auto records = load_records(records_path);
  std::vector<Prediction> ps;
  ps.reserve(records.size());
  for (const auto& r : records) {
    const double p = model.probability(r);
    ps.push_back({r.contact_id, p, p >= model.tau ? 1 : 0});
  }
  save_predictions(out_path, ps);
  return ps.size();
}

// ---------------------------------------------------------------------------
// train-student

struct StudentMetricsRow {
  std::string model;
  double tau = 0.5;
  PrecisionRecall metrics;
};

struct StudentRun {
  double base_rate = 0;  // positive rate on the held-out split
  std::size_t n_train = 0, n_test = 0;
  std::vector<StudentMetricsRow> rows;  // embedding, one_hot, shuffled_control
};

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); }

inline StudentRun run_train_student(const PipelineConfig& cfg) {
  const Workspace ws(cfg.out);
  const auto records = load_records((std::filesystem::path(ws.corpus_dir()) / kRecordFile).string());
  const auto labels = load_labels(ws.labels());
  std::map<std::string, int> by_id;
  for (const auto& [id, y] : labels) by_id[id] = y;
  std::vector<PreContactRecord> rs;
  std::vector<int> ys;
  for (const auto& r : records) {
    auto it = by_id.find(r.contact_id);
    if (it == by_id.end()) fail_data(ws.labels() + ": no label for contact '" + r.contact_id + "'");
    rs.push_back(r);
    ys.push_back(it->second);
  }
  const auto [train_idx, test_idx] = split_indices(rs.size(), cfg.test_fraction, mix_seed(cfg.seed, 0x5eed0002));
  std::vector<PreContactRecord> r_train, r_test;
  std::vector<int> y_train, y_test;
  for (auto i : train_idx) {
    r_train.push_back(rs[i]);
    y_train.push_back(ys[i]);
  }
  for (auto i : test_idx) {
    r_test.push_back(rs[i]);
    y_test.push_back(ys[i]);
  }
  StudentRun run;
  run.n_train = r_train.size();
  run.n_test = r_test.size();
  run.base_rate = static_cast<double>(std::count(y_test.begin(), y_test.end(), 1)) / static_cast<double>(y_test.size());

  auto evaluate_on_test = [&](const StudentModel& m, double tau) {
    std::vector<int> p;
    for (const auto& r : r_test) p.push_back(m.probability(r) >= tau ? 1 : 0);
    return evaluate(p, y_test);
  };

  StudentConfig emb_cfg = cfg.student;
  emb_cfg.encoding = CategoricalEncoding::embedding;
  const auto embedding_model = train_student(r_train, y_train, emb_cfg);
  run.rows.push_back({"embedding", emb_cfg.tau, evaluate_on_test(embedding_model, emb_cfg.tau)});

  StudentConfig oh_cfg = cfg.student;
  oh_cfg.encoding = CategoricalEncoding::one_hot;
  run.rows.push_back({"one_hot", oh_cfg.tau, evaluate_on_test(train_student(r_train, y_train, oh_cfg), oh_cfg.tau)});

  // Null control: labels permuted, evaluated at the training base rate so
  // that it makes positive predictions at all.
  std::vector<int> shuffled = y_train;
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x5eed0003));
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double train_rate = static_cast<double>(std::count(y_train.begin(), y_train.end(), 1)) / static_cast<double>(y_train.size());
  const auto null_model = train_student(r_train, shuffled, emb_cfg);
  run.rows.push_back({"shuffled_control", train_rate, evaluate_on_test(null_model, train_rate)});

  save_student(ws.student_dir(), embedding_model);
  ws.reports_dir();
  auto out = open_output(ws.report("student_metrics.csv"));
  out << "model,tau,precision,recall,base_rate,n_train,n_test\n";
  for (const auto& row : run.rows) {
    out << row.model << ',' << format_double(row.tau) << ',' << format_optional(row.metrics.precision) << ','
        << format_optional(row.metrics.recall) << ',' << format_double(run.base_rate) << ',' << run.n_train << ',' << run.n_test
        << '\n';
  }
  if (!out) fail_usage("write failed: " + ws.report("student_metrics.csv"));
  return run;
}

// ---------------------------------------------------------------------------
// cauc

inline std::vector<double> score_values(const std::vector<ScoreRow>& rows) {
  std::vector<double> q;
  q.reserve(rows.size());
  for (const auto& r : rows) q.push_back(r.q);
  return q;
}

inline DualCurve run_cauc_pair(const PipelineConfig& cfg, const std::string& benchmark_path, const std::string& target_path,
                               const std::string& name = "cauc") {
  const Workspace ws(cfg.out);
  const auto c = complexity_auc(score_values(load_scores(benchmark_path)), score_values(load_scores(target_path)), cfg.cauc_k);
  ws.reports_dir();
  save_curve(ws.report(name + "_curve.csv"), c);
  save_curve_summary(ws.report(name + "_summary.csv"), c);
  if (cfg.svg) svg::save(ws.report(name + "_curve.svg"), svg::dual_curve_chart(name, c.x, c.f, c.auc));
  return c;
}

inline void save_group_chart(const std::string& path, const GroupReport& r) {
  std::vector<svg::Bar> bars;
  for (const auto& row : r.rows) bars.push_back({row.name, row.auc});
  svg::save(path, svg::bar_chart("Complexity AUC by group", bars, r.reference_auc));
}

// Groups come from the `group` column of one score file; the benchmark group
// is compared against every other group.
inline GroupReport run_cauc_groups(const PipelineConfig& cfg, const std::string& scores_path) {
  const Workspace ws(cfg.out);
  std::vector<double> background;
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : load_scores(scores_path)) {
    if (r.group == cfg.benchmark_group) background.push_back(r.q);
    else groups[r.group].push_back(r.q);
  }
  if (background.empty()) fail_data(scores_path + ": no rows in benchmark group '" + cfg.benchmark_group + "'");
  const auto report = group_report(background, groups, cfg.cauc_k);
  ws.reports_dir();
  save_group_report(ws.report("group_report.csv"), report);
  if (cfg.svg) save_group_chart(ws.report("group_report.svg"), report);
  return report;
}

// ---------------------------------------------------------------------------
// emulate
//
// A fresh contact pool (same world, next seed) is scored by the teacher. The
// first block is the background sample. From the rest, the student's top
// 2 x arm contacts are split at random into control (transcripts unchanged)
// and treatment (transcripts regenerated with latent z scaled by the
// reduction factor). The identity arm is the treatment contacts unchanged.

struct EmulationRow {
  std::string comparison;
  DualCurve curve;
};

struct EmulationRun {
  std::vector<EmulationRow> rows;
  GroupReport report;
  double mean_latent_control = 0, mean_latent_treatment = 0;

  const DualCurve& get(const std::string& name) const {
    for (const auto& r : rows) {
      if (r.comparison == name) return r.curve;
    }
    fail_usage("no emulation comparison named '" + name + "'");
  }
};

inline EmulationRun run_emulate(const PipelineConfig& cfg) {
  const Workspace ws(cfg.out);
  const auto teacher = load_teacher(ws.teacher_dir());
  const auto student = load_student(ws.student_dir());
  CorpusConfig pool_cfg = cfg.corpus;
  pool_cfg.seed = cfg.seed + 1;
  pool_cfg.n_contacts = cfg.emulate_background + cfg.emulate_pool;
  const auto pool = generate_corpus(pool_cfg);
  const auto bg_n = static_cast<std::size_t>(cfg.emulate_background);

  std::vector<ScoreRow> out_rows;
  std::vector<double> background;
  for (std::size_t i = 0; i < bg_n; ++i) {
    ScoreRow r{pool.corpus.transcripts[i].id, "background", teacher.triple(pool.corpus.transcripts[i]), 0.0};
    r.q = score(teacher.pipeline, r.triple);
    background.push_back(r.q);
    out_rows.push_back(std::move(r));
  }

  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = bg_n; i < pool.corpus.records.size(); ++i) ranked.push_back({student.probability(pool.corpus.records[i]), i});
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  ranked.resize(static_cast<std::size_t>(2 * cfg.emulate_arm));
  std::vector<std::size_t> flagged;
  for (const auto& [p, i] : ranked) flagged.push_back(i);
  std::sort(flagged.begin(), flagged.end());
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x5eed0004));
  std::shuffle(flagged.begin(), flagged.end(), rng);

  EmulationRun run;
  std::vector<double> control, treatment, identity;
  const auto arm = static_cast<std::size_t>(cfg.emulate_arm);
  for (std::size_t k = 0; k < flagged.size(); ++k) {
    const std::size_t i = flagged[k];
    const auto& original = pool.corpus.transcripts[i];
    const double z = pool.latents[i];
    ScoreRow r{original.id, "", teacher.triple(original), 0.0};
    r.q = score(teacher.pipeline, r.triple);
    if (k < arm) {
      r.group = "control";
      control.push_back(r.q);
      run.mean_latent_control += z / static_cast<double>(arm);
      out_rows.push_back(std::move(r));
      continue;
    }
    identity.push_back(r.q);
    run.mean_latent_treatment += z * cfg.emulate_reduction / static_cast<double>(arm);
    const auto regenerated = regenerate_transcript(pool_cfg, static_cast<int>(i), original.label, z * cfg.emulate_reduction);
    ScoreRow t{original.id, "treatment", teacher.triple(regenerated), 0.0};
    t.q = score(teacher.pipeline, t.triple);
    treatment.push_back(t.q);
    out_rows.push_back(std::move(t));
  }

  const int K = cfg.cauc_k;
  run.rows = {{"control_vs_background", complexity_auc(background, control, K)},
              {"treatment_vs_background", complexity_auc(background, treatment, K)},
              {"treatment_vs_control", complexity_auc(control, treatment, K)},
              {"identity_vs_control", complexity_auc(control, identity, K)}};
  run.report = group_report(background, {{"control", control}, {"treatment", treatment}}, K);

  ws.reports_dir();
  save_scores(ws.report("emulation_scores.csv"), out_rows);
  {
    auto out = open_output(ws.report("emulation.csv"));
    out << "comparison,auc,effectiveness,n_benchmark,n_target\n";
    for (const auto& r : run.rows) {
      out << r.comparison << ',' << format_double(r.curve.auc) << ',' << format_double(r.curve.effectiveness) << ','
          << r.curve.n_benchmark << ',' << r.curve.n_target << '\n';
    }
  }
  save_group_report(ws.report("emulation_group_report.csv"), run.report);
  for (const auto& r : run.rows) {
    save_curve(ws.report("emulation_" + r.comparison + "_curve.csv"), r.curve);
    if (cfg.svg) {
      svg::save(ws.report("emulation_" + r.comparison + ".svg"), svg::dual_curve_chart(r.comparison, r.curve.x, r.curve.f, r.curve.auc));
    }
  }
  if (cfg.svg) save_group_chart(ws.report("emulation_group_report.svg"), run.report);
  return run;
}

// ---------------------------------------------------------------------------
// report: collects the CSV reports present in the workspace into one text
// summary and (re)renders figures from them.

inline std::vector<std::vector<std::string>> read_table(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (!t.empty()) rows.push_back(split(t, ','));
  }
  return rows;
}

inline std::string run_report(const PipelineConfig& cfg) {
  const Workspace ws(cfg.out);
  namespace fs = std::filesystem;
  std::ostringstream text;
  const char* tables[] = {"teacher_summary.csv", "weight_selection.csv", "student_metrics.csv", "emulation.csv",
                          "emulation_group_report.csv", "group_report.csv", "cauc_summary.csv"};
  bool any = false;
  for (const char* name : tables) {
    const auto path = ws.report(name);
    if (!fs::exists(path)) continue;
    any = true;
    text << "== " << name << '\n';
    for (const auto& row : read_table(path)) text << "  " << join(row, '\t') << '\n';
  }
  if (!any) fail_data("no reports found under " + (ws.root() / "reports").string());
  if (cfg.svg) {
    for (const char* name : {"emulation_group_report.csv", "group_report.csv"}) {
      const auto path = ws.report(name);
      if (!fs::exists(path)) continue;
      std::vector<svg::Bar> bars;
      auto table = read_table(path);
      for (std::size_t i = 1; i < table.size(); ++i) bars.push_back({table[i].at(0), parse_double(table[i].at(1), path)});
      const std::string base = std::string(name).substr(0, std::string(name).size() - 4);
      svg::save(ws.report(base + ".svg"), svg::bar_chart("Complexity AUC by group", bars, 0.5));
    }
  }
  auto out = open_output(ws.report("summary.txt"));
  out << text.str();
  return text.str();
}

}  // namespace ccx
