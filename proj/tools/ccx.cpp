// ccx: command-line driver for the contact-complexity pipeline.
//
// Settings are resolved in order: built-in defaults, --config file,
// --set key=value overrides, then the dedicated flags (--seed, --out, --svg).

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ccx/pipeline.hpp"

namespace {

struct GlobalOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool svg = false;
};

ccx::PipelineConfig resolve(const GlobalOptions& g) {
  ccx::PipelineConfig cfg;
  if (!g.config.empty()) ccx::load_config_file(cfg, g.config);
  for (const auto& s : g.sets) ccx::apply_assignment(cfg, s, "--set");
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out = *g.out;
  if (g.svg) cfg.svg = true;
  ccx::finalize(cfg);
  return cfg;
}

std::string in_out(const ccx::PipelineConfig& cfg, const std::string& given, const std::string& rel) {
  return given.empty() ? (std::filesystem::path(cfg.out) / rel).string() : given;
}

std::string fmt(double v) { return ccx::format_double(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact complexity pipeline: teacher scoring, student routing, Complexity AUC"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--set", g.sets, "override one config key (key=value); repeatable");
  app.add_option("--seed", g.seed, "global seed");
  app.add_option("--out", g.out, "workspace directory (must exist)");
  app.add_flag("--svg", g.svg, "also write SVG figures");

  auto* generate = app.add_subcommand("generate", "write a synthetic corpus to <out>/corpus");
  auto* train_teacher = app.add_subcommand("train-teacher", "train the teacher and score the training corpus");

  auto* score = app.add_subcommand("score", "score a transcript file with the trained teacher");
  std::string score_input, score_output;
  score->add_option("--input", score_input, "transcripts JSONL (default <out>/corpus/transcripts.jsonl)");
  score->add_option("--output", score_output, "score file (default <out>/scores.csv)");

  auto* label = app.add_subcommand("label", "threshold scores into binary student labels");
  std::string label_input, label_output;
  std::optional<double> threshold;
  label->add_option("--scores", label_input, "score file (default <out>/scores.csv)");
  label->add_option("--output", label_output, "labels file (default <out>/labels.csv)");
  label->add_option("--threshold", threshold, "positive iff Q >= threshold");

  auto* train_student = app.add_subcommand("train-student", "train the pre-contact student with its ablations");

  auto* predict = app.add_subcommand("predict", "route pre-contact records with the trained student");
  std::string predict_input, predict_output;
  predict->add_option("--input", predict_input, "pre-contact CSV (default <out>/corpus/precontact.csv)");
  predict->add_option("--output", predict_output, "predictions file (default <out>/predictions.csv)");

  auto* cauc = app.add_subcommand("cauc", "Complexity AUC between score files");
  std::string benchmark, target, groups, name = "cauc";
  auto* b_opt = cauc->add_option("--benchmark", benchmark, "benchmark score file");
  auto* t_opt = cauc->add_option("--target", target, "target score file");
  auto* g_opt = cauc->add_option("--groups", groups, "score file whose group column defines the groups");
  cauc->add_option("--name", name, "report file prefix for a pairwise comparison");
  b_opt->needs(t_opt);
  t_opt->needs(b_opt);
  g_opt->excludes(b_opt)->excludes(t_opt);

  auto* emulate = app.add_subcommand("emulate", "routing emulation: background, control and treatment groups");
  std::optional<double> reduction;
  emulate->add_option("--reduction", reduction, "latent scale applied to treatment contacts (1 = identity)");

  auto* report = app.add_subcommand("report", "summarise the reports present in the workspace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    auto cfg = resolve(g);
    if (generate->parsed()) {
      const auto s = ccx::run_generate(cfg);
      std::cout << "transcripts " << s.transcripts << "\nrecords " << s.records << '\n';
    } else if (train_teacher->parsed()) {
      const auto run = ccx::run_train_teacher(cfg);
      const auto& sm = run.summary;
      std::cout << "transcripts " << sm.n << "\nvocabulary " << run.fit.model.vocab.size() << "\nweight " << fmt(sm.weight)
                << "\nks_uniform " << fmt(sm.ks_uniform) << " (bound " << fmt(sm.ks_bound) << ")\nskewness L " << fmt(sm.skew_length)
                << " H " << fmt(sm.skew_entropy) << " S " << fmt(sm.skew_skill) << '\n';
      if (sm.spearman_latent_score) std::cout << "spearman(latent, Q) " << fmt(*sm.spearman_latent_score) << '\n';
    } else if (score->parsed()) {
      const auto n = ccx::run_score(cfg, in_out(cfg, score_input, "corpus/transcripts.jsonl"), in_out(cfg, score_output, "scores.csv"));
      std::cout << "scored " << n << '\n';
    } else if (label->parsed()) {
      if (threshold) {
        ccx::apply_setting(cfg, "label_threshold", fmt(*threshold));
        ccx::finalize(cfg);
      }
      const auto s = ccx::run_label(cfg, in_out(cfg, label_input, "scores.csv"), in_out(cfg, label_output, "labels.csv"));
      std::cout << "labelled " << s.n << "\npositive_rate " << fmt(s.positive_rate) << '\n';
    } else if (train_student->parsed()) {
      const auto run = ccx::run_train_student(cfg);
      std::cout << "base_rate " << fmt(run.base_rate) << " (n_test " << run.n_test << ")\n";
      for (const auto& row : run.rows) {
        std::cout << row.model << " tau " << fmt(row.tau) << " precision " << ccx::format_optional(row.metrics.precision)
                  << " recall " << ccx::format_optional(row.metrics.recall) << '\n';
      }
    } else if (predict->parsed()) {
      const auto n = ccx::run_predict(cfg, in_out(cfg, predict_input, "corpus/precontact.csv"), in_out(cfg, predict_output, "predictions.csv"));
      std::cout << "predicted " << n << '\n';
    } else if (cauc->parsed()) {
      if (!groups.empty()) {
        const auto r = ccx::run_cauc_groups(cfg, groups);
        for (const auto& row : r.rows) {
          std::cout << row.name << " auc " << fmt(row.auc) << " effectiveness " << fmt(row.effectiveness) << " n " << row.n << '\n';
        }
      } else if (!benchmark.empty()) {
        const auto c = ccx::run_cauc_pair(cfg, benchmark, target, name);
        std::cout << "auc " << fmt(c.auc) << "\neffectiveness " << fmt(c.effectiveness) << '\n';
      } else {
        ccx::fail_usage("cauc needs --benchmark and --target, or --groups");
      }
    } else if (emulate->parsed()) {
      if (reduction) {
        ccx::apply_setting(cfg, "emulate_reduction", fmt(*reduction));
        ccx::finalize(cfg);
      }
      const auto run = ccx::run_emulate(cfg);
      for (const auto& row : run.rows) {
        std::cout << row.comparison << " auc " << fmt(row.curve.auc) << " effectiveness " << fmt(row.curve.effectiveness) << '\n';
      }
    } else if (report->parsed()) {
      std::cout << ccx::run_report(cfg);
    }
  } catch (const ccx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
