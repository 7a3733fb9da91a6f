#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "ccx/pipeline.hpp"
#include "test_util.hpp"

using namespace ccx;
using ccx::testing::slurp;
using ccx::testing::TempDir;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const std::string& out) {
  PipelineConfig c;
  c.out = out;
  c.corpus.n_contacts = 2000;
  c.teacher.rounds = 20;
  c.cauc_k = 200;
  c.emulate_background = 1000;
  c.emulate_pool = 1000;
  c.emulate_arm = 200;
  c.svg = true;
  finalize(c);
  return c;
}

void run_all(const PipelineConfig& c) {
  run_generate(c);
  run_train_teacher(c);
  const Workspace ws(c.out);
  run_label(c, ws.scores(), ws.labels());
  run_train_student(c);
  run_predict(c, (fs::path(ws.corpus_dir()) / kRecordFile).string(), ws.predictions());
  run_emulate(c);
  run_cauc_groups(c, ws.report("emulation_scores.csv"));
  run_report(c);
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path().string());
  }
  return files;
}

struct Shell {
  int code;
  std::string out;
  std::string err;
};

Shell cli(const std::string& args, const TempDir& scratch) {
  const auto out = scratch.file("stdout.txt"), err = scratch.file("stderr.txt");
  const std::string cmd = std::string(CCX_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST(Config, FileAndOverrides) {
  TempDir d;
  ccx::testing::write_text(d.file("c.cfg"), "# comment\nn_contacts = 123\nweight_grid = 1, 3\nembedding_dims=2,4,1\nsvg=true\n\n");
  PipelineConfig c;
  load_config_file(c, d.file("c.cfg"));
  apply_assignment(c, "tau=0.4", "--set");
  finalize(c);
  EXPECT_EQ(c.corpus.n_contacts, 123);
  EXPECT_EQ(c.weight_grid, (std::vector<double>{1, 3}));
  EXPECT_EQ(c.student.embedding.dims, (std::vector<int>{2, 4, 1}));
  EXPECT_TRUE(c.svg);
  EXPECT_EQ(c.student.tau, 0.4);
  EXPECT_EQ(c.corpus.seed, c.seed);
}

TEST(Config, Errors) {
  PipelineConfig c;
  EXPECT_THROW(apply_setting(c, "nope", "1"), Error);
  EXPECT_THROW(apply_setting(c, "n_contacts", "ten"), Error);
  EXPECT_THROW(apply_assignment(c, "missing-equals", "x"), Error);
  c.label_threshold = 1.0;
  EXPECT_THROW(finalize(c), Error);
  c = PipelineConfig{};
  c.teacher.rounds = 0;
  EXPECT_THROW(finalize(c), Error);
  EXPECT_THROW(Workspace("/definitely/not/here"), Error);
}

TEST(Pipeline, EndToEndArtifactsAndDeterminism) {
  TempDir a, b;
  run_all(small_config(a.str()));
  run_all(small_config(b.str()));
  const auto sa = snapshot(a.path()), sb = snapshot(b.path());
  ASSERT_EQ(sa.size(), sb.size());
  for (const auto& [name, bytes] : sa) {
    ASSERT_TRUE(sb.count(name)) << name;
    EXPECT_TRUE(bytes == sb.at(name)) << name << " differs between runs";
  }
  for (const char* f : {"corpus/transcripts.jsonl", "corpus/precontact.csv", "teacher/pipeline.txt", "student/student.txt",
                        "scores.csv", "labels.csv", "predictions.csv", "reports/weight_selection.csv",
                        "reports/attribute_histograms.csv", "reports/teacher_summary.csv", "reports/student_metrics.csv",
                        "reports/emulation.csv", "reports/group_report.csv", "reports/summary.txt",
                        "reports/emulation_control_vs_background.svg", "reports/histogram_L.svg"}) {
    EXPECT_TRUE(sa.count(f)) << "missing " << f;
  }
  const auto scores = load_scores(a.file("scores.csv"));
  EXPECT_EQ(scores.size(), 2000u);
  const auto summary = slurp(a.file("reports/teacher_summary.csv"));
  EXPECT_NE(summary.find("ks_uniform,"), std::string::npos);
  EXPECT_NE(summary.find("skew_L,"), std::string::npos);
  const auto weights = slurp(a.file("reports/weight_selection.csv"));
  EXPECT_EQ(std::count(weights.begin(), weights.end(), '\n'), 5);
  const auto svg = slurp(a.file("reports/emulation_treatment_vs_control.svg"));
  EXPECT_EQ(svg.find("<polyline") != std::string::npos && svg.find("<polyline", svg.find("<polyline") + 1) != std::string::npos, true);
}

TEST(Pipeline, TeacherSummaryReportsUniformityAndSkew) {
  TempDir a;
  auto c = small_config(a.str());
  run_generate(c);
  const auto run = run_train_teacher(c);
  EXPECT_LT(run.summary.ks_uniform, run.summary.ks_bound);
  EXPECT_GT(run.summary.skew_length, 0.0);
  EXPECT_GT(run.summary.skew_entropy, 0.0);
  EXPECT_TRUE(std::isfinite(run.summary.skew_skill));  // sign is only stable at full corpus size
  ASSERT_TRUE(run.summary.spearman_latent_score.has_value());
  EXPECT_GT(*run.summary.spearman_latent_score, 0.5);
  EXPECT_EQ(run.weights.candidates.size(), 4u);
  EXPECT_EQ(run.summary.weight, 2.0);
}

TEST(Pipeline, EmulationDirectionAndIdentity) {
  TempDir a;
  auto c = small_config(a.str());
  run_generate(c);
  run_train_teacher(c);
  const Workspace ws(c.out);
  run_label(c, ws.scores(), ws.labels());
  run_train_student(c);
  const auto run = run_emulate(c);
  EXPECT_GT(run.get("control_vs_background").auc, 0.55);
  EXPECT_LT(run.get("treatment_vs_control").auc, 0.45);
  EXPECT_LT(run.mean_latent_treatment, run.mean_latent_control);
  c.emulate_reduction = 1.0;
  const auto identity = run_emulate(c);
  EXPECT_EQ(identity.get("treatment_vs_control").auc, identity.get("identity_vs_control").auc);
  EXPECT_NEAR(identity.get("treatment_vs_control").auc, 0.5, 0.06);
  EXPECT_EQ(run.report.rows.size(), 2u);
  EXPECT_EQ(run.report.rows[0].name, "control");
}

TEST(Cli, MissingOutputDirectoryIsNamed) {
  TempDir scratch;
  const auto r = cli("generate --out /no/such/dir/anywhere", scratch);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("/no/such/dir/anywhere"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitOne) {
  TempDir scratch;
  EXPECT_EQ(cli("frobnicate", scratch).code, 1);
  EXPECT_EQ(cli("generate --out " + scratch.str() + " --set bogus=1", scratch).code, 1);
  EXPECT_EQ(cli("", scratch).code, 1);
  EXPECT_EQ(cli("cauc --out " + scratch.str(), scratch).code, 1);
}

TEST(Cli, DataErrorsExitTwo) {
  TempDir scratch, ws;
  ccx::testing::write_text(ws.file("scores.csv"), "contact_id,group,L,H,S,Q\nc1,g,3,0.1,0.2,1.5\n");
  const auto r = cli("label --out " + ws.str(), scratch);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, GenerateTwiceIsIdenticalAndCountsMatch) {
  TempDir scratch, a, b;
  const auto ra = cli("generate --seed 7 --set n_contacts=300 --out " + a.str(), scratch);
  ASSERT_EQ(ra.code, 0) << ra.err;
  EXPECT_NE(ra.out.find("transcripts 300"), std::string::npos);
  ASSERT_EQ(cli("generate --seed 7 --set n_contacts=300 --out " + b.str(), scratch).code, 0);
  EXPECT_EQ(snapshot(a.path()), snapshot(b.path()));
  EXPECT_EQ(load_transcripts(a.file("corpus/transcripts.jsonl")).size(), 300u);
}

TEST(Cli, FullRunDoesNotMutateInputs) {
  TempDir scratch, ws;
  const std::string common = " --out " + ws.str() + " --set n_contacts=1500 --set teacher_rounds=10 --set emulate_background=600"
                             " --set emulate_pool=600 --set emulate_arm=150 --set cauc_k=100";
  ASSERT_EQ(cli("generate" + common, scratch).code, 0);
  const auto corpus_before = snapshot(ws.path() / "corpus");
  auto r = cli("train-teacher" + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ks_uniform"), std::string::npos);
  const auto scores_before = slurp(ws.file("scores.csv"));
  ASSERT_EQ(cli("label" + common, scratch).code, 0);
  ASSERT_EQ(cli("score --output " + ws.file("rescored.csv") + common, scratch).code, 0);
  EXPECT_EQ(slurp(ws.file("rescored.csv")), scores_before);
  r = cli("train-student" + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("one_hot"), std::string::npos);
  ASSERT_EQ(cli("predict" + common, scratch).code, 0);
  r = cli("emulate --svg" + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  r = cli("cauc --svg --benchmark " + ws.file("scores.csv") + " --target " + ws.file("rescored.csv") + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto curve_svg = slurp(ws.file("reports/cauc_curve.svg"));
  EXPECT_NE(curve_svg.find("identity"), std::string::npos);
  EXPECT_EQ(std::count(curve_svg.begin(), curve_svg.end(), '\n') > 0, true);
  r = cli("cauc --groups " + ws.file("reports/emulation_scores.csv") + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("treatment"), std::string::npos);
  r = cli("report" + common, scratch);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("emulation.csv"), std::string::npos);
  EXPECT_EQ(snapshot(ws.path() / "corpus"), corpus_before);
  EXPECT_EQ(slurp(ws.file("scores.csv")), scores_before);
}
