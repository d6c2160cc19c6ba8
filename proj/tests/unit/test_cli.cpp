#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "statecap/ingest.hpp"
#include "statecap/predictions.hpp"
#include "temp_dir.hpp"

using statecap::testing::read_file;
using statecap::testing::TempDir;
using statecap::testing::write_file;

namespace {

const std::string kFixture = std::string(STATECAP_FIXTURE_DIR) + "/three_clips.jsonl";
const std::string kFixtureScores = std::string(STATECAP_FIXTURE_DIR) + "/three_clips_scores.jsonl";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = statecap::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// simulate -> localize -> evaluate in `dir`; returns the evaluation report.
std::string pipeline(const TempDir& dir, const std::string& tag) {
  const std::string sim = dir.file("sim_" + tag);
  EXPECT_EQ(run({"--seed", "7", "simulate", "--out-dir", sim, "--n-clips", "200"}).code, 0);
  const std::string preds = dir.file("preds_" + tag + ".jsonl");
  const std::string report = dir.file("report_" + tag + ".json");
  EXPECT_EQ(run({"-q", "--out", preds, "localize", "--scores", sim + "/pnr_scores_n32.jsonl", "--annotations",
                 sim + "/annotations.jsonl"})
                .code,
            0);
  const auto r = run({"--out", report, "evaluate", "--task", "pnr", "--preds", preds, "--annotations",
                      sim + "/annotations.jsonl"});
  EXPECT_EQ(r.code, 0) << r.err;
  return read_file(sim + "/annotations.jsonl") + read_file(sim + "/pnr_scores_n32.jsonl") + read_file(preds) +
         read_file(report) + r.out;
}

bool has_temp_files(const std::filesystem::path& dir) {
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.path().filename().string().find(".tmp.") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Cli, PipelineIsByteDeterministic) {
  TempDir dir;
  const std::string a = pipeline(dir, "a");
  const std::string b = pipeline(dir, "b");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_FALSE(has_temp_files(dir.path()));
}

TEST(Cli, SimulateWritesEveryArtifact) {
  TempDir dir;
  const auto r = run({"simulate", "--out-dir", dir.file("s"), "--n-clips", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"annotations.jsonl", "simulation.conf", "pnr_scores_n32.jsonl", "pnr_scores_n16.jsonl",
                           "oscc_scores_n32.jsonl", "oscc_scores_n16.jsonl"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.file("s") + "/" + name)) << name;
  }
  // The written config reproduces the run.
  const auto again = run({"simulate", "--config", dir.file("s") + "/simulation.conf", "--out-dir", dir.file("t")});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(read_file(dir.file("s") + "/pnr_scores_n16.jsonl"), read_file(dir.file("t") + "/pnr_scores_n16.jsonl"));
}

TEST(Cli, SimulateRejectsRepeatedScorerCounts) {
  TempDir dir;
  write_file(dir.file("c.conf"), "scorer_windows = 16,16\n");
  const auto r = run({"simulate", "--config", dir.file("c.conf"), "--out-dir", dir.file("s")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("scorer_windows"), std::string::npos);
}

TEST(Cli, EvaluateRejectsIncompletePredictions) {
  TempDir dir;
  const std::string preds = dir.file("p.jsonl");
  ASSERT_EQ(run({"-q", "--out", preds, "baseline", "--annotations", kFixture}).code, 0);
  std::string text = read_file(preds);
  text = text.substr(0, text.rfind('\n', text.size() - 2) + 1);  // drop the last line
  write_file(preds, text);
  const auto r = run({"evaluate", "--task", "pnr", "--preds", preds, "--annotations", kFixture});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("workshop_001"), std::string::npos) << r.err;
}

TEST(Cli, EvaluateOsccFromFixtureLabels) {
  TempDir dir;
  write_file(dir.file("o.jsonl"),
             "{\"clip_id\":\"kitchen_001\",\"state_change\":true}\n{\"clip_id\":\"kitchen_002\",\"prob\":0.7}\n");
  const auto r = run({"evaluate", "--task", "oscc", "--preds", dir.file("o.jsonl"), "--annotations", kFixture});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("50.00%"), std::string::npos) << r.out;
}

TEST(Cli, LocalizeFixtureScores) {
  const auto r = run({"localize", "--scores", kFixtureScores, "--annotations", kFixture});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto preds = statecap::parse_pnr_predictions(in);
  ASSERT_EQ(preds.size(), 3u);
  // kitchen_001: candidates [0,32) 0.75, [96,128) 0.82, [180,212) 0.9; prior frame ~102.8.
  EXPECT_EQ(preds.at("kitchen_001").frame, 112);
  // kitchen_002: only [40,72) clears 0.7.
  EXPECT_EQ(preds.at("kitchen_002").frame, 56);
  // workshop_001: nothing clears 0.7 strictly, so the prior point.
  EXPECT_EQ(preds.at("workshop_001").source, statecap::PredictionSource::kFallbackPrior);
  EXPECT_EQ(preds.at("workshop_001").frame, 86);
}

TEST(Cli, OracleShrinksWithMoreWindows) {
  TempDir dir;
  ASSERT_EQ(run({"-q", "simulate", "--out-dir", dir.file("s"), "--n-clips", "300"}).code, 0);
  auto mean_of = [&](const std::string& n) {
    const auto r = run({"oracle", "--annotations", dir.file("s") + "/annotations.jsonl", "--n", n});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto pos = r.out.find("mean_oracle_error_sec");
    return std::stod(r.out.substr(pos + 21));
  };
  const double e16 = mean_of("16");
  const double e32 = mean_of("32");
  EXPECT_GT(e16, e32);
  EXPECT_GT(e32, 0.0);
}

TEST(Cli, FusePnrAndOscc) {
  TempDir dir;
  ASSERT_EQ(run({"-q", "simulate", "--out-dir", dir.file("s"), "--n-clips", "50"}).code, 0);
  const std::string s = dir.file("s") + "/";
  auto r = run({"-q", "--out", dir.file("f.jsonl"), "fuse", "--task", "pnr", "--scores", s + "pnr_scores_n32.jsonl",
                s + "pnr_scores_n16.jsonl", "--annotations", s + "annotations.jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream fused(dir.file("f.jsonl"));
  const auto series = statecap::parse_scores(fused);
  EXPECT_EQ(series.size(), 50u);

  r = run({"-q", "--out", dir.file("o.jsonl"), "fuse", "--task", "oscc", "--scores", s + "oscc_scores_n32.jsonl",
           s + "oscc_scores_n16.jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"evaluate", "--task", "oscc", "--preds", dir.file("o.jsonl"), "--annotations", s + "annotations.jsonl"});
  EXPECT_EQ(r.code, 0) << r.err;

  r = run({"fuse", "--task", "pnr", "--scores", s + "pnr_scores_n32.jsonl"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--out"), std::string::npos);
  EXPECT_FALSE(has_temp_files(dir.path()));
}

TEST(Cli, FuseRejectsMismatchedClipSets) {
  TempDir dir;
  write_file(dir.file("a.jsonl"), "{\"clip_id\":\"x\",\"prob\":0.2}\n");
  write_file(dir.file("b.jsonl"), "{\"clip_id\":\"y\",\"prob\":0.2}\n");
  const auto r = run({"--out", dir.file("o.jsonl"), "fuse", "--task", "oscc", "--scores", dir.file("a.jsonl"),
                      dir.file("b.jsonl")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("missing clip"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir.file("o.jsonl")));
}

TEST(Cli, WindowsLayout) {
  const auto r = run({"windows", "--frames", "240", "--n", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n1 7 39 "), std::string::npos);
  EXPECT_NE(r.out.find("\n31 208 240 7.450000 "), std::string::npos);
  EXPECT_NE(run({"windows", "--frames", "20"}).code, 0);
}

TEST(Cli, StatsOnFixture) {
  TempDir dir;
  const auto r = run({"--out", dir.file("s.json"), "stats", "--annotations", kFixture, "--plot-data",
                      dir.file("h.dat")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mean 3.6667"), std::string::npos);
  EXPECT_NE(read_file(dir.file("s.json")).find("\"mean_pnr_per_clip\""), std::string::npos);
  EXPECT_EQ(read_file(dir.file("h.dat")).rfind("# bin_center positive negative\n", 0), 0u);
}

TEST(Cli, BadInputsGiveOneLineErrors) {
  TempDir dir;
  write_file(dir.file("bad.jsonl"), "{\"clip_id\":\"a\",\"fps\":30,\"num_frames\":240}\n{oops\n");
  auto r = run({"stats", "--annotations", dir.file("bad.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad.jsonl"), std::string::npos);

  r = run({"localize", "--scores", kFixtureScores, "--annotations", kFixture, "--fallback", "median"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--fallback"), std::string::npos);

  r = run({"--out", dir.file("missing/dir/x.jsonl"), "baseline", "--annotations", kFixture});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);

  r = run({"frobnicate"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("unknown subcommand 'frobnicate'"), std::string::npos);

  r = run({});
  EXPECT_NE(r.code, 0);
}

TEST(Cli, HelpSucceeds) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}
