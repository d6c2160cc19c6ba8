#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "statecap/errors.hpp"
#include "statecap/eval.hpp"
#include "statecap/fusion.hpp"
#include "statecap/ingest.hpp"
#include "statecap/localization.hpp"
#include "statecap/sim.hpp"

using namespace statecap;

namespace {

std::string emit(const Dataset& ds) {
  std::ostringstream out;
  emit_annotations(out, ds);
  return out.str();
}

}  // namespace

TEST(GenDataset, MeanPnrCountNearTarget) {
  SimConfig cfg;
  cfg.n_clips = 100000;
  cfg.seed = 1;
  const auto stats = pnr_count_stats(gen_dataset(cfg));
  EXPECT_EQ(stats.n_clips, 100000u);
  EXPECT_GE(stats.mean, 3.38);
  EXPECT_LE(stats.mean, 3.58);
}

TEST(GenDataset, ZeroSpreadPinsThePositive) {
  SimConfig cfg;
  cfg.n_clips = 500;
  cfg.positive_sd = 0.0;
  const Dataset ds = gen_dataset(cfg);
  for (const auto& [id, ann] : ds.pnr) {
    const FrameIndex n = ds.clip(id).num_frames();
    ASSERT_EQ(ann.positive_frame, static_cast<FrameIndex>(std::floor(0.43 * (n - 1) + 0.5))) << id;
  }
}

TEST(GenDataset, ClipsAreValidAndDurationsInRange) {
  SimConfig cfg;
  cfg.n_clips = 2000;
  cfg.seed = 5;
  const Dataset ds = gen_dataset(cfg);
  EXPECT_NO_THROW(ds.validate());
  EXPECT_EQ(ds.oscc.size(), ds.size());
  std::size_t positives = 0;
  for (const auto& [id, clip] : ds.clips) {
    ASSERT_GE(clip.num_frames(), 150);
    ASSERT_LE(clip.num_frames(), 240);
    const auto& neg = ds.pnr.at(id).negative_frames;
    ASSERT_TRUE(std::is_sorted(neg.begin(), neg.end()));
    ASSERT_EQ(std::adjacent_find(neg.begin(), neg.end()), neg.end());
    if (ds.oscc.at(id).state_change) ++positives;
  }
  EXPECT_NEAR(static_cast<double>(positives) / 2000.0, 0.5, 0.05);
}

TEST(GenDataset, SameSeedSameBytesDifferentSeedDifferentBytes) {
  SimConfig cfg;
  cfg.n_clips = 300;
  cfg.seed = 42;
  const std::string a = emit(gen_dataset(cfg));
  EXPECT_EQ(a, emit(gen_dataset(cfg)));
  cfg.seed = 43;
  EXPECT_NE(a, emit(gen_dataset(cfg)));
}

TEST(GenDataset, PrefixStableWhenMoreClipsRequested) {
  SimConfig small;
  small.n_clips = 50;
  SimConfig large = small;
  large.n_clips = 500;
  const Dataset a = gen_dataset(small);
  const Dataset b = gen_dataset(large);
  for (const auto& [id, ann] : a.pnr) EXPECT_EQ(b.pnr.at(id), ann);
}

TEST(GenDataset, PositionHistogramShape) {
  SimConfig cfg;
  cfg.n_clips = 20000;
  cfg.seed = 2;
  const auto h = position_histogram(gen_dataset(cfg), 10);
  const auto peak = std::max_element(h.positive.begin(), h.positive.end()) - h.positive.begin();
  EXPECT_EQ(peak, 4);
  const auto [lo, hi] = std::minmax_element(h.negative.begin(), h.negative.end());
  EXPECT_LT(static_cast<double>(*hi) / static_cast<double>(*lo), 1.5);
}

TEST(GenDataset, RejectsBadConfig) {
  SimConfig cfg;
  cfg.n_clips = 0;
  EXPECT_THROW(gen_dataset(cfg), ValidationError);
  cfg = SimConfig{};
  cfg.duration_min_sec = 9.0;
  EXPECT_THROW(gen_dataset(cfg), ValidationError);
  cfg = SimConfig{};
  cfg.positive_sd = -1.0;
  EXPECT_THROW(gen_dataset(cfg), ValidationError);
}

TEST(SimulateScores, NearlyDeterministicScorerSeparatesHitsFromMisses) {
  SimConfig cfg;
  cfg.n_clips = 200;
  const Dataset ds = gen_dataset(cfg);
  ScorerNoiseModel noise;
  noise.hit = {100.0, 1.0};
  noise.miss = {1.0, 100.0};
  const auto scores = simulate_scores(ds, WindowingConfig{}, noise, 7);
  ASSERT_EQ(scores.size(), ds.pnr.size());
  for (const auto& [id, s] : scores) {
    const auto& ann = ds.pnr.at(id);
    std::vector<FrameIndex> pnrs = ann.negative_frames;
    pnrs.push_back(ann.positive_frame);
    ASSERT_EQ(s.windows.size(), 32u);
    for (const auto& sw : s.windows) {
      const bool hit = statecap::testing::window_hits_any(sw.window.start, sw.window.end, pnrs);
      if (hit) {
        ASSERT_GT(sw.confidence, 0.5) << id;
      } else {
        ASSERT_LT(sw.confidence, 0.5) << id;
      }
    }
  }
}

TEST(SimulateScores, DuplicateGeometriesShareConfidence) {
  // 40 frames with 32 windows of 32 frames: only 9 distinct starts.
  Dataset ds;
  ds.add(Clip("c", 30.0, 40), PnrAnnotation{"c", 10, {}});
  const auto s = simulate_scores(ds, WindowingConfig{}, ScorerNoiseModel{}, 3).at("c");
  for (const auto& a : s.windows) {
    for (const auto& b : s.windows) {
      if (a.window == b.window) ASSERT_EQ(a.confidence, b.confidence);
    }
  }
}

TEST(SimulateScores, AllMissModelAlwaysFallsBack) {
  SimConfig cfg;
  cfg.n_clips = 300;
  const Dataset ds = gen_dataset(cfg);
  ScorerNoiseModel noise;
  noise.hit = {1.0, 1000.0};
  noise.miss = {1.0, 1000.0};
  for (const auto& [id, s] : simulate_scores(ds, WindowingConfig{}, noise, 1)) {
    ASSERT_EQ(select_pnr(s, ds.clip(id)).source, PredictionSource::kFallbackPrior);
  }
}

TEST(SimulateScores, DefaultSelectionBeatsFractionBaseline) {
  SimConfig cfg;
  cfg.n_clips = 3000;
  cfg.seed = 12;
  const Dataset ds = gen_dataset(cfg);
  std::map<std::string, PnrPrediction> selected, baseline;
  for (const auto& [id, s] : simulate_scores(ds, WindowingConfig{}, ScorerNoiseModel{}, 13)) {
    selected.emplace(id, select_pnr(s, ds.clip(id)));
    baseline.emplace(id, baseline_fraction(ds.clip(id), Fraction(0.43)));
  }
  EXPECT_LT(pnr_mae(selected, ds).headline, pnr_mae(baseline, ds).headline);
}

TEST(SimulateOscc, ProbabilitiesFollowFlippedLabels) {
  SimConfig cfg;
  cfg.n_clips = 4000;
  const Dataset ds = gen_dataset(cfg);
  ScorerNoiseModel noise;
  noise.oscc_flip_prob = 0.0;
  for (const auto& [id, p] : simulate_oscc_scores(ds, noise, 2)) {
    ASSERT_EQ(oscc_positive(p), ds.oscc.at(id).state_change);
  }
  noise.oscc_flip_prob = 0.25;
  std::map<std::string, bool> preds;
  for (const auto& [id, p] : simulate_oscc_scores(ds, noise, 2)) preds.emplace(id, oscc_positive(p));
  EXPECT_NEAR(oscc_accuracy(preds, ds).headline, 0.75, 0.03);
}

TEST(SimulationPlan, EmitParseRoundTrip) {
  SimulationPlan plan;
  plan.dataset.n_clips = 77;
  plan.dataset.fps = 29.97;
  plan.dataset.positive_distribution = PositiveDistribution::kUniform;
  plan.dataset.seed = 123456789012345ULL;
  plan.scorer_windows = {8, 16, 64};
  plan.noise.hit = {3.5, 1.25};
  std::ostringstream out;
  emit_simulation_plan(out, plan);
  std::istringstream in(out.str());
  const auto back = parse_simulation_plan(in);
  std::ostringstream again;
  emit_simulation_plan(again, back);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_EQ(back.scorer_windows, plan.scorer_windows);
  EXPECT_EQ(back.dataset.fps, 29.97);
}

TEST(SimulationPlan, CommentsDefaultsAndErrors) {
  std::istringstream ok("# demo\n\nn_clips = 10  # small\nscorer_windows = 32, 8\n");
  const auto plan = parse_simulation_plan(ok);
  EXPECT_EQ(plan.dataset.n_clips, 10u);
  EXPECT_EQ(plan.scorer_windows, (std::vector<int>{32, 8}));
  EXPECT_EQ(plan.dataset.positive_mean, 0.43);

  std::istringstream unknown("n_clips = 10\ncolour = red\n");
  try {
    parse_simulation_plan(unknown);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_value("fps = fast\n");
  EXPECT_THROW(parse_simulation_plan(bad_value), ParseError);
  std::istringstream invalid("fps = -3\n");
  EXPECT_THROW(parse_simulation_plan(invalid), ValidationError);
}
