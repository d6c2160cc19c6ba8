#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "statecap/errors.hpp"
#include "statecap/fusion.hpp"
#include "statecap/localization.hpp"

using namespace statecap;

namespace {

ScoreSeries canonical(ScoreSeries s) {
  std::sort(s.windows.begin(), s.windows.end(), [](const ScoredWindow& a, const ScoredWindow& b) {
    return std::tie(a.window.start, a.window.end) < std::tie(b.window.start, b.window.end);
  });
  return s;
}

// Distinct-geometry series over random window lengths.
ScoreSeries distinct_series(std::mt19937_64& rng, FrameIndex n, FrameIndex w, int count) {
  auto s = statecap::testing::random_series(rng, "c", n, w, count);
  std::sort(s.windows.begin(), s.windows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.window.start, a.window.end) < std::tie(b.window.start, b.window.end);
  });
  s.windows.erase(std::unique(s.windows.begin(), s.windows.end(),
                              [](const auto& a, const auto& b) { return a.window == b.window; }),
                  s.windows.end());
  return s;
}

}  // namespace

TEST(FuseOscc, MeanAndDecision) {
  const std::vector<double> a{0.6, 0.8};
  EXPECT_EQ(fuse_oscc(a), 0.7);
  EXPECT_TRUE(oscc_positive(fuse_oscc(a)));
  const std::vector<double> b{0.4, 0.4};
  EXPECT_EQ(fuse_oscc(b), 0.4);
  EXPECT_FALSE(oscc_positive(fuse_oscc(b)));
  const std::vector<double> single{0.123};
  EXPECT_EQ(fuse_oscc(single), 0.123);
}

TEST(FuseOscc, Errors) {
  EXPECT_THROW(fuse_oscc(std::vector<double>{}), EmptyInputError);
  EXPECT_THROW(fuse_oscc(std::vector<double>{0.5, 1.2}), ValidationError);
}

TEST(FuseOscc, OrderIndependentAndBounded) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(std::uniform_int_distribution<int>(1, 7)(rng));
    for (double& v : p) v = u(rng);
    const double ref = fuse_oscc(p);
    ASSERT_GE(ref, *std::min_element(p.begin(), p.end()));
    ASSERT_LE(ref, *std::max_element(p.begin(), p.end()));
    std::shuffle(p.begin(), p.end(), rng);
    ASSERT_EQ(fuse_oscc(p), ref);
  }
}

TEST(FusePnr, SingleSeriesIsIdentity) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = distinct_series(rng, 240, 32, 20);
    EXPECT_EQ(canonical(fuse_pnr(std::vector<ScoreSeries>{s})), canonical(s));
    EXPECT_EQ(canonical(fuse_pnr(std::vector<ScoreSeries>{s, s})), canonical(s));
  }
}

TEST(FusePnr, IdenticalWindowsAverage) {
  const Clip clip("c", 30.0, 240);
  ScoreSeries a{"c", {}}, b{"c", {}};
  const std::vector<double> ca{0.1, 0.9, 0.4}, cb{0.3, 0.5, 0.8};
  const auto windows = dense_windows(clip, {3, 32, 0});
  for (std::size_t k = 0; k < 3; ++k) {
    a.windows.push_back({windows[k], ca[k]});
    b.windows.push_back({windows[k], cb[k]});
  }
  const auto fused = fuse_pnr(std::vector<ScoreSeries>{a, b}, clip);
  ASSERT_EQ(fused.windows.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(fused.windows[k].window, windows[k]);
    EXPECT_EQ(fused.windows[k].confidence, (ca[k] + cb[k]) / 2.0);
  }
}

TEST(FusePnr, NearestCenterAlignment) {
  // 30 fps, 31-frame windows: center frame = start + 15.
  const Clip clip("c", 30.0, 240);
  const ScoreSeries a{"c", {{FrameWindow{"c", 15, 46}, 0.9}}};                                // 1.0 s
  const ScoreSeries b{"c", {{FrameWindow{"c", 21, 52}, 0.5}, {FrameWindow{"c", 75, 106}, 0.8}}};  // 1.2 s, 3.0 s
  EXPECT_DOUBLE_EQ(window_center_time(a.windows[0].window, clip), 1.0);
  EXPECT_DOUBLE_EQ(window_center_time(b.windows[0].window, clip), 1.2);
  EXPECT_DOUBLE_EQ(window_center_time(b.windows[1].window, clip), 3.0);

  const auto fused = fuse_pnr(std::vector<ScoreSeries>{a, b}, clip);
  ASSERT_EQ(fused.windows.size(), 3u);
  EXPECT_EQ(fused.windows[0].window.start, 15);
  EXPECT_DOUBLE_EQ(fused.windows[0].confidence, 0.7);
  EXPECT_EQ(statecap::testing::nearest_center_confidence(b, 30.0), 0.5);
  // A has a single window, so it contributes 0.9 everywhere.
  EXPECT_EQ(fused.windows[1].confidence, (0.9 + 0.5) / 2.0);
  EXPECT_EQ(fused.windows[2].confidence, (0.9 + 0.8) / 2.0);
}

TEST(FusePnr, MatchesBruteForceNearestSearch) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ScoreSeries> inputs;
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < k; ++i) {
      const FrameIndex w = std::uniform_int_distribution<FrameIndex>(8, 64)(rng);
      inputs.push_back(statecap::testing::random_series(rng, "c", 240, w, std::uniform_int_distribution<int>(1, 40)(rng)));
    }
    const auto fused = fuse_pnr(inputs);
    for (const auto& point : fused.windows) {
      std::vector<double> contrib;
      for (const auto& s : inputs) contrib.push_back(statecap::testing::nearest_center_confidence(s, point.window.center_frame()));
      double lo = *std::min_element(contrib.begin(), contrib.end());
      double hi = *std::max_element(contrib.begin(), contrib.end());
      ASSERT_GE(point.confidence, lo);
      ASSERT_LE(point.confidence, hi);
      double sum = 0.0;
      for (double c : contrib) sum += c;
      ASSERT_NEAR(point.confidence, sum / contrib.size(), 1e-12);
    }
  }
}

TEST(FusePnr, CommutativeOverSeriesOrderAndWindowOrder) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ScoreSeries> inputs;
    for (int i = 0; i < 3; ++i) inputs.push_back(statecap::testing::random_series(rng, "c", 200, 16 + 16 * i, 12));
    const auto ref = fuse_pnr(inputs);
    for (int r = 0; r < 4; ++r) {
      std::shuffle(inputs.begin(), inputs.end(), rng);
      for (auto& s : inputs) std::shuffle(s.windows.begin(), s.windows.end(), rng);
      ASSERT_EQ(fuse_pnr(inputs), ref);
    }
  }
}

TEST(FusePnr, OutputSortedByCenter) {
  std::mt19937_64 rng(29);
  std::vector<ScoreSeries> inputs{statecap::testing::random_series(rng, "c", 240, 32, 30),
                                  statecap::testing::random_series(rng, "c", 240, 16, 30)};
  const auto fused = fuse_pnr(inputs);
  for (std::size_t i = 1; i < fused.windows.size(); ++i) {
    EXPECT_LE(fused.windows[i - 1].window.center_x2(), fused.windows[i].window.center_x2());
  }
}

TEST(FusePnr, SelectionOnSingleSeriesUnchanged) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 500; ++trial) {
    const Clip clip("c", 30.0, 240);
    const auto s = distinct_series(rng, 240, 32, 24);
    SelectionConfig cfg;
    cfg.fallback = trial % 2 ? Fallback::kArgmaxConfidence : Fallback::kPriorPoint;
    ASSERT_EQ(select_pnr(fuse_pnr(std::vector<ScoreSeries>{s}, clip), clip, cfg), select_pnr(s, clip, cfg));
  }
}

TEST(FusePnr, Errors) {
  const Clip clip("c", 30.0, 100);
  EXPECT_THROW(fuse_pnr(std::vector<ScoreSeries>{}), EmptyInputError);
  const ScoreSeries a{"c", {{FrameWindow{"c", 0, 32}, 0.5}}};
  const ScoreSeries b{"d", {{FrameWindow{"d", 0, 32}, 0.5}}};
  EXPECT_THROW(fuse_pnr(std::vector<ScoreSeries>{a, b}), ValidationError);
  EXPECT_THROW(fuse_pnr(std::vector<ScoreSeries>{a, ScoreSeries{"c", {}}}), EmptyInputError);
  const ScoreSeries oob{"c", {{FrameWindow{"c", 90, 122}, 0.5}}};
  EXPECT_THROW(fuse_pnr(std::vector<ScoreSeries>{a, oob}, clip), BoundsError);
}
