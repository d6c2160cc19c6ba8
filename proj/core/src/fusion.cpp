#include "statecap/fusion.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "statecap/errors.hpp"

namespace statecap {

namespace {

// Order-independent mean: sums in sorted order and clamps to the input
// range so rounding never leaves [min, max].
double stable_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  return std::clamp(mean, values.front(), values.back());
}

bool by_center(const ScoredWindow& a, const ScoredWindow& b) {
  return std::make_tuple(a.window.center_x2(), a.window.start, a.window.end, a.confidence) <
         std::make_tuple(b.window.center_x2(), b.window.start, b.window.end, b.confidence);
}

}  // namespace

double fuse_oscc(std::span<const double> probs) {
  if (probs.empty()) throw EmptyInputError("no OSCC probabilities to fuse");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("OSCC probability " + std::to_string(p) + " outside [0, 1]");
  }
  return stable_mean(std::vector<double>(probs.begin(), probs.end()));
}

FusedSeries fuse_pnr(std::span<const ScoreSeries> series) {
  if (series.empty()) throw EmptyInputError("no score series to fuse");
  const std::string& clip_id = series.front().clip_id;

  std::vector<std::vector<ScoredWindow>> sorted;
  sorted.reserve(series.size());
  for (const auto& s : series) {
    if (s.clip_id != clip_id) {
      throw ValidationError("cannot fuse series of '" + s.clip_id + "' with series of '" + clip_id + "'");
    }
    if (s.windows.empty()) throw EmptyInputError("clip '" + clip_id + "': empty score series in fusion");
    for (const auto& sw : s.windows) {
      if (sw.window.clip_id != clip_id) {
        throw ValidationError("series of '" + clip_id + "' holds a window of '" + sw.window.clip_id + "'");
      }
      if (!(sw.confidence >= 0.0 && sw.confidence <= 1.0)) {
        throw ValidationError("clip '" + clip_id + "': confidence " + std::to_string(sw.confidence) +
                              " outside [0, 1]");
      }
    }
    sorted.emplace_back(s.windows.begin(), s.windows.end());
    std::sort(sorted.back().begin(), sorted.back().end(), by_center);
  }

  std::vector<std::pair<FrameIndex, FrameIndex>> points;
  for (const auto& s : sorted) {
    for (const auto& sw : s) points.emplace_back(sw.window.start, sw.window.end);
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.first + a.second, a.first, a.second) <
           std::make_tuple(b.first + b.second, b.first, b.second);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());

  FusedSeries fused{clip_id, {}};
  fused.windows.reserve(points.size());
  std::vector<double> contributions(sorted.size());
  for (const auto& [start, end] : points) {
    const FrameIndex center_x2 = start + end - 1;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      // Windows are in center order, so the first minimum is the earlier one.
      const ScoredWindow* nearest = nullptr;
      FrameIndex nearest_dist = 0;
      for (const auto& sw : sorted[i]) {
        const FrameIndex dist = std::abs(sw.window.center_x2() - center_x2);
        if (nearest == nullptr || dist < nearest_dist) {
          nearest = &sw;
          nearest_dist = dist;
        }
      }
      contributions[i] = nearest->confidence;
    }
    fused.windows.push_back(ScoredWindow{FrameWindow{clip_id, start, end}, stable_mean(contributions)});
  }
  return fused;
}

FusedSeries fuse_pnr(std::span<const ScoreSeries> series, const Clip& clip) {
  for (const auto& s : series) {
    for (const auto& sw : s.windows) sw.window.validate(clip);
  }
  return fuse_pnr(series);
}

}  // namespace statecap
