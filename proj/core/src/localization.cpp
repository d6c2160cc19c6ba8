#include "statecap/localization.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include "statecap/errors.hpp"

namespace statecap {

namespace {

constexpr std::array<std::pair<PredictionSource, std::string_view>, 5> kSourceNames{{
    {PredictionSource::kSelected, "selected"},
    {PredictionSource::kFallbackPrior, "fallback-prior"},
    {PredictionSource::kFallbackArgmax, "fallback-argmax"},
    {PredictionSource::kBaselineCenter, "baseline-center"},
    {PredictionSource::kBaselineFraction, "baseline-fraction"},
}};

constexpr std::array<std::pair<Fallback, std::string_view>, 2> kFallbackNames{{
    {Fallback::kPriorPoint, "prior-point"},
    {Fallback::kArgmaxConfidence, "argmax-confidence"},
}};

// Earlier window first; used to break every tie.
bool earlier(const FrameWindow& a, const FrameWindow& b) {
  return std::tie(a.start, a.end) < std::tie(b.start, b.end);
}

PnrPrediction from_window(const FrameWindow& w, const Clip& clip, PredictionSource source) {
  return PnrPrediction{clip.id(), window_center_time(w, clip), (w.start + w.end) / 2, source};
}

PnrPrediction from_fraction(const Clip& clip, Fraction f, PredictionSource source) {
  const FrameIndex frame = fraction_to_frame(f, clip.num_frames());
  return PnrPrediction{clip.id(), clip.frame_time(frame), frame, source};
}

}  // namespace

std::string_view to_string(PredictionSource source) {
  for (const auto& [s, name] : kSourceNames) {
    if (s == source) return name;
  }
  return "unknown";
}

std::optional<PredictionSource> parse_prediction_source(std::string_view text) {
  for (const auto& [s, name] : kSourceNames) {
    if (name == text) return s;
  }
  return std::nullopt;
}

std::string_view to_string(Fallback fallback) {
  for (const auto& [f, name] : kFallbackNames) {
    if (f == fallback) return name;
  }
  return "unknown";
}

std::optional<Fallback> parse_fallback(std::string_view text) {
  for (const auto& [f, name] : kFallbackNames) {
    if (name == text) return f;
  }
  if (text == "prior") return Fallback::kPriorPoint;
  if (text == "argmax") return Fallback::kArgmaxConfidence;
  return std::nullopt;
}

void SelectionConfig::validate() const {
  if (!std::isfinite(threshold)) throw DomainError("threshold must be finite");
  if (!(prior_fraction >= 0.0 && prior_fraction <= 1.0)) {
    throw DomainError("prior fraction must lie in [0, 1], got " + std::to_string(prior_fraction));
  }
}

PnrPrediction select_pnr(const ScoreSeries& series, const Clip& clip, const SelectionConfig& cfg) {
  cfg.validate();
  if (series.windows.empty()) throw EmptyInputError("clip '" + clip.id() + "': empty score series");
  if (series.clip_id != clip.id()) {
    throw ValidationError("score series of '" + series.clip_id + "' used with clip '" + clip.id() + "'");
  }

  const ScoredWindow* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& sw : series.windows) {
    const double distance = std::abs(window_center_fraction(sw.window, clip) - cfg.prior_fraction);
    if (!(sw.confidence > cfg.threshold)) continue;
    if (best == nullptr || distance < best_distance ||
        (distance == best_distance && earlier(sw.window, best->window))) {
      best = &sw;
      best_distance = distance;
    }
  }
  if (best != nullptr) return from_window(best->window, clip, PredictionSource::kSelected);

  if (cfg.fallback == Fallback::kPriorPoint) {
    return from_fraction(clip, Fraction(cfg.prior_fraction), PredictionSource::kFallbackPrior);
  }
  for (const auto& sw : series.windows) {
    if (best == nullptr || sw.confidence > best->confidence ||
        (sw.confidence == best->confidence && earlier(sw.window, best->window))) {
      best = &sw;
    }
  }
  return from_window(best->window, clip, PredictionSource::kFallbackArgmax);
}

PnrPrediction baseline_center(const Clip& clip) {
  return from_fraction(clip, Fraction(0.5), PredictionSource::kBaselineCenter);
}

PnrPrediction baseline_fraction(const Clip& clip, Fraction f) {
  return from_fraction(clip, f, PredictionSource::kBaselineFraction);
}

double oracle_error(const PnrAnnotation& ann, const Clip& clip, const WindowingConfig& cfg) {
  ann.validate(clip);
  const double truth = clip.frame_time(ann.positive_frame);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : dense_windows(clip, cfg)) {
    best = std::min(best, std::abs(window_center_time(w, clip) - truth));
  }
  return best;
}

}  // namespace statecap
