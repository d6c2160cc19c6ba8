#pragma once

// PNR selection from dense window scores, the fixed-position baselines and
// the segmentation oracle.
//
// Selection keeps windows whose confidence is strictly above a threshold.
// One survivor is the answer; several survivors are resolved by picking the
// window whose center fraction is nearest a positional prior (0.43 by
// default). With no survivors a fallback policy applies. Every window-based
// prediction is the window's center time.

#include <optional>
#include <string>
#include <string_view>

#include "statecap/model.hpp"
#include "statecap/sampling.hpp"

namespace statecap {

enum class Fallback { kPriorPoint, kArgmaxConfidence };

struct SelectionConfig {
  /// Strict lower bound on candidate confidence. Any finite value is
  /// accepted; values >= 1 disable the filter so the fallback always runs.
  double threshold = 0.7;
  double prior_fraction = 0.43;
  Fallback fallback = Fallback::kPriorPoint;

  /// Throws DomainError for a non-finite threshold or a prior outside [0, 1].
  void validate() const;
};

enum class PredictionSource {
  kSelected,
  kFallbackPrior,
  kFallbackArgmax,
  kBaselineCenter,
  kBaselineFraction,
};

std::string_view to_string(PredictionSource source);
std::optional<PredictionSource> parse_prediction_source(std::string_view text);
std::string_view to_string(Fallback fallback);
std::optional<Fallback> parse_fallback(std::string_view text);

struct PnrPrediction {
  std::string clip_id;
  double time_sec = 0.0;
  /// Nearest frame to time_sec (window centers round half up).
  FrameIndex frame = 0;
  PredictionSource source = PredictionSource::kSelected;

  /// True when the prediction is a window center of the scored series.
  bool window_derived() const noexcept {
    return source == PredictionSource::kSelected || source == PredictionSource::kFallbackArgmax;
  }

  friend bool operator==(const PnrPrediction&, const PnrPrediction&) = default;
};

/// Throws EmptyInputError for an empty series, ValidationError if the series
/// belongs to another clip, BoundsError for windows outside the clip.
PnrPrediction select_pnr(const ScoreSeries& series, const Clip& clip, const SelectionConfig& cfg = {});

/// Always predicts the middle frame, round(0.5 * (n - 1)).
PnrPrediction baseline_center(const Clip& clip);

/// Always predicts fraction_to_frame(f).
PnrPrediction baseline_fraction(const Clip& clip, Fraction f);

/// Smallest |center time - positive frame time| over the dense windows of
/// the clip: the best any window-center predictor can do under that
/// segmentation.
double oracle_error(const PnrAnnotation& ann, const Clip& clip, const WindowingConfig& cfg);

}  // namespace statecap
