#pragma once

// Frame and window samplers.
//
//  - tsn_sample: one frame per equal segment (random in training, segment
//    center in testing) for clip classification.
//  - dense_windows: N overlapping fixed-length windows spread uniformly over
//    the clip, the unit that is scored for PNR localization.
//  - positive_window / negative_windows: balanced training windows that do /
//    do not contain PNR frames.
//
// All samplers are pure; randomness comes only from the explicit seed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "statecap/model.hpp"

namespace statecap {

enum class SamplerMode { kTrainRandom, kTestUniform };

struct SamplerConfig {
  int segments = 32;
  SamplerMode mode = SamplerMode::kTestUniform;
  std::uint64_t seed = 0;
};

struct WindowingConfig {
  int count = 32;   // N
  int length = 32;  // w, frames per window
  int jitter = 8;   // max shift of positive windows, frames

  /// Throws DomainError unless count >= 1, length >= 1, jitter >= 0.
  void validate() const;
};

/// Segment k spans [floor(k*n/M), floor((k+1)*n/M)). Empty segments (M > n)
/// reuse the nearest preceding frame.
std::vector<FrameIndex> tsn_sample(const Clip& clip, const SamplerConfig& cfg);

/// Window k starts at round(k*(n-w)/(N-1)); N == 1 gives [0, w).
/// Throws ClipTooShortError if n < w.
std::vector<FrameWindow> dense_windows(const Clip& clip, const WindowingConfig& cfg);

/// Window of length w centered on the positive frame, shifted by a uniform
/// draw in [-jitter, jitter], then clamped so it stays inside the clip and
/// still contains the positive frame.
FrameWindow positive_window(const PnrAnnotation& ann, const Clip& clip, const WindowingConfig& cfg,
                            std::uint64_t seed);

/// Default `count` for negative_windows: one negative per positive window.
inline constexpr std::size_t kNegativesPerPositive = 1;

/// `count` windows of length w that contain no PNR frame at all, drawn
/// uniformly (with replacement) from the valid start positions.
/// Throws NegativeSpaceEmptyError when no valid start exists.
std::vector<FrameWindow> negative_windows(const PnrAnnotation& ann, const Clip& clip,
                                          const WindowingConfig& cfg, std::size_t count,
                                          std::uint64_t seed);

}  // namespace statecap
