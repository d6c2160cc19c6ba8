#include "statecap/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "statecap/errors.hpp"

namespace statecap {

Clip::Clip(std::string clip_id, double fps, FrameIndex num_frames)
    : id_(std::move(clip_id)), fps_(fps), num_frames_(num_frames) {
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw ValidationError("clip '" + id_ + "': fps must be a positive finite number");
  }
  if (num_frames < 1) {
    throw ValidationError("clip '" + id_ + "': num_frames must be >= 1, got " +
                          std::to_string(num_frames));
  }
}

double Clip::frame_time(FrameIndex frame) const {
  if (!contains(frame)) {
    throw BoundsError("clip '" + id_ + "': frame " + std::to_string(frame) + " outside [0, " +
                      std::to_string(num_frames_) + ")");
  }
  return static_cast<double>(frame) / fps_;
}

Fraction::Fraction(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("fraction must lie in [0, 1], got " + std::to_string(value));
  }
}

void PnrAnnotation::validate(const Clip& clip) const {
  if (clip_id != clip.id()) {
    throw ValidationError("PNR annotation for '" + clip_id + "' checked against clip '" +
                          clip.id() + "'");
  }
  auto check = [&](FrameIndex f, const char* what) {
    if (!clip.contains(f)) {
      throw ValidationError("clip '" + clip_id + "': " + what + " " + std::to_string(f) +
                            " outside [0, " + std::to_string(clip.num_frames()) + ")");
    }
  };
  check(positive_frame, "pnr_frame");
  for (FrameIndex f : negative_frames) {
    check(f, "other_pnr_frame");
    if (f == positive_frame) {
      throw ValidationError("clip '" + clip_id + "': pnr_frame " + std::to_string(f) +
                            " also listed in other_pnr_frames");
    }
  }
}

bool PnrAnnotation::any_pnr_in(FrameIndex start, FrameIndex end) const noexcept {
  auto inside = [&](FrameIndex f) { return f >= start && f < end; };
  return inside(positive_frame) || std::any_of(negative_frames.begin(), negative_frames.end(), inside);
}

void FrameWindow::validate(const Clip& clip) const {
  if (clip_id != clip.id()) {
    throw ValidationError("window of clip '" + clip_id + "' used with clip '" + clip.id() + "'");
  }
  if (start < 0 || start >= end || end > clip.num_frames()) {
    throw BoundsError("clip '" + clip_id + "': window [" + std::to_string(start) + ", " +
                      std::to_string(end) + ") outside [0, " + std::to_string(clip.num_frames()) +
                      ")");
  }
}

Fraction frame_to_fraction(FrameIndex frame, FrameIndex num_frames) {
  if (num_frames < 1 || frame < 0 || frame >= num_frames) {
    throw BoundsError("frame " + std::to_string(frame) + " outside [0, " +
                      std::to_string(num_frames) + ")");
  }
  if (num_frames == 1) return Fraction(0.0);
  return Fraction(static_cast<double>(frame) / static_cast<double>(num_frames - 1));
}

Fraction frame_to_fraction(FrameIndex frame, const Clip& clip) {
  if (!clip.contains(frame)) {
    throw BoundsError("clip '" + clip.id() + "': frame " + std::to_string(frame) +
                      " outside [0, " + std::to_string(clip.num_frames()) + ")");
  }
  return frame_to_fraction(frame, clip.num_frames());
}

FrameIndex fraction_to_frame(Fraction f, FrameIndex num_frames) {
  if (num_frames < 1) {
    throw DomainError("num_frames must be >= 1, got " + std::to_string(num_frames));
  }
  const double scaled = f.value() * static_cast<double>(num_frames - 1);
  const auto frame = static_cast<FrameIndex>(std::floor(scaled + 0.5));
  return std::clamp<FrameIndex>(frame, 0, num_frames - 1);
}

double window_center_time(const FrameWindow& window, const Clip& clip) {
  window.validate(clip);
  return window.center_frame() / clip.fps();
}

double window_center_fraction(const FrameWindow& window, const Clip& clip) {
  window.validate(clip);
  if (clip.num_frames() == 1) return 0.0;
  return window.center_frame() / static_cast<double>(clip.num_frames() - 1);
}

std::size_t position_bin(FrameIndex frame, FrameIndex num_frames, int bins) {
  if (bins < 1) throw DomainError("bin count must be >= 1, got " + std::to_string(bins));
  if (num_frames < 1 || frame < 0 || frame >= num_frames) {
    throw BoundsError("frame " + std::to_string(frame) + " outside [0, " +
                      std::to_string(num_frames) + ")");
  }
  if (num_frames == 1) return 0;
  const FrameIndex bin = frame * bins / (num_frames - 1);
  return static_cast<std::size_t>(std::min<FrameIndex>(bin, bins - 1));
}

}  // namespace statecap
