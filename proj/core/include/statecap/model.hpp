#pragma once

// Temporal data model shared by every module: clips, annotations, frame
// windows and the frame/fraction/time coordinate conversions.
//
// Frames are integer indices in [0, num_frames). A fraction is the
// index-based relative position frame / (num_frames - 1), so the first frame
// maps to 0 and the last frame to 1 regardless of the frame rate.

#include <cstdint>
#include <string>
#include <vector>

namespace statecap {

using FrameIndex = std::int64_t;

class Clip {
 public:
  /// Throws ValidationError unless fps > 0 and num_frames >= 1.
  Clip(std::string clip_id, double fps, FrameIndex num_frames);

  const std::string& id() const noexcept { return id_; }
  double fps() const noexcept { return fps_; }
  FrameIndex num_frames() const noexcept { return num_frames_; }
  double duration_sec() const noexcept { return static_cast<double>(num_frames_) / fps_; }

  /// Timestamp of a frame in seconds. Throws BoundsError for frames outside the clip.
  double frame_time(FrameIndex frame) const;
  bool contains(FrameIndex frame) const noexcept { return frame >= 0 && frame < num_frames_; }

  friend bool operator==(const Clip&, const Clip&) = default;

 private:
  std::string id_;
  double fps_;
  FrameIndex num_frames_;
};

/// Relative temporal position in [0, 1].
class Fraction {
 public:
  /// Throws DomainError for values outside [0, 1] (including NaN).
  explicit Fraction(double value);

  double value() const noexcept { return value_; }

  friend bool operator==(const Fraction&, const Fraction&) = default;

 private:
  double value_;
};

/// Ground truth for PNR localization. The positive frame is the clip's own
/// PNR; negatives are PNR frames of overlapping clips that are also visible.
struct PnrAnnotation {
  std::string clip_id;
  FrameIndex positive_frame = 0;
  std::vector<FrameIndex> negative_frames;

  /// Throws ValidationError when a frame is outside `clip` or the positive
  /// frame is repeated among the negatives.
  void validate(const Clip& clip) const;

  /// Whether any PNR frame (positive or negative) lies in [start, end).
  bool any_pnr_in(FrameIndex start, FrameIndex end) const noexcept;

  friend bool operator==(const PnrAnnotation&, const PnrAnnotation&) = default;
};

struct OsccAnnotation {
  std::string clip_id;
  bool state_change = false;

  friend bool operator==(const OsccAnnotation&, const OsccAnnotation&) = default;
};

/// Half-open frame span [start, end).
struct FrameWindow {
  std::string clip_id;
  FrameIndex start = 0;
  FrameIndex end = 0;

  FrameIndex length() const noexcept { return end - start; }
  bool contains(FrameIndex frame) const noexcept { return frame >= start && frame < end; }

  /// Twice the center frame, start + end - 1. Integral, so center
  /// comparisons between windows stay exact.
  FrameIndex center_x2() const noexcept { return start + end - 1; }
  double center_frame() const noexcept { return static_cast<double>(center_x2()) / 2.0; }

  /// Throws BoundsError unless 0 <= start < end <= clip.num_frames(), and
  /// ValidationError if the window belongs to another clip.
  void validate(const Clip& clip) const;

  friend bool operator==(const FrameWindow&, const FrameWindow&) = default;
};

struct ScoredWindow {
  FrameWindow window;
  double confidence = 0.0;

  friend bool operator==(const ScoredWindow&, const ScoredWindow&) = default;
};

/// Scored windows of one clip from one scorer.
struct ScoreSeries {
  std::string clip_id;
  std::vector<ScoredWindow> windows;

  friend bool operator==(const ScoreSeries&, const ScoreSeries&) = default;
};

/// frame / (num_frames - 1), or 0 for single-frame clips.
/// Throws BoundsError if frame is outside [0, num_frames).
Fraction frame_to_fraction(FrameIndex frame, FrameIndex num_frames);
Fraction frame_to_fraction(FrameIndex frame, const Clip& clip);

/// round_half_up(f * (num_frames - 1)).
FrameIndex fraction_to_frame(Fraction f, FrameIndex num_frames);

/// Center time of the window: (start + (length - 1) / 2) / fps.
double window_center_time(const FrameWindow& window, const Clip& clip);

/// Center frame of the window expressed as a fraction of the clip.
double window_center_fraction(const FrameWindow& window, const Clip& clip);

/// Index of the histogram bin holding `frame`. Bin k covers fractions
/// [k/bins, (k+1)/bins); the last bin is right-closed. Exact integer
/// arithmetic, so fractions that land on an edge go to the upper bin.
std::size_t position_bin(FrameIndex frame, FrameIndex num_frames, int bins);

}  // namespace statecap
