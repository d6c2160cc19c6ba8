#pragma once

// Annotation and score files, plus the dataset statistics behind the
// positive/negative PNR position plots.
//
// Both formats are line-oriented JSON: one object per line, blank lines
// ignored, unknown fields rejected.
//
//   annotations:
//     {"clip_id":"c0","fps":30.0,"num_frames":240,"state_change":true,
//      "pnr_frame":103,"other_pnr_frames":[12,200]}
//     (state_change, pnr_frame and other_pnr_frames are optional; other
//      frames require pnr_frame)
//
//   PNR scores:   {"clip_id":"c0","start":0,"end":32,"confidence":0.91}
//   OSCC scores:  {"clip_id":"c0","prob":0.73}

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "statecap/model.hpp"

namespace statecap {

struct Dataset {
  std::map<std::string, Clip> clips;
  std::map<std::string, PnrAnnotation> pnr;
  std::map<std::string, OsccAnnotation> oscc;

  /// Throws ValidationError for an unknown clip id.
  const Clip& clip(const std::string& clip_id) const;

  /// Adds a clip with optional annotations after validating them.
  /// Throws ConflictError if the clip id already exists.
  void add(Clip clip, std::optional<PnrAnnotation> pnr = std::nullopt,
           std::optional<OsccAnnotation> oscc = std::nullopt);

  /// Re-checks every cross-reference and bound.
  void validate() const;

  std::size_t size() const noexcept { return clips.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

Dataset parse_annotations(std::istream& in);
/// One record per clip in clip_id order. Byte-stable.
void emit_annotations(std::ostream& out, const Dataset& ds);

/// PNR score records grouped by clip, each series sorted by (start, end).
/// OSCC records in the stream are a ParseError.
std::map<std::string, ScoreSeries> parse_scores(std::istream& in);
/// OSCC probability records. PNR records or repeated clip ids are errors.
std::map<std::string, double> parse_oscc_scores(std::istream& in);

void emit_scores(std::ostream& out, const std::map<std::string, ScoreSeries>& scores);
void emit_oscc_scores(std::ostream& out, const std::map<std::string, double>& probs);

struct PnrCountStats {
  std::size_t n_clips = 0;
  double mean = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
};

/// PNR frames per annotated clip: 1 positive + the negatives.
/// Throws EmptyInputError when no clip carries a PNR annotation.
PnrCountStats pnr_count_stats(const Dataset& ds);

struct PositionHistogram {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;

  std::size_t bins() const noexcept { return positive.size(); }
  double bin_lo(std::size_t k) const noexcept { return static_cast<double>(k) / bins(); }
  double bin_hi(std::size_t k) const noexcept { return static_cast<double>(k + 1) / bins(); }
};

/// Throws DomainError for bins < 1.
PositionHistogram position_histogram(const Dataset& ds, int bins);

}  // namespace statecap
