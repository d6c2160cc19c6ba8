#pragma once

#include <span>

#include "statecap/model.hpp"

namespace statecap {

/// Mean of per-model OSCC probabilities. Throws EmptyInputError for an
/// empty list and ValidationError for values outside [0, 1].
double fuse_oscc(std::span<const double> probs);

/// Decision rule applied to fused OSCC probabilities.
inline bool oscc_positive(double prob) noexcept { return prob >= 0.5; }

/// A score series whose windows are the union of several scorers' windows,
/// ordered by center.
using FusedSeries = ScoreSeries;

/// Aligns series with different window layouts and averages them.
///
/// The evaluation points are the distinct (start, end) windows across all
/// inputs. At each point every series contributes the confidence of its own
/// window whose center is nearest the point's center (ties go to the
/// earlier window); the fused confidence is the mean of the contributions.
/// Series over identical windows therefore reduce to a plain average.
///
/// The result does not depend on the order of `series` or of the windows
/// inside each series. Throws EmptyInputError when no series (or an empty
/// series) is given and ValidationError for mismatched clip ids.
FusedSeries fuse_pnr(std::span<const ScoreSeries> series);

/// As above, additionally checking every window against `clip`.
FusedSeries fuse_pnr(std::span<const ScoreSeries> series, const Clip& clip);

}  // namespace statecap
