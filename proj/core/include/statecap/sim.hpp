#pragma once

// Synthetic datasets and noisy window scorers.
//
// Generated clips follow the PNR statistics of egocentric state-change
// data: the clip's own PNR sits near 0.43 of the clip, PNRs of overlapping
// clips are spread uniformly, and a clip shows 1 + Poisson(lambda) PNR
// frames on average. The simulated scorer only sees whether a window
// contains *some* PNR frame, so it cannot tell the positive from the
// negatives.
//
// Every random draw is keyed by (seed, stream, clip index), so results do
// not depend on evaluation order.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "statecap/ingest.hpp"
#include "statecap/sampling.hpp"

namespace statecap {

enum class PositiveDistribution { kTruncatedNormal, kUniform };

struct SimConfig {
  std::size_t n_clips = 1000;
  double fps = 30.0;
  double duration_min_sec = 5.0;
  double duration_max_sec = 8.0;
  PositiveDistribution positive_distribution = PositiveDistribution::kTruncatedNormal;
  double positive_mean = 0.43;
  double positive_sd = 0.1;
  /// Support of the positive fraction; the normal is truncated to it.
  double positive_min = 0.0;
  double positive_max = 1.0;
  /// Negatives per clip ~ Poisson(lambda); 2.48 gives 3.48 PNR frames per clip.
  double negatives_lambda = 2.48;
  double state_change_rate = 0.5;
  std::uint64_t seed = 0;

  /// Throws ValidationError on a nonsensical configuration.
  void validate() const;
};

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

struct ScorerNoiseModel {
  /// Confidence of windows that contain any PNR frame.
  BetaParams hit{8.0, 2.0};
  /// Confidence of PNR-free windows.
  BetaParams miss{2.0, 8.0};
  /// Probability that a simulated OSCC prediction disagrees with the label.
  double oscc_flip_prob = 0.25;

  void validate() const;
};

Dataset gen_dataset(const SimConfig& cfg);

/// Scores the dense windows of every PNR-annotated clip. Windows with the
/// same geometry receive the same confidence.
std::map<std::string, ScoreSeries> simulate_scores(const Dataset& ds, const WindowingConfig& windows,
                                                   const ScorerNoiseModel& noise, std::uint64_t seed);

/// OSCC probabilities for every OSCC-annotated clip: >= 0.5 iff the
/// (possibly flipped) simulated label is positive.
std::map<std::string, double> simulate_oscc_scores(const Dataset& ds, const ScorerNoiseModel& noise,
                                                   std::uint64_t seed);

/// Everything the `simulate` subcommand needs.
struct SimulationPlan {
  SimConfig dataset;
  ScorerNoiseModel noise;
  int window_length = 32;
  /// One simulated scorer per entry, each with that many dense windows.
  std::vector<int> scorer_windows{32, 16};
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values are ParseErrors. Keys:
///
///   n_clips, fps, duration_min_sec, duration_max_sec,
///   positive_distribution (truncated_normal | uniform), positive_mean,
///   positive_sd, positive_min, positive_max, negatives_lambda,
///   state_change_rate, seed, window_length, scorer_windows (e.g. 32,16),
///   hit_alpha, hit_beta, miss_alpha, miss_beta, oscc_flip_prob
SimulationPlan parse_simulation_plan(std::istream& in);
void emit_simulation_plan(std::ostream& out, const SimulationPlan& plan);

}  // namespace statecap
