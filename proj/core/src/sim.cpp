#include "statecap/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>
#include <unordered_map>

#include "random.hpp"
#include "statecap/errors.hpp"

namespace statecap {

namespace {

enum Stream : std::uint64_t { kDatasetStream = 1, kScoreStream = 2, kOsccStream = 3 };

// Rejection sampling from N(mean, sd) restricted to [lo, hi]; falls back to
// the clamped mean if the support holds almost no mass.
double truncated_normal(detail::Rng& rng, double mean, double sd, double lo, double hi) {
  if (sd == 0.0) return std::clamp(mean, lo, hi);
  std::normal_distribution<double> normal(mean, sd);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double x = normal(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mean, lo, hi);
}

std::string clip_name(std::size_t index, std::size_t total) {
  int width = 6;
  for (std::size_t t = total; t >= 1000000; t /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim%0*zu", width, index);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("simulation config: " + what);
}

}  // namespace

void SimConfig::validate() const {
  require(n_clips >= 1, "n_clips must be >= 1");
  require(std::isfinite(fps) && fps > 0.0, "fps must be positive");
  require(duration_min_sec > 0.0 && duration_max_sec >= duration_min_sec && std::isfinite(duration_max_sec),
          "duration range must satisfy 0 < min <= max");
  require(positive_min >= 0.0 && positive_max <= 1.0 && positive_min <= positive_max,
          "positive range must satisfy 0 <= min <= max <= 1");
  require(positive_mean >= 0.0 && positive_mean <= 1.0, "positive_mean must lie in [0, 1]");
  require(std::isfinite(positive_sd) && positive_sd >= 0.0, "positive_sd must be >= 0");
  require(std::isfinite(negatives_lambda) && negatives_lambda >= 0.0, "negatives_lambda must be >= 0");
  require(state_change_rate >= 0.0 && state_change_rate <= 1.0, "state_change_rate must lie in [0, 1]");
}

void ScorerNoiseModel::validate() const {
  require(hit.alpha > 0.0 && hit.beta > 0.0, "hit Beta parameters must be positive");
  require(miss.alpha > 0.0 && miss.beta > 0.0, "miss Beta parameters must be positive");
  require(oscc_flip_prob >= 0.0 && oscc_flip_prob <= 1.0, "oscc_flip_prob must lie in [0, 1]");
}

Dataset gen_dataset(const SimConfig& cfg) {
  cfg.validate();
  Dataset ds;
  for (std::size_t i = 0; i < cfg.n_clips; ++i) {
    detail::Rng rng(detail::derive_seed(cfg.seed, kDatasetStream, i));
    const double duration = cfg.duration_min_sec == cfg.duration_max_sec
                                ? cfg.duration_min_sec
                                : detail::uniform_real(rng, cfg.duration_min_sec, cfg.duration_max_sec);
    const auto n = std::max<FrameIndex>(1, static_cast<FrameIndex>(std::llround(duration * cfg.fps)));
    Clip clip(clip_name(i, cfg.n_clips), cfg.fps, n);

    const double position = cfg.positive_distribution == PositiveDistribution::kUniform
                                ? detail::uniform_real(rng, cfg.positive_min, cfg.positive_max)
                                : truncated_normal(rng, cfg.positive_mean, cfg.positive_sd, cfg.positive_min,
                                                   cfg.positive_max);
    PnrAnnotation pnr{clip.id(), fraction_to_frame(Fraction(std::clamp(position, 0.0, 1.0)), n), {}};

    std::size_t negatives = 0;
    if (cfg.negatives_lambda > 0.0) {
      negatives = static_cast<std::size_t>(std::poisson_distribution<long long>(cfg.negatives_lambda)(rng));
    }
    negatives = std::min<std::size_t>(negatives, static_cast<std::size_t>(n - 1));
    std::set<FrameIndex> taken{pnr.positive_frame};
    while (pnr.negative_frames.size() < negatives) {
      const FrameIndex f = detail::uniform_int<FrameIndex>(rng, 0, n - 1);
      if (taken.insert(f).second) pnr.negative_frames.push_back(f);
    }
    std::sort(pnr.negative_frames.begin(), pnr.negative_frames.end());

    const bool state_change = std::bernoulli_distribution(cfg.state_change_rate)(rng);
    OsccAnnotation oscc{clip.id(), state_change};
    ds.add(std::move(clip), std::move(pnr), std::move(oscc));
  }
  return ds;
}

std::map<std::string, ScoreSeries> simulate_scores(const Dataset& ds, const WindowingConfig& windows,
                                                   const ScorerNoiseModel& noise, std::uint64_t seed) {
  noise.validate();
  windows.validate();
  std::map<std::string, ScoreSeries> out;
  std::uint64_t index = 0;
  for (const auto& [id, clip] : ds.clips) {
    const std::uint64_t clip_index = index++;
    auto ann = ds.pnr.find(id);
    if (ann == ds.pnr.end()) continue;
    detail::Rng rng(detail::derive_seed(seed, kScoreStream, clip_index));
    ScoreSeries series{id, {}};
    std::unordered_map<FrameIndex, double> by_start;
    for (auto& w : dense_windows(clip, windows)) {
      auto [it, fresh] = by_start.try_emplace(w.start, 0.0);
      if (fresh) {
        const BetaParams& p = ann->second.any_pnr_in(w.start, w.end) ? noise.hit : noise.miss;
        it->second = detail::beta_draw(rng, p.alpha, p.beta);
      }
      series.windows.push_back(ScoredWindow{std::move(w), it->second});
    }
    out.emplace(id, std::move(series));
  }
  return out;
}

std::map<std::string, double> simulate_oscc_scores(const Dataset& ds, const ScorerNoiseModel& noise,
                                                   std::uint64_t seed) {
  noise.validate();
  std::map<std::string, double> out;
  std::uint64_t index = 0;
  for (const auto& [id, clip] : ds.clips) {
    const std::uint64_t clip_index = index++;
    auto ann = ds.oscc.find(id);
    if (ann == ds.oscc.end()) continue;
    detail::Rng rng(detail::derive_seed(seed, kOsccStream, clip_index));
    const bool flipped = std::bernoulli_distribution(noise.oscc_flip_prob)(rng);
    const bool predicted = ann->second.state_change != flipped;
    const double u = detail::uniform_real(rng, 0.0, 1.0);
    out.emplace(id, predicted ? 0.5 + 0.5 * u : 0.5 * u);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(std::size_t line_no, std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SimulationPlan parse_simulation_plan(std::istream& in) {
  SimulationPlan plan;
  SimConfig& d = plan.dataset;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto real = [&] { return parse_value<double>(line_no, key, value); };

    if (key == "n_clips") d.n_clips = parse_value<std::size_t>(line_no, key, value);
    else if (key == "fps") d.fps = real();
    else if (key == "duration_min_sec") d.duration_min_sec = real();
    else if (key == "duration_max_sec") d.duration_max_sec = real();
    else if (key == "positive_distribution") {
      if (value == "truncated_normal") d.positive_distribution = PositiveDistribution::kTruncatedNormal;
      else if (value == "uniform") d.positive_distribution = PositiveDistribution::kUniform;
      else throw ParseError(line_no, "positive_distribution must be truncated_normal or uniform");
    }
    else if (key == "positive_mean") d.positive_mean = real();
    else if (key == "positive_sd") d.positive_sd = real();
    else if (key == "positive_min") d.positive_min = real();
    else if (key == "positive_max") d.positive_max = real();
    else if (key == "negatives_lambda") d.negatives_lambda = real();
    else if (key == "state_change_rate") d.state_change_rate = real();
    else if (key == "seed") d.seed = parse_value<std::uint64_t>(line_no, key, value);
    else if (key == "window_length") plan.window_length = parse_value<int>(line_no, key, value);
    else if (key == "scorer_windows") {
      plan.scorer_windows.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        plan.scorer_windows.push_back(parse_value<int>(line_no, key, trim(rest.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (plan.scorer_windows.empty()) throw ParseError(line_no, "scorer_windows must list at least one count");
    }
    else if (key == "hit_alpha") plan.noise.hit.alpha = real();
    else if (key == "hit_beta") plan.noise.hit.beta = real();
    else if (key == "miss_alpha") plan.noise.miss.alpha = real();
    else if (key == "miss_beta") plan.noise.miss.beta = real();
    else if (key == "oscc_flip_prob") plan.noise.oscc_flip_prob = real();
    else throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
  }
  d.validate();
  plan.noise.validate();
  if (plan.window_length < 1) throw ValidationError("simulation config: window_length must be >= 1");
  for (int n : plan.scorer_windows) {
    if (n < 1) throw ValidationError("simulation config: scorer window counts must be >= 1");
  }
  return plan;
}

void emit_simulation_plan(std::ostream& out, const SimulationPlan& plan) {
  const SimConfig& d = plan.dataset;
  out << "n_clips = " << d.n_clips << '\n'
      << "fps = " << format_double(d.fps) << '\n'
      << "duration_min_sec = " << format_double(d.duration_min_sec) << '\n'
      << "duration_max_sec = " << format_double(d.duration_max_sec) << '\n'
      << "positive_distribution = "
      << (d.positive_distribution == PositiveDistribution::kUniform ? "uniform" : "truncated_normal") << '\n'
      << "positive_mean = " << format_double(d.positive_mean) << '\n'
      << "positive_sd = " << format_double(d.positive_sd) << '\n'
      << "positive_min = " << format_double(d.positive_min) << '\n'
      << "positive_max = " << format_double(d.positive_max) << '\n'
      << "negatives_lambda = " << format_double(d.negatives_lambda) << '\n'
      << "state_change_rate = " << format_double(d.state_change_rate) << '\n'
      << "seed = " << d.seed << '\n'
      << "window_length = " << plan.window_length << '\n'
      << "scorer_windows = ";
  for (std::size_t i = 0; i < plan.scorer_windows.size(); ++i) out << (i ? "," : "") << plan.scorer_windows[i];
  out << '\n'
      << "hit_alpha = " << format_double(plan.noise.hit.alpha) << '\n'
      << "hit_beta = " << format_double(plan.noise.hit.beta) << '\n'
      << "miss_alpha = " << format_double(plan.noise.miss.alpha) << '\n'
      << "miss_beta = " << format_double(plan.noise.miss.beta) << '\n'
      << "oscc_flip_prob = " << format_double(plan.noise.oscc_flip_prob) << '\n';
}

}  // namespace statecap
