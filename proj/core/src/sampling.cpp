#include "statecap/sampling.hpp"

#include <algorithm>
#include <string>

#include "random.hpp"
#include "statecap/errors.hpp"

namespace statecap {

namespace {

void require_fits(const Clip& clip, const WindowingConfig& cfg) {
  cfg.validate();
  if (clip.num_frames() < cfg.length) {
    throw ClipTooShortError("clip '" + clip.id() + "' has " + std::to_string(clip.num_frames()) +
                            " frames, window length is " + std::to_string(cfg.length));
  }
}

}  // namespace

void WindowingConfig::validate() const {
  if (count < 1) throw DomainError("window count must be >= 1, got " + std::to_string(count));
  if (length < 1) throw DomainError("window length must be >= 1, got " + std::to_string(length));
  if (jitter < 0) throw DomainError("jitter must be >= 0, got " + std::to_string(jitter));
}

std::vector<FrameIndex> tsn_sample(const Clip& clip, const SamplerConfig& cfg) {
  if (cfg.segments < 1) throw DomainError("segment count must be >= 1, got " + std::to_string(cfg.segments));
  const FrameIndex n = clip.num_frames();
  const FrameIndex m = cfg.segments;
  detail::Rng rng(cfg.seed);

  std::vector<FrameIndex> frames;
  frames.reserve(static_cast<std::size_t>(m));
  for (FrameIndex k = 0; k < m; ++k) {
    const FrameIndex lo = k * n / m;
    const FrameIndex hi = (k + 1) * n / m;
    if (lo == hi) {
      frames.push_back(std::max<FrameIndex>(lo - 1, 0));
    } else if (cfg.mode == SamplerMode::kTrainRandom) {
      frames.push_back(detail::uniform_int<FrameIndex>(rng, lo, hi - 1));
    } else {
      frames.push_back((lo + hi - 1) / 2);
    }
  }
  return frames;
}

std::vector<FrameWindow> dense_windows(const Clip& clip, const WindowingConfig& cfg) {
  require_fits(clip, cfg);
  const FrameIndex slack = clip.num_frames() - cfg.length;
  const FrameIndex gaps = cfg.count - 1;

  std::vector<FrameWindow> windows;
  windows.reserve(static_cast<std::size_t>(cfg.count));
  for (FrameIndex k = 0; k < cfg.count; ++k) {
    // round-half-up of k * slack / gaps in integer arithmetic
    const FrameIndex start = gaps == 0 ? 0 : (2 * k * slack + gaps) / (2 * gaps);
    windows.push_back(FrameWindow{clip.id(), start, start + cfg.length});
  }
  return windows;
}

FrameWindow positive_window(const PnrAnnotation& ann, const Clip& clip, const WindowingConfig& cfg,
                            std::uint64_t seed) {
  require_fits(clip, cfg);
  ann.validate(clip);
  const FrameIndex w = cfg.length;
  const FrameIndex pnr = ann.positive_frame;

  FrameIndex start = pnr - w / 2;
  if (cfg.jitter > 0) {
    detail::Rng rng(seed);
    start += detail::uniform_int<FrameIndex>(rng, -cfg.jitter, cfg.jitter);
  }
  const FrameIndex lowest = std::max<FrameIndex>(0, pnr - w + 1);
  const FrameIndex highest = std::min<FrameIndex>(clip.num_frames() - w, pnr);
  start = std::clamp(start, lowest, highest);
  return FrameWindow{clip.id(), start, start + w};
}

std::vector<FrameWindow> negative_windows(const PnrAnnotation& ann, const Clip& clip,
                                          const WindowingConfig& cfg, std::size_t count,
                                          std::uint64_t seed) {
  require_fits(clip, cfg);
  ann.validate(clip);
  const FrameIndex w = cfg.length;

  // Mark frames that are PNRs, then slide a window over the prefix counts.
  const auto n = static_cast<std::size_t>(clip.num_frames());
  std::vector<int> prefix(n + 1, 0);
  std::vector<char> is_pnr(n, 0);
  is_pnr[static_cast<std::size_t>(ann.positive_frame)] = 1;
  for (FrameIndex f : ann.negative_frames) is_pnr[static_cast<std::size_t>(f)] = 1;
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + is_pnr[i];

  std::vector<FrameIndex> valid_starts;
  for (FrameIndex s = 0; s + w <= clip.num_frames(); ++s) {
    if (prefix[static_cast<std::size_t>(s + w)] == prefix[static_cast<std::size_t>(s)]) {
      valid_starts.push_back(s);
    }
  }
  if (valid_starts.empty()) {
    throw NegativeSpaceEmptyError("clip '" + clip.id() + "': every " + std::to_string(w) +
                                  "-frame window contains a PNR frame");
  }

  detail::Rng rng(seed);
  std::vector<FrameWindow> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto pick = detail::uniform_int<std::size_t>(rng, 0, valid_starts.size() - 1);
    const FrameIndex s = valid_starts[pick];
    out.push_back(FrameWindow{clip.id(), s, s + w});
  }
  return out;
}

}  // namespace statecap
