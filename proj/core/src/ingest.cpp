#include "statecap/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <tuple>
#include <utility>

#include "jsonl.hpp"
#include "statecap/errors.hpp"

namespace statecap {

using detail::Json;

const Clip& Dataset::clip(const std::string& clip_id) const {
  auto it = clips.find(clip_id);
  if (it == clips.end()) throw ValidationError("unknown clip '" + clip_id + "'");
  return it->second;
}

void Dataset::add(Clip c, std::optional<PnrAnnotation> p, std::optional<OsccAnnotation> o) {
  if (clips.count(c.id()) != 0) throw ConflictError("duplicate clip_id '" + c.id() + "'");
  if (p) p->validate(c);
  if (o && o->clip_id != c.id()) {
    throw ValidationError("OSCC annotation for '" + o->clip_id + "' attached to clip '" + c.id() + "'");
  }
  const std::string id = c.id();
  clips.emplace(id, std::move(c));
  if (p) pnr.emplace(id, std::move(*p));
  if (o) oscc.emplace(id, std::move(*o));
}

void Dataset::validate() const {
  for (const auto& [id, c] : clips) {
    if (id != c.id()) throw ValidationError("clip map key '" + id + "' holds clip '" + c.id() + "'");
  }
  for (const auto& [id, ann] : pnr) {
    if (id != ann.clip_id) throw ValidationError("PNR map key '" + id + "' holds '" + ann.clip_id + "'");
    ann.validate(clip(id));
  }
  for (const auto& [id, ann] : oscc) {
    if (id != ann.clip_id) throw ValidationError("OSCC map key '" + id + "' holds '" + ann.clip_id + "'");
    (void)clip(id);
  }
}

Dataset parse_annotations(std::istream& in) {
  Dataset ds;
  detail::for_each_record(in, [&](std::size_t line_no, const Json& rec) {
    detail::require_known_fields(
        line_no, rec, {"clip_id", "fps", "num_frames", "state_change", "pnr_frame", "other_pnr_frames"});
    std::string id = detail::get_string(line_no, rec, "clip_id");
    const double fps = detail::get_number_field(line_no, rec, "fps");
    const FrameIndex num_frames = detail::get_integer_field(line_no, rec, "num_frames");

    std::optional<OsccAnnotation> oscc;
    if (auto it = rec.find("state_change"); it != rec.end()) {
      oscc = OsccAnnotation{id, detail::get_bool(line_no, *it, "state_change")};
    }

    std::optional<PnrAnnotation> pnr;
    if (auto it = rec.find("pnr_frame"); it != rec.end()) {
      pnr = PnrAnnotation{id, detail::get_integer(line_no, *it, "pnr_frame"), {}};
    }
    if (auto it = rec.find("other_pnr_frames"); it != rec.end()) {
      if (!pnr) throw ParseError(line_no, "'other_pnr_frames' requires 'pnr_frame'");
      if (!it->is_array()) throw ParseError(line_no, "field 'other_pnr_frames' must be an array");
      for (const auto& f : *it) pnr->negative_frames.push_back(detail::get_integer(line_no, f, "other_pnr_frames"));
    }

    detail::with_line_context(line_no, [&] { ds.add(Clip(id, fps, num_frames), std::move(pnr), std::move(oscc)); });
  });
  return ds;
}

void emit_annotations(std::ostream& out, const Dataset& ds) {
  for (const auto& [id, c] : ds.clips) {
    Json rec;
    rec["clip_id"] = id;
    rec["fps"] = c.fps();
    rec["num_frames"] = c.num_frames();
    if (auto it = ds.oscc.find(id); it != ds.oscc.end()) rec["state_change"] = it->second.state_change;
    if (auto it = ds.pnr.find(id); it != ds.pnr.end()) {
      rec["pnr_frame"] = it->second.positive_frame;
      rec["other_pnr_frames"] = it->second.negative_frames;
    }
    detail::write_record(out, rec);
  }
}

namespace {

double checked_probability(std::size_t line_no, const Json& rec, const char* name) {
  const double v = detail::get_number_field(line_no, rec, name);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError("line " + std::to_string(line_no) + ": " + name + " " + std::to_string(v) +
                          " outside [0, 1]");
  }
  return v;
}

}  // namespace

std::map<std::string, ScoreSeries> parse_scores(std::istream& in) {
  std::map<std::string, ScoreSeries> out;
  detail::for_each_record(in, [&](std::size_t line_no, const Json& rec) {
    if (rec.contains("prob")) throw ParseError(line_no, "OSCC record ('prob') in a PNR score file");
    detail::require_known_fields(line_no, rec, {"clip_id", "start", "end", "confidence"});
    ScoredWindow sw;
    sw.window.clip_id = detail::get_string(line_no, rec, "clip_id");
    sw.window.start = detail::get_integer_field(line_no, rec, "start");
    sw.window.end = detail::get_integer_field(line_no, rec, "end");
    sw.confidence = checked_probability(line_no, rec, "confidence");
    if (sw.window.start < 0 || sw.window.start >= sw.window.end) {
      throw ValidationError("line " + std::to_string(line_no) + ": window [" + std::to_string(sw.window.start) +
                            ", " + std::to_string(sw.window.end) + ") is empty or negative");
    }
    auto& series = out[sw.window.clip_id];
    series.clip_id = sw.window.clip_id;
    series.windows.push_back(std::move(sw));
  });
  for (auto& [id, series] : out) {
    std::stable_sort(series.windows.begin(), series.windows.end(), [](const ScoredWindow& a, const ScoredWindow& b) {
      return std::tie(a.window.start, a.window.end) < std::tie(b.window.start, b.window.end);
    });
  }
  return out;
}

std::map<std::string, double> parse_oscc_scores(std::istream& in) {
  std::map<std::string, double> out;
  detail::for_each_record(in, [&](std::size_t line_no, const Json& rec) {
    if (rec.contains("confidence")) throw ParseError(line_no, "PNR record ('confidence') in an OSCC score file");
    detail::require_known_fields(line_no, rec, {"clip_id", "prob"});
    std::string id = detail::get_string(line_no, rec, "clip_id");
    const double p = checked_probability(line_no, rec, "prob");
    if (!out.emplace(id, p).second) {
      throw ConflictError("line " + std::to_string(line_no) + ": duplicate clip_id '" + id + "'");
    }
  });
  return out;
}

void emit_scores(std::ostream& out, const std::map<std::string, ScoreSeries>& scores) {
  for (const auto& [id, series] : scores) {
    for (const auto& sw : series.windows) {
      Json rec;
      rec["clip_id"] = id;
      rec["start"] = sw.window.start;
      rec["end"] = sw.window.end;
      rec["confidence"] = sw.confidence;
      detail::write_record(out, rec);
    }
  }
}

void emit_oscc_scores(std::ostream& out, const std::map<std::string, double>& probs) {
  for (const auto& [id, p] : probs) {
    Json rec;
    rec["clip_id"] = id;
    rec["prob"] = p;
    detail::write_record(out, rec);
  }
}

PnrCountStats pnr_count_stats(const Dataset& ds) {
  if (ds.pnr.empty()) throw EmptyInputError("no clip carries a PNR annotation");
  PnrCountStats s;
  s.n_clips = ds.pnr.size();
  s.min = static_cast<std::size_t>(-1);
  std::size_t total = 0;
  for (const auto& [id, ann] : ds.pnr) {
    const std::size_t count = 1 + ann.negative_frames.size();
    total += count;
    s.min = std::min(s.min, count);
    s.max = std::max(s.max, count);
  }
  s.mean = static_cast<double>(total) / static_cast<double>(s.n_clips);
  return s;
}

PositionHistogram position_histogram(const Dataset& ds, int bins) {
  if (bins < 1) throw DomainError("bin count must be >= 1, got " + std::to_string(bins));
  PositionHistogram h;
  h.positive.assign(static_cast<std::size_t>(bins), 0);
  h.negative.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& [id, ann] : ds.pnr) {
    const FrameIndex n = ds.clip(id).num_frames();
    ++h.positive[position_bin(ann.positive_frame, n, bins)];
    for (FrameIndex f : ann.negative_frames) ++h.negative[position_bin(f, n, bins)];
  }
  return h;
}

}  // namespace statecap
