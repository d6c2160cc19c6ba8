#include "statecap/predictions.hpp"

#include <istream>
#include <ostream>

#include "jsonl.hpp"
#include "statecap/errors.hpp"
#include "statecap/fusion.hpp"

namespace statecap {

using detail::Json;

std::map<std::string, PnrPrediction> parse_pnr_predictions(std::istream& in) {
  std::map<std::string, PnrPrediction> out;
  detail::for_each_record(in, [&](std::size_t line_no, const Json& rec) {
    detail::require_known_fields(line_no, rec, {"clip_id", "frame", "time_sec", "source"});
    PnrPrediction p;
    p.clip_id = detail::get_string(line_no, rec, "clip_id");
    p.frame = detail::get_integer_field(line_no, rec, "frame");
    p.time_sec = detail::get_number_field(line_no, rec, "time_sec");
    const std::string source = detail::get_string(line_no, rec, "source");
    auto parsed = parse_prediction_source(source);
    if (!parsed) throw ParseError(line_no, "unknown prediction source '" + source + "'");
    p.source = *parsed;
    if (!(p.time_sec >= 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": negative time_sec");
    const std::string id = p.clip_id;
    if (!out.emplace(id, std::move(p)).second) {
      throw ConflictError("line " + std::to_string(line_no) + ": duplicate clip_id '" + id + "'");
    }
  });
  return out;
}

void emit_pnr_predictions(std::ostream& out, const std::map<std::string, PnrPrediction>& preds) {
  for (const auto& [id, p] : preds) {
    Json rec;
    rec["clip_id"] = id;
    rec["frame"] = p.frame;
    rec["time_sec"] = p.time_sec;
    rec["source"] = std::string(to_string(p.source));
    detail::write_record(out, rec);
  }
}

std::map<std::string, OsccPrediction> parse_oscc_predictions(std::istream& in) {
  std::map<std::string, OsccPrediction> out;
  detail::for_each_record(in, [&](std::size_t line_no, const Json& rec) {
    detail::require_known_fields(line_no, rec, {"clip_id", "state_change", "prob"});
    OsccPrediction p;
    p.clip_id = detail::get_string(line_no, rec, "clip_id");
    if (auto it = rec.find("prob"); it != rec.end()) {
      const double v = detail::get_number(line_no, *it, "prob");
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("line " + std::to_string(line_no) + ": prob outside [0, 1]");
      }
      p.prob = v;
    }
    if (auto it = rec.find("state_change"); it != rec.end()) {
      p.state_change = detail::get_bool(line_no, *it, "state_change");
    } else if (p.prob) {
      p.state_change = oscc_positive(*p.prob);
    } else {
      throw ParseError(line_no, "OSCC prediction needs 'state_change' or 'prob'");
    }
    const std::string id = p.clip_id;
    if (!out.emplace(id, std::move(p)).second) {
      throw ConflictError("line " + std::to_string(line_no) + ": duplicate clip_id '" + id + "'");
    }
  });
  return out;
}

void emit_oscc_predictions(std::ostream& out, const std::map<std::string, OsccPrediction>& preds) {
  for (const auto& [id, p] : preds) {
    Json rec;
    rec["clip_id"] = id;
    rec["state_change"] = p.state_change;
    if (p.prob) rec["prob"] = *p.prob;
    detail::write_record(out, rec);
  }
}

}  // namespace statecap
