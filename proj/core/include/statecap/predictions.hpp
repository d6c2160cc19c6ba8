#pragma once

// Prediction files, one JSON object per line.
//
//   PNR:   {"clip_id":"c0","frame":103,"time_sec":3.4333333333333331,"source":"selected"}
//   OSCC:  {"clip_id":"c0","state_change":true,"prob":0.81}
//
// OSCC lines may omit either field: a bare {"clip_id","prob"} score record
// is classified with prob >= 0.5, so fused OSCC score files can be
// evaluated directly.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "statecap/localization.hpp"

namespace statecap {

struct OsccPrediction {
  std::string clip_id;
  bool state_change = false;
  std::optional<double> prob;

  friend bool operator==(const OsccPrediction&, const OsccPrediction&) = default;
};

std::map<std::string, PnrPrediction> parse_pnr_predictions(std::istream& in);
void emit_pnr_predictions(std::ostream& out, const std::map<std::string, PnrPrediction>& preds);

std::map<std::string, OsccPrediction> parse_oscc_predictions(std::istream& in);
void emit_oscc_predictions(std::ostream& out, const std::map<std::string, OsccPrediction>& preds);

}  // namespace statecap
