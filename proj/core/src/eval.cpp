#include "statecap/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "jsonl.hpp"
#include "statecap/errors.hpp"

namespace statecap {

namespace {

template <typename Pred, typename Ann>
void check_coverage(const std::map<std::string, Pred>& preds, const std::map<std::string, Ann>& annotated) {
  std::vector<std::string> missing;
  std::vector<std::string> unexpected;
  for (const auto& [id, ann] : annotated) {
    if (preds.count(id) == 0) missing.push_back(id);
  }
  for (const auto& [id, p] : preds) {
    if (annotated.count(id) == 0) unexpected.push_back(id);
  }
  if (!missing.empty() || !unexpected.empty()) throw CoverageError(std::move(missing), std::move(unexpected));
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

std::string_view to_string(Task task) { return task == Task::kOscc ? "oscc" : "pnr"; }

std::optional<Task> parse_task(std::string_view text) {
  if (text == "oscc") return Task::kOscc;
  if (text == "pnr") return Task::kPnr;
  return std::nullopt;
}

MetricsReport oscc_accuracy(const std::map<std::string, bool>& preds, const Dataset& ds) {
  check_coverage(preds, ds.oscc);
  if (ds.oscc.empty()) throw EmptyInputError("no clip carries an OSCC annotation");
  std::size_t correct = 0;
  for (const auto& [id, ann] : ds.oscc) {
    if (preds.at(id) == ann.state_change) ++correct;
  }
  MetricsReport r;
  r.task = Task::kOscc;
  r.n_clips = ds.oscc.size();
  r.headline = static_cast<double>(correct) / static_cast<double>(r.n_clips);
  return r;
}

std::map<std::string, double> pnr_abs_errors(const std::map<std::string, PnrPrediction>& preds,
                                             const Dataset& ds) {
  check_coverage(preds, ds.pnr);
  std::map<std::string, double> errors;
  for (const auto& [id, ann] : ds.pnr) {
    const Clip& clip = ds.clip(id);
    const PnrPrediction& p = preds.at(id);
    if (p.clip_id != id) throw ValidationError("prediction keyed '" + id + "' names clip '" + p.clip_id + "'");
    errors.emplace(id, std::abs(p.time_sec - clip.frame_time(ann.positive_frame)));
  }
  return errors;
}

MetricsReport pnr_mae(const std::map<std::string, PnrPrediction>& preds, const Dataset& ds) {
  const auto errors = pnr_abs_errors(preds, ds);
  if (errors.empty()) throw EmptyInputError("no clip carries a PNR annotation");
  double sum = 0.0;
  for (const auto& [id, e] : errors) sum += e;
  MetricsReport r;
  r.task = Task::kPnr;
  r.n_clips = errors.size();
  r.headline = sum / static_cast<double>(r.n_clips);
  return r;
}

std::vector<BinError> per_position_error(const std::map<std::string, PnrPrediction>& preds,
                                         const Dataset& ds, int bins) {
  if (bins < 1) throw DomainError("bin count must be >= 1, got " + std::to_string(bins));
  const auto errors = pnr_abs_errors(preds, ds);
  std::vector<double> sums(static_cast<std::size_t>(bins), 0.0);
  std::vector<BinError> out(static_cast<std::size_t>(bins));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].lo = static_cast<double>(k) / bins;
    out[k].hi = static_cast<double>(k + 1) / bins;
  }
  for (const auto& [id, e] : errors) {
    const std::size_t k = position_bin(ds.pnr.at(id).positive_frame, ds.clip(id).num_frames(), bins);
    sums[k] += e;
    ++out[k].count;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k].count > 0) out[k].mean_error = sums[k] / static_cast<double>(out[k].count);
  }
  return out;
}

void write_report_table(std::ostream& out, const MetricsReport& report) {
  out << "task       " << to_string(report.task) << '\n';
  out << "clips      " << report.n_clips << '\n';
  if (report.task == Task::kOscc) {
    out << "accuracy   " << format_double(report.headline * 100.0, 2) << "%\n";
  } else {
    out << "mae_sec    " << format_double(report.headline, 4) << '\n';
  }
  if (report.per_bin.empty()) return;
  out << "\n  fraction range    mean_err_sec   count\n";
  for (const auto& b : report.per_bin) {
    char line[128];
    std::snprintf(line, sizeof line, "  [%.3f, %.3f%c  %12s  %6zu\n", b.lo, b.hi,
                  &b == &report.per_bin.back() ? ']' : ')',
                  b.mean_error ? format_double(*b.mean_error, 4).c_str() : "-", b.count);
    out << line;
  }
}

void write_report_json(std::ostream& out, const MetricsReport& report) {
  detail::Json rec;
  rec["task"] = std::string(to_string(report.task));
  rec["n_clips"] = report.n_clips;
  rec["metric"] = report.task == Task::kOscc ? "accuracy" : "mae_sec";
  rec["headline"] = report.headline;
  if (!report.per_bin.empty()) {
    detail::Json rows = detail::Json::array();
    for (const auto& b : report.per_bin) {
      detail::Json row;
      row["lo"] = b.lo;
      row["hi"] = b.hi;
      row["mean_error"] = b.mean_error ? detail::Json(*b.mean_error) : detail::Json(nullptr);
      row["count"] = b.count;
      rows.push_back(std::move(row));
    }
    rec["per_bin"] = std::move(rows);
  }
  out << rec.dump(2) << '\n';
}

void write_error_plot_data(std::ostream& out, const std::vector<BinError>& bins) {
  out << "# bin_center mean_error_sec count\n";
  for (const auto& b : bins) {
    out << format_double(b.center(), 4) << ' ' << (b.mean_error ? format_double(*b.mean_error, 6) : "nan") << ' '
        << b.count << '\n';
  }
}

void write_histogram_plot_data(std::ostream& out, const PositionHistogram& hist) {
  out << "# bin_center positive negative\n";
  for (std::size_t k = 0; k < hist.bins(); ++k) {
    out << format_double(0.5 * (hist.bin_lo(k) + hist.bin_hi(k)), 4) << ' ' << hist.positive[k] << ' '
        << hist.negative[k] << '\n';
  }
}

}  // namespace statecap
