#pragma once

// Metrics: OSCC accuracy, PNR mean absolute temporal error, and PNR error
// broken down by the ground-truth position of the positive frame.
//
// Predictions must cover exactly the annotated clips; anything else is a
// CoverageError rather than a silently smaller denominator.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statecap/ingest.hpp"
#include "statecap/localization.hpp"

namespace statecap {

enum class Task { kOscc, kPnr };

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view text);

struct BinError {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> mean_error;  // empty when count == 0
  std::size_t count = 0;

  double center() const noexcept { return 0.5 * (lo + hi); }
};

struct MetricsReport {
  Task task = Task::kPnr;
  std::size_t n_clips = 0;
  /// Accuracy in [0, 1] for OSCC, mean absolute error in seconds for PNR.
  double headline = 0.0;
  std::vector<BinError> per_bin;
};

MetricsReport oscc_accuracy(const std::map<std::string, bool>& preds, const Dataset& ds);

MetricsReport pnr_mae(const std::map<std::string, PnrPrediction>& preds, const Dataset& ds);

/// Clips binned by positive-frame fraction with the histogram bin rule.
/// Throws DomainError for bins < 1.
std::vector<BinError> per_position_error(const std::map<std::string, PnrPrediction>& preds,
                                         const Dataset& ds, int bins);

/// |prediction - positive frame time| for every annotated clip, in clip order.
std::map<std::string, double> pnr_abs_errors(const std::map<std::string, PnrPrediction>& preds,
                                             const Dataset& ds);

/// Plain-text table for terminals.
void write_report_table(std::ostream& out, const MetricsReport& report);
/// Single JSON object.
void write_report_json(std::ostream& out, const MetricsReport& report);
/// Whitespace-separated columns: bin_center mean_error count. Empty bins
/// print "nan" for the mean.
void write_error_plot_data(std::ostream& out, const std::vector<BinError>& bins);
/// Columns: bin_center positive negative.
void write_histogram_plot_data(std::ostream& out, const PositionHistogram& hist);

}  // namespace statecap
