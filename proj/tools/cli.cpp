#include "cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "statecap/statecap.hpp"

namespace statecap::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// A problem with a named input or output; reported as one line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string out;
};

using Writer = std::function<void(std::ostream&)>;

template <typename Parse>
auto load(const std::string& path, Parse&& parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return parse(in);
  } catch (const statecap::Error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::absolute(fs::path(path)).parent_path();
  if (!fs::is_directory(parent)) throw InputError("output directory '" + parent.string() + "' does not exist");
  if (fs::is_directory(path)) throw InputError("output path '" + path + "' is a directory");
}

// Writes next to the target and renames, so readers never see a torn file.
void write_atomic(const fs::path& path, const Writer& writer) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot write '" + tmp.string() + "'");
    writer(os);
    os.flush();
    if (!os) throw InputError("write to '" + tmp.string() + "' failed");
    os.close();
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

/// Primary artifact: --out when given, otherwise stdout.
void emit_artifact(const Globals& g, std::ostream& out, const Writer& writer) {
  if (g.out.empty()) {
    writer(out);
  } else {
    write_atomic(g.out, writer);
  }
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

constexpr const char* kAnnotationFormat =
    "Annotation file: one JSON object per line, e.g.\n"
    "  {\"clip_id\":\"c0\",\"fps\":30.0,\"num_frames\":240,\"state_change\":true,"
    "\"pnr_frame\":103,\"other_pnr_frames\":[12,200]}\n"
    "state_change, pnr_frame and other_pnr_frames are optional.\n";

constexpr const char* kScoreFormat =
    "PNR score file: {\"clip_id\":\"c0\",\"start\":0,\"end\":32,\"confidence\":0.91} per line.\n"
    "OSCC score file: {\"clip_id\":\"c0\",\"prob\":0.73} per line.\n";

constexpr const char* kPredictionFormat =
    "PNR predictions: {\"clip_id\":\"c0\",\"frame\":103,\"time_sec\":3.43,\"source\":\"selected\"} per line.\n"
    "OSCC predictions: {\"clip_id\":\"c0\",\"state_change\":true} or {\"clip_id\":\"c0\",\"prob\":0.8}.\n";

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string annotations;
  int bins = 10;
  std::string plot_data;
};

void run_stats(const StatsArgs& a, const Globals& g, std::ostream& out) {
  check_output_path(a.plot_data);
  const Dataset ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });
  const PnrCountStats stats = pnr_count_stats(ds);
  const PositionHistogram hist = position_histogram(ds, a.bins);

  if (!g.quiet) {
    out << "clips with PNR     " << stats.n_clips << '\n'
        << "PNR frames/clip    mean " << fixed(stats.mean, 4) << "  min " << stats.min << "  max " << stats.max
        << '\n'
        << "\n  fraction range    positive  negative\n";
    for (std::size_t k = 0; k < hist.bins(); ++k) {
      char line[128];
      std::snprintf(line, sizeof line, "  [%.3f, %.3f%c  %8zu  %8zu\n", hist.bin_lo(k), hist.bin_hi(k),
                    k + 1 == hist.bins() ? ']' : ')', hist.positive[k], hist.negative[k]);
      out << line;
    }
  }
  if (!g.out.empty()) {
    write_atomic(g.out, [&](std::ostream& os) {
      Json rec;
      rec["n_clips"] = stats.n_clips;
      rec["mean_pnr_per_clip"] = stats.mean;
      rec["min_pnr_per_clip"] = stats.min;
      rec["max_pnr_per_clip"] = stats.max;
      Json rows = Json::array();
      for (std::size_t k = 0; k < hist.bins(); ++k) {
        Json row;
        row["lo"] = hist.bin_lo(k);
        row["hi"] = hist.bin_hi(k);
        row["positive"] = hist.positive[k];
        row["negative"] = hist.negative[k];
        rows.push_back(std::move(row));
      }
      rec["histogram"] = std::move(rows);
      os << rec.dump(2) << '\n';
    });
  }
  if (!a.plot_data.empty()) {
    write_atomic(a.plot_data, [&](std::ostream& os) { write_histogram_plot_data(os, hist); });
  }
}

struct WindowsArgs {
  FrameIndex frames = 0;
  double fps = 30.0;
  WindowingConfig windowing;
};

void run_windows(const WindowsArgs& a, const Globals& g, std::ostream& out) {
  const Clip clip("clip", a.fps, a.frames);
  const auto windows = dense_windows(clip, a.windowing);
  emit_artifact(g, out, [&](std::ostream& os) {
    os << "# k start end center_sec center_fraction\n";
    for (std::size_t k = 0; k < windows.size(); ++k) {
      os << k << ' ' << windows[k].start << ' ' << windows[k].end << ' '
         << fixed(window_center_time(windows[k], clip), 6) << ' '
         << fixed(window_center_fraction(windows[k], clip), 6) << '\n';
    }
  });
}

struct LocalizeArgs {
  std::string scores;
  std::string annotations;
  SelectionConfig selection;
  std::string fallback = "prior-point";
};

void run_localize(const LocalizeArgs& a, const Globals& g, std::ostream& out) {
  SelectionConfig cfg = a.selection;
  auto fb = parse_fallback(a.fallback);
  if (!fb) throw InputError("--fallback must be prior-point or argmax-confidence, got '" + a.fallback + "'");
  cfg.fallback = *fb;
  cfg.validate();

  const Dataset ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });
  const auto scores = load(a.scores, [](std::istream& in) { return parse_scores(in); });

  std::map<std::string, PnrPrediction> preds;
  std::map<PredictionSource, std::size_t> by_source;
  for (const auto& [id, series] : scores) {
    auto it = ds.clips.find(id);
    if (it == ds.clips.end()) throw InputError("'" + a.scores + "': clip '" + id + "' not in '" + a.annotations + "'");
    try {
      auto p = select_pnr(series, it->second, cfg);
      ++by_source[p.source];
      preds.emplace(id, std::move(p));
    } catch (const statecap::Error& e) {
      throw InputError("'" + a.scores + "': " + e.what());
    }
  }
  emit_artifact(g, out, [&](std::ostream& os) { emit_pnr_predictions(os, preds); });
  if (!g.quiet && !g.out.empty()) {
    out << "predicted " << preds.size() << " clips";
    for (const auto& [source, n] : by_source) out << "  " << to_string(source) << '=' << n;
    out << '\n';
  }
}

struct BaselineArgs {
  std::string mode = "fraction";
  double fraction = 0.43;
  std::string annotations;
};

void run_baseline(const BaselineArgs& a, const Globals& g, std::ostream& out) {
  if (a.mode != "center" && a.mode != "fraction") {
    throw InputError("--mode must be center or fraction, got '" + a.mode + "'");
  }
  const Fraction f(a.fraction);
  const Dataset ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });
  std::map<std::string, PnrPrediction> preds;
  for (const auto& [id, ann] : ds.pnr) {
    const Clip& clip = ds.clip(id);
    preds.emplace(id, a.mode == "center" ? baseline_center(clip) : baseline_fraction(clip, f));
  }
  emit_artifact(g, out, [&](std::ostream& os) { emit_pnr_predictions(os, preds); });
  if (!g.quiet && !g.out.empty()) out << "predicted " << preds.size() << " clips (" << a.mode << ")\n";
}

struct OracleArgs {
  std::string annotations;
  WindowingConfig windowing;
};

void run_oracle(const OracleArgs& a, const Globals& g, std::ostream& out) {
  const Dataset ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });
  if (ds.pnr.empty()) throw InputError("'" + a.annotations + "': no clip carries a PNR annotation");
  std::map<std::string, double> errors;
  double sum = 0.0;
  for (const auto& [id, ann] : ds.pnr) {
    const double e = oracle_error(ann, ds.clip(id), a.windowing);
    errors.emplace(id, e);
    sum += e;
  }
  const double mean = sum / static_cast<double>(errors.size());
  if (!g.out.empty()) {
    write_atomic(g.out, [&](std::ostream& os) {
      for (const auto& [id, e] : errors) {
        Json rec;
        rec["clip_id"] = id;
        rec["oracle_error_sec"] = e;
        os << rec.dump() << '\n';
      }
    });
  }
  if (!g.quiet) {
    out << "clips                  " << errors.size() << '\n'
        << "windows                " << a.windowing.count << " x " << a.windowing.length << " frames\n"
        << "mean_oracle_error_sec  " << fixed(mean, 6) << '\n';
  }
}

struct FuseArgs {
  std::string task;
  std::vector<std::string> scores;
  std::string annotations;
};

template <typename Map>
void require_same_clips(const std::vector<std::string>& files, const std::vector<Map>& maps) {
  for (std::size_t i = 1; i < maps.size(); ++i) {
    for (const auto& [id, v] : maps[0]) {
      if (maps[i].count(id) == 0) throw InputError("'" + files[i] + "': missing clip '" + id + "'");
    }
    for (const auto& [id, v] : maps[i]) {
      if (maps[0].count(id) == 0) throw InputError("'" + files[0] + "': missing clip '" + id + "'");
    }
  }
}

void run_fuse(const FuseArgs& a, const Globals& g, std::ostream& out) {
  auto task = parse_task(a.task);
  if (!task) throw InputError("--task must be oscc or pnr, got '" + a.task + "'");
  if (g.out.empty()) throw InputError("fuse requires --out");

  if (*task == Task::kOscc) {
    std::vector<std::map<std::string, double>> inputs;
    for (const auto& f : a.scores) inputs.push_back(load(f, [](std::istream& in) { return parse_oscc_scores(in); }));
    require_same_clips(a.scores, inputs);
    std::map<std::string, double> fused;
    for (const auto& [id, p] : inputs.front()) {
      std::vector<double> probs;
      for (const auto& m : inputs) probs.push_back(m.at(id));
      fused.emplace(id, fuse_oscc(probs));
    }
    write_atomic(g.out, [&](std::ostream& os) { emit_oscc_scores(os, fused); });
    if (!g.quiet) out << "fused " << a.scores.size() << " OSCC score files over " << fused.size() << " clips\n";
    return;
  }

  std::optional<Dataset> ds;
  if (!a.annotations.empty()) ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });
  std::vector<std::map<std::string, ScoreSeries>> inputs;
  for (const auto& f : a.scores) inputs.push_back(load(f, [](std::istream& in) { return parse_scores(in); }));
  require_same_clips(a.scores, inputs);
  std::map<std::string, ScoreSeries> fused;
  for (const auto& [id, s] : inputs.front()) {
    std::vector<ScoreSeries> series;
    for (const auto& m : inputs) series.push_back(m.at(id));
    try {
      fused.emplace(id, ds ? fuse_pnr(series, ds->clip(id)) : fuse_pnr(series));
    } catch (const statecap::Error& e) {
      throw InputError("clip '" + id + "': " + e.what());
    }
  }
  write_atomic(g.out, [&](std::ostream& os) { emit_scores(os, fused); });
  if (!g.quiet) out << "fused " << a.scores.size() << " PNR score files over " << fused.size() << " clips\n";
}

struct EvaluateArgs {
  std::string task;
  std::string preds;
  std::string annotations;
  int bins = 10;
  std::string plot_data;
};

void run_evaluate(const EvaluateArgs& a, const Globals& g, std::ostream& out) {
  auto task = parse_task(a.task);
  if (!task) throw InputError("--task must be oscc or pnr, got '" + a.task + "'");
  if (a.bins < 1) throw InputError("--bins must be >= 1");
  check_output_path(a.plot_data);
  const Dataset ds = load(a.annotations, [](std::istream& in) { return parse_annotations(in); });

  MetricsReport report;
  try {
    if (*task == Task::kOscc) {
      const auto preds = load(a.preds, [](std::istream& in) { return parse_oscc_predictions(in); });
      std::map<std::string, bool> labels;
      for (const auto& [id, p] : preds) labels.emplace(id, p.state_change);
      report = oscc_accuracy(labels, ds);
    } else {
      const auto preds = load(a.preds, [](std::istream& in) { return parse_pnr_predictions(in); });
      report = pnr_mae(preds, ds);
      report.per_bin = per_position_error(preds, ds, a.bins);
    }
  } catch (const CoverageError& e) {
    throw InputError("'" + a.preds + "': " + e.what());
  }

  if (!g.quiet) write_report_table(out, report);
  if (!g.out.empty()) write_atomic(g.out, [&](std::ostream& os) { write_report_json(os, report); });
  if (!a.plot_data.empty()) {
    if (report.per_bin.empty()) throw InputError("--plot-data is only available for --task pnr");
    write_atomic(a.plot_data, [&](std::ostream& os) { write_error_plot_data(os, report.per_bin); });
  }
}

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::size_t> n_clips;
};

void run_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  SimulationPlan plan;
  if (!a.config.empty()) plan = load(a.config, [](std::istream& in) { return parse_simulation_plan(in); });
  if (g.seed) plan.dataset.seed = *g.seed;
  if (a.n_clips) plan.dataset.n_clips = *a.n_clips;
  std::set<int> distinct(plan.scorer_windows.begin(), plan.scorer_windows.end());
  if (distinct.size() != plan.scorer_windows.size()) throw InputError("scorer_windows must not repeat a count");

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (!fs::is_directory(a.out_dir)) throw InputError("cannot create output directory '" + a.out_dir + "'");
  const fs::path dir(a.out_dir);

  const Dataset ds = gen_dataset(plan.dataset);
  write_atomic(dir / "annotations.jsonl", [&](std::ostream& os) { emit_annotations(os, ds); });
  write_atomic(dir / "simulation.conf", [&](std::ostream& os) { emit_simulation_plan(os, plan); });

  for (std::size_t i = 0; i < plan.scorer_windows.size(); ++i) {
    const int n = plan.scorer_windows[i];
    const std::uint64_t scorer_seed = plan.dataset.seed + 1 + i;
    WindowingConfig windowing;
    windowing.count = n;
    windowing.length = plan.window_length;
    const auto scores = simulate_scores(ds, windowing, plan.noise, scorer_seed);
    const auto oscc = simulate_oscc_scores(ds, plan.noise, scorer_seed);
    const std::string suffix = "_n" + std::to_string(n) + ".jsonl";
    write_atomic(dir / ("pnr_scores" + suffix), [&](std::ostream& os) { emit_scores(os, scores); });
    write_atomic(dir / ("oscc_scores" + suffix), [&](std::ostream& os) { emit_oscc_scores(os, oscc); });
  }
  if (!g.quiet) {
    out << "simulated " << ds.size() << " clips, " << plan.scorer_windows.size() << " scorer(s) -> "
        << a.out_dir << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"statecap: PNR localization and state-change evaluation toolkit", "statecap"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (overrides config files)");
  app.add_flag("--quiet,-q", g.quiet, "Suppress human-readable output");
  app.add_option("--out,-o", g.out, "Output file (written atomically)");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "PNR count statistics and position histogram");
  stats_cmd->add_option("--annotations", stats.annotations, "Annotation file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--bins", stats.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  stats_cmd->add_option("--plot-data", stats.plot_data, "Write bin_center positive negative columns");
  stats_cmd->footer(kAnnotationFormat);

  WindowsArgs windows;
  auto* windows_cmd = app.add_subcommand("windows", "Print the dense window layout of a clip");
  windows_cmd->add_option("--frames", windows.frames, "Frames in the clip")->required()->check(CLI::PositiveNumber);
  windows_cmd->add_option("--fps", windows.fps, "Frame rate")->capture_default_str();
  windows_cmd->add_option("--n", windows.windowing.count, "Window count N")->capture_default_str();
  windows_cmd->add_option("--window", windows.windowing.length, "Window length in frames")->capture_default_str();

  LocalizeArgs localize;
  auto* localize_cmd = app.add_subcommand("localize", "Select one PNR per clip from window scores");
  localize_cmd->add_option("--scores", localize.scores, "PNR score file")->required()->check(CLI::ExistingFile);
  localize_cmd->add_option("--annotations", localize.annotations, "Annotation file (clip geometry)")
      ->required()
      ->check(CLI::ExistingFile);
  localize_cmd->add_option("--threshold", localize.selection.threshold, "Strict confidence threshold")
      ->capture_default_str();
  localize_cmd->add_option("--prior", localize.selection.prior_fraction, "Prior fraction for ties")
      ->capture_default_str();
  localize_cmd->add_option("--fallback", localize.fallback, "prior-point | argmax-confidence")->capture_default_str();
  localize_cmd->footer(std::string(kScoreFormat) + kPredictionFormat);

  BaselineArgs baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Fixed-position PNR predictions");
  baseline_cmd->add_option("--mode", baseline.mode, "center | fraction")->capture_default_str();
  baseline_cmd->add_option("--fraction", baseline.fraction, "Fraction for --mode fraction")->capture_default_str();
  baseline_cmd->add_option("--annotations", baseline.annotations, "Annotation file")
      ->required()
      ->check(CLI::ExistingFile);
  baseline_cmd->footer(kPredictionFormat);

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Best achievable error under a dense window layout");
  oracle_cmd->add_option("--annotations", oracle.annotations, "Annotation file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--n", oracle.windowing.count, "Window count N")->capture_default_str();
  oracle_cmd->add_option("--window", oracle.windowing.length, "Window length in frames")->capture_default_str();

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Average score files from several scorers");
  fuse_cmd->add_option("--task", fuse.task, "oscc | pnr")->required();
  fuse_cmd->add_option("--scores", fuse.scores, "Score files")->required()->expected(1, -1)->check(CLI::ExistingFile);
  fuse_cmd->add_option("--annotations", fuse.annotations, "Optional annotations for bounds checks")
      ->check(CLI::ExistingFile);
  fuse_cmd->footer(kScoreFormat);

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "OSCC accuracy or PNR mean absolute error");
  evaluate_cmd->add_option("--task", evaluate.task, "oscc | pnr")->required();
  evaluate_cmd->add_option("--preds", evaluate.preds, "Prediction file")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--annotations", evaluate.annotations, "Annotation file")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--bins", evaluate.bins, "Position bins (pnr)")->capture_default_str();
  evaluate_cmd->add_option("--plot-data", evaluate.plot_data, "Write bin_center mean_error count columns");
  evaluate_cmd->footer(std::string(kPredictionFormat) + kAnnotationFormat);

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset and scorer outputs");
  simulate_cmd->add_option("--config", simulate.config, "key = value simulation config")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "Output directory")->required();
  simulate_cmd->add_option("--n-clips", simulate.n_clips, "Override n_clips");
  simulate_cmd->footer(
      "Writes annotations.jsonl, simulation.conf and, per scorer, pnr_scores_nN.jsonl and "
      "oscc_scores_nN.jsonl.\nConfig keys: n_clips fps duration_min_sec duration_max_sec positive_distribution "
      "positive_mean positive_sd positive_min positive_max negatives_lambda state_change_rate seed "
      "window_length scorer_windows hit_alpha hit_beta miss_alpha miss_beta oscc_flip_prob\n");

  // CLI11 reports a stray word as a missing subcommand; name it instead.
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--seed" || a == "--out" || a == "-o") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "statecap: error: unknown subcommand '" << a << "' (see statecap --help)\n";
      return 2;
    }
    break;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "statecap: error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    check_output_path(g.out);
    if (*stats_cmd) run_stats(stats, g, out);
    else if (*windows_cmd) run_windows(windows, g, out);
    else if (*localize_cmd) run_localize(localize, g, out);
    else if (*baseline_cmd) run_baseline(baseline, g, out);
    else if (*oracle_cmd) run_oracle(oracle, g, out);
    else if (*fuse_cmd) run_fuse(fuse, g, out);
    else if (*evaluate_cmd) run_evaluate(evaluate, g, out);
    else if (*simulate_cmd) run_simulate(simulate, g, out);
  } catch (const std::exception& e) {
    err << "statecap: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace statecap::cli
