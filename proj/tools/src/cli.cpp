#include "sharpe_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <utility>

#include "sharpe/conditional.hpp"
#include "sharpe/error.hpp"
#include "sharpe/ingestion.hpp"
#include "sharpe/io.hpp"

namespace sharpe::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kOutDirEnv = "SHARPE_OUT_DIR";

// Output files are rendered in memory first and written together at the end,
// each through a temp-then-rename.
class OutputSet {
 public:
  OutputSet(fs::path dir, std::string prefix) : dir_(std::move(dir)), prefix_(std::move(prefix)) {}

  std::ostringstream& add(const std::string& suffix) {
    files_.emplace_back(dir_ / (prefix_ + "_" + suffix), std::ostringstream{});
    return files_.back().second;
  }

  void commit(std::ostream& out) {
    fs::create_directories(dir_);
    for (auto& [path, buffer] : files_) {
      write_file_atomically(path, buffer.str());
      out << "wrote " << path.string() << '\n';
    }
  }

 private:
  fs::path dir_;
  std::string prefix_;
  std::vector<std::pair<fs::path, std::ostringstream>> files_;
};

DistributionSpec make_spec(const RunConfig& c) {
  const Family family = parse_family(c.family);
  return family == Family::student ? DistributionSpec::student(c.mu, c.sigma, c.nu)
                                   : DistributionSpec::gaussian(c.mu, c.sigma);
}

std::vector<fs::path> expand_price_paths(const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
      }
    } else {
      paths.push_back(p);
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw DataError("no price files found in the given --prices paths");
  return paths;
}

PanelResult load_panel(const RunConfig& c) {
  if (c.riskfree.empty()) throw ValidationError("--riskfree is required with --prices");
  const RiskfreeCurve riskfree = load_riskfree_file(c.riskfree);
  const auto paths = expand_price_paths(c.prices);
  const WindowingOptions options{parse_window_policy(c.policy), c.window, c.min_length};
  return panel_stats(paths, riskfree, options, c.label);
}

enum class SourceKind { simulation, sample_file, panel };

SourceKind source_kind(const RunConfig& c) {
  if (!c.prices.empty()) return SourceKind::panel;
  if (!c.input.empty()) return SourceKind::sample_file;
  return SourceKind::simulation;
}

JointSampleSet acquire_samples(const RunConfig& c) {
  switch (source_kind(c)) {
    case SourceKind::panel:
      return load_panel(c).set;
    case SourceKind::sample_file:
      return read_sample_set_file(c.input);
    case SourceKind::simulation:
      break;
  }
  return simulate_joint(make_spec(c), c.T, c.N, c.seed, c.workers);
}

RunInfo run_info(const RunConfig& c) {
  RunInfo info;
  info.emplace_back("tool", "sharpe_dist " + std::string(library_version()));
  info.emplace_back("command", c.command);
  if (source_kind(c) == SourceKind::simulation) info.emplace_back("seed", std::to_string(c.seed));
  info.emplace_back("config", config_json(c));
  return info;
}

ordered_json run_json(const RunInfo& info) {
  ordered_json obj = ordered_json::object();
  for (const auto& [k, v] : info) obj[k] = k == "config" ? ordered_json::parse(v) : ordered_json(v);
  return obj;
}

std::string output_ext(const RunConfig& c) { return c.format == "json" ? ".json" : ".csv"; }

void write_samples(OutputSet& files, const RunConfig& c, const JointSampleSet& set,
                   const RunInfo& info) {
  auto& os = files.add("samples" + output_ext(c));
  if (c.format == "json") {
    write_sample_set_json(os, set, info);
  } else {
    write_sample_set_csv(os, set, info);
  }
}

ordered_json curve_defaults(const RunConfig& c) {
  ordered_json d;
  d["grid_points"] = c.points;
  d["grid_quantile"] = c.grid_quantile;
  d["grid_min_tail"] = c.min_tail;
  d["min_count"] = c.min_count;
  d["tolerance_rule"] = c.tolerance ? "fixed" : "2 x RMS standard error of used entries";
  d["top_fraction"] = c.top_fraction;
  return d;
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const DistributionSpec spec = make_spec(c);
  const JointSampleSet set = simulate_joint(spec, c.T, c.N, c.seed, c.workers);
  const RunInfo info = run_info(c);
  const auto values = sharpes(set);
  const Histogram hist = histogram(values, c.bins, std::pair{c.hist_lo, c.hist_hi});

  OutputSet files(c.out_dir, c.prefix);
  write_samples(files, c, set, info);
  write_histogram_csv(files.add("sharpe_hist.csv"), hist, info);

  const double center = theoretical_sharpe(spec, c.T);
  RunInfo lo_info = info;
  lo_info.emplace_back("lo_mean", format_double(center));
  lo_info.emplace_back("lo_standard_error", format_double(lo_standard_error(center)));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    const double x = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
    rows.push_back({x, lo_asymptotic_density(spec, c.T, x), hist.density(i)});
  }
  write_table_csv(files.add("lo_density.csv"), {"sharpe", "lo_density", "empirical_density"}, rows,
                  lo_info);
  files.commit(out);

  out << "N=" << set.size() << " T=" << c.T << " mean(S)=" << format_double(mean_return(values))
      << " sd(S)=" << format_double(volatility(values))
      << " theoretical S=" << format_double(center)
      << " Lo dS=" << format_double(lo_standard_error(center)) << '\n';
  return kOk;
}

int cmd_joint(const RunConfig& c, std::ostream& out) {
  const JointSampleSet set = acquire_samples(c);
  const RunInfo info = run_info(c);
  const auto m = mean_returns(set);
  const auto s = volatilities(set);
  const auto S = sharpes(set);
  std::vector<double> abs_m(m.size());
  std::transform(m.begin(), m.end(), abs_m.begin(), [](double x) { return std::abs(x); });

  OutputSet files(c.out_dir, c.prefix);
  std::vector<std::vector<double>> rows;
  rows.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) rows.push_back({m[i], s[i], S[i]});
  write_table_csv(files.add("scatter.csv"), {"m", "s", "sharpe"}, rows, info);

  ordered_json summary;
  summary["schema"] = "sharpe.joint_summary";
  summary["version"] = 1;
  summary["run"] = run_json(info);
  summary["provenance"] = ordered_json::parse(provenance_json(set.provenance));
  summary["N"] = set.size();
  if (set.size() >= 2) {
    auto safe_corr = [](std::span<const double> a, std::span<const double> b) -> ordered_json {
      try {
        return pearson_correlation(a, b);
      } catch (const ValidationError&) {
        return nullptr;
      }
    };
    summary["pearson_m_s"] = safe_corr(m, s);
    summary["pearson_abs_m_s"] = safe_corr(abs_m, s);
    summary["pearson_m_sharpe"] = safe_corr(m, S);
  }
  summary["tail_quantile"] = c.tail_quantile;
  summary["tail_association"] = tail_association(set, c.tail_quantile);
  const ExtremeRanks ranks = extreme_ranks(set);
  summary["max_sharpe_sample_m_rank"] = ranks.max_sharpe_m_rank;
  summary["max_m_sample_sharpe_rank"] = ranks.max_m_sharpe_rank;
  files.add("summary.json") << summary.dump(1) << '\n';
  files.commit(out);

  out << "N=" << set.size();
  if (summary.contains("pearson_m_s")) out << " corr(m,s)=" << summary["pearson_m_s"].dump();
  if (summary.contains("pearson_abs_m_s")) out << " corr(|m|,s)=" << summary["pearson_abs_m_s"].dump();
  out << " tail_association=" << summary["tail_association"].dump() << '\n';
  return kOk;
}

int cmd_conditional(const RunConfig& c, std::ostream& out) {
  const JointSampleSet set = acquire_samples(c);
  const RunInfo info = run_info(c);
  const auto grid = default_threshold_grid(set, c.points, GridOptions{c.grid_quantile, c.min_tail});
  const ConditionalCurve curve = conditional_sharpe(set, grid);

  OutputSet files(c.out_dir, c.prefix);
  auto& curve_out = files.add("curve" + output_ext(c));
  if (c.format == "json") {
    write_curve_json(curve_out, curve, info);
  } else {
    write_curve_csv(curve_out, curve, info);
  }

  ordered_json report;
  report["schema"] = "sharpe.conditional_report";
  report["version"] = 1;
  report["run"] = run_json(info);
  report["defaults"] = curve_defaults(c);
  report["N"] = set.size();

  std::string shape_text = "unclassified";
  try {
    const MonotonicityReport mono = monotonicity_report(curve, c.min_count, c.tolerance);
    shape_text = std::string(to_string(mono.shape));
    report["shape"] = shape_text;
    report["peak_threshold"] = mono.peak.threshold;
    report["peak_value"] = mono.peak.value;
    report["interior_peak"] = mono.interior_peak;
    report["final_value"] = mono.final_value;
    report["tolerance"] = mono.tolerance;
    report["entries_used"] = mono.entries_used;
  } catch (const ValidationError& e) {
    report["shape"] = nullptr;
    report["shape_error"] = e.what();
  }
  report["top_fraction_mean_sharpe"] = top_fraction_mean_sharpe(set, c.top_fraction);
  const ExtremeRanks ranks = extreme_ranks(set);
  report["max_sharpe_sample_m_rank"] = ranks.max_sharpe_m_rank;
  report["max_m_sample_sharpe_rank"] = ranks.max_m_sharpe_rank;
  files.add("report.json") << report.dump(1) << '\n';
  files.commit(out);

  out << "shape=" << shape_text;
  if (report.contains("peak_value")) {
    out << " peak=" << report["peak_value"].dump() << " at m=" << report["peak_threshold"].dump();
  }
  out << " top-fraction mean S=" << report["top_fraction_mean_sharpe"].dump() << '\n';
  return kOk;
}

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  if (c.prices.empty()) throw ValidationError("ingest requires --prices");
  const PanelResult panel = load_panel(c);
  const RunInfo info = run_info(c);

  OutputSet files(c.out_dir, c.prefix);
  write_samples(files, c, panel.set, info);
  write_manifest_json(files.add("manifest.json"), panel.manifest, info);

  if (!(panel.pooled_sd > 0.0)) throw DataError("pooled excess returns have zero dispersion");
  const double span = 10.0 * panel.pooled_sd;
  const Histogram hist = histogram(panel.pooled, c.bins,
                                   std::pair{panel.pooled_mean - span, panel.pooled_mean + span});
  write_histogram_csv(files.add("returns_hist.csv"), hist, info);

  const auto student = DistributionSpec::student(panel.pooled_mean, panel.pooled_sd, c.nu);
  const auto gaussian = DistributionSpec::gaussian(panel.pooled_mean, panel.pooled_sd);
  RunInfo fit_info = info;
  fit_info.emplace_back("pooled_mean", format_double(panel.pooled_mean));
  fit_info.emplace_back("pooled_sd", format_double(panel.pooled_sd));
  fit_info.emplace_back("student_nu", format_double(c.nu));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    const double x = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
    rows.push_back({x, hist.density(i), density(student, x), density(gaussian, x)});
  }
  write_table_csv(files.add("returns_density.csv"),
                  {"eta", "empirical_density", "student_density", "gaussian_density"}, rows, fit_info);

  ordered_json summary;
  summary["schema"] = "sharpe.ingest_summary";
  summary["version"] = 1;
  summary["run"] = run_json(info);
  summary["instruments"] = panel.manifest.entries.size() - panel.manifest.failures();
  summary["failures"] = panel.manifest.failures();
  summary["windows"] = panel.set.size();
  summary["pooled_returns"] = panel.pooled.size();
  summary["pooled_mean"] = panel.pooled_mean;
  summary["pooled_sd"] = panel.pooled_sd;
  files.add("summary.json") << summary.dump(1) << '\n';
  files.commit(out);

  out << "instruments=" << summary["instruments"].dump() << " failures=" << panel.manifest.failures()
      << " windows=" << panel.set.size() << " pooled mean=" << format_double(panel.pooled_mean)
      << " sd=" << format_double(panel.pooled_sd) << '\n';
  return kOk;
}

int cmd_grade(const RunConfig& c, std::ostream& out) {
  const JointSampleSet set = acquire_samples(c);
  const RunInfo info = run_info(c);
  std::vector<std::vector<double>> rows;
  for (double t : c.thresholds) {
    const double fraction = exceedance_fraction(set, t);
    rows.push_back({t, fraction, std::round(fraction * static_cast<double>(set.size()))});
  }
  OutputSet files(c.out_dir, c.prefix);
  write_table_csv(files.add("grades.csv"), {"threshold", "fraction", "count"}, rows, info);
  files.commit(out);
  for (const auto& r : rows) {
    out << "S >= " << format_double(r[0]) << ": " << format_double(r[1]) << '\n';
  }
  return kOk;
}

// --- option wiring ---------------------------------------------------------

void add_model_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--family", c.family, "Return model")
      ->check(CLI::IsMember({"gaussian", "normal", "student", "t"}))
      ->capture_default_str();
  sub.add_option("--mu", c.mu, "Per-period mean excess log-return")->capture_default_str();
  sub.add_option("--sigma", c.sigma, "Per-period standard deviation (> 0)")->capture_default_str();
  sub.add_option("--nu", c.nu, "Student tail index (> 2)")->capture_default_str();
  sub.add_option("--T", c.T, "Periods per window")->capture_default_str();
  sub.add_option("--N", c.N, "Number of simulated windows")->capture_default_str();
  sub.add_option("--seed", c.seed, "Root random seed")->capture_default_str();
  sub.add_option("--workers", c.workers, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
}

void add_source_options(CLI::App& sub, RunConfig& c, bool with_input) {
  if (with_input) sub.add_option("--input", c.input, "Existing sample-set file (.csv or .json)");
  sub.add_option("--prices", c.prices, "Price CSV files or directories of them");
  sub.add_option("--riskfree", c.riskfree, "Riskfree yield CSV (date,yield_percent)");
  sub.add_option("--policy", c.policy, "Windowing policy")
      ->check(CLI::IsMember({"rolling_block", "calendar_year"}))
      ->capture_default_str();
  sub.add_option("--window", c.window, "Window length T for real data")->capture_default_str();
  sub.add_option("--min-length", c.min_length, "Minimum calendar-year window length")
      ->capture_default_str();
  sub.add_option("--label", c.label, "Dataset label recorded in provenance")->capture_default_str();
}

void add_output_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--out-dir", c.out_dir, "Output directory")
      ->envname(kOutDirEnv)
      ->capture_default_str();
  sub.add_option("--prefix", c.prefix, "Output file prefix (default: subcommand name)");
  sub.add_option("--format", c.format, "Sample-set / curve format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

}  // namespace

void validate(const RunConfig& c) {
  const auto source = source_kind(c);
  if (c.command == "simulate" || source == SourceKind::simulation) {
    make_spec(c);  // throws on sigma <= 0, nu <= 2
    if (c.N < 1) throw ValidationError("--N must be >= 1");
    if (c.T < 2) throw ValidationError("--T must be >= 2");
  }
  if (c.command == "simulate") {
    if (c.bins < 1) throw ValidationError("--bins must be >= 1");
    if (!(c.hist_lo < c.hist_hi)) throw ValidationError("--hist-lo must be below --hist-hi");
  }
  if (source == SourceKind::panel || c.command == "ingest") {
    if (c.prices.empty()) throw ValidationError(c.command + " requires --prices");
    if (c.riskfree.empty()) throw ValidationError("--riskfree is required with --prices");
    const auto policy = parse_window_policy(c.policy);
    if (policy == WindowPolicy::rolling_block && c.window < 2) {
      throw ValidationError("--window must be >= 2");
    }
    if (c.min_length > c.window) throw ValidationError("--min-length must not exceed --window");
  }
  if (c.command == "ingest") {
    if (c.bins < 1) throw ValidationError("--bins must be >= 1");
    if (!(c.nu > 2.0)) throw ValidationError("--nu must be > 2");
  }
  if (c.command == "joint" && !(c.tail_quantile > 0.0 && c.tail_quantile <= 0.5)) {
    throw ValidationError("--tail-quantile must lie in (0, 0.5]");
  }
  if (c.command == "conditional") {
    if (c.points < 2) throw ValidationError("--points must be >= 2");
    if (!(c.grid_quantile > 0.0 && c.grid_quantile <= 1.0)) {
      throw ValidationError("--grid-quantile must lie in (0, 1]");
    }
    if (!(c.top_fraction > 0.0 && c.top_fraction <= 1.0)) {
      throw ValidationError("--top-fraction must lie in (0, 1]");
    }
    if (c.tolerance && !(*c.tolerance >= 0.0)) throw ValidationError("--tolerance must be >= 0");
  }
  if (c.command == "grade" && c.thresholds.empty()) {
    throw ValidationError("--thresholds needs at least one value");
  }
  if (c.format != "csv" && c.format != "json") throw ValidationError("--format must be csv or json");
}

std::string config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  switch (source_kind(c)) {
    case SourceKind::simulation:
      j["source"] = "simulation";
      j["family"] = std::string(to_string(parse_family(c.family)));
      j["mu"] = c.mu;
      j["sigma"] = c.sigma;
      if (parse_family(c.family) == Family::student) j["nu"] = c.nu;
      j["T"] = c.T;
      j["N"] = c.N;
      j["seed"] = c.seed;
      break;
    case SourceKind::sample_file:
      j["source"] = "sample_file";
      j["input"] = c.input;
      break;
    case SourceKind::panel:
      j["source"] = "panel";
      j["prices"] = c.prices;
      j["riskfree"] = c.riskfree;
      j["policy"] = c.policy;
      j["window"] = c.window;
      j["min_length"] = c.min_length;
      j["label"] = c.label;
      break;
  }
  if (c.command == "simulate") {
    j["bins"] = c.bins;
    j["hist_range"] = {c.hist_lo, c.hist_hi};
  } else if (c.command == "ingest") {
    j["bins"] = c.bins;
    j["nu"] = c.nu;
  } else if (c.command == "joint") {
    j["tail_quantile"] = c.tail_quantile;
  } else if (c.command == "conditional") {
    j["points"] = c.points;
    j["grid_quantile"] = c.grid_quantile;
    j["min_tail"] = c.min_tail;
    j["min_count"] = c.min_count;
    j["tolerance"] = c.tolerance ? ordered_json(*c.tolerance) : ordered_json(nullptr);
    j["top_fraction"] = c.top_fraction;
  } else if (c.command == "grade") {
    j["thresholds"] = c.thresholds;
  }
  j["format"] = c.format;
  return j.dump();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sampling distribution of mean return, volatility and Sharpe ratio"};
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  app.require_subcommand(1);
  app.set_version_flag("--version", "sharpe_dist " + std::string(library_version()));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sample set, Sharpe histogram, Lo density table");
  add_model_options(*simulate, c);
  simulate->add_option("--bins", c.bins, "Sharpe histogram bins")->capture_default_str();
  simulate->add_option("--hist-lo", c.hist_lo, "Histogram lower edge")->capture_default_str();
  simulate->add_option("--hist-hi", c.hist_hi, "Histogram upper edge")->capture_default_str();
  add_output_options(*simulate, c);

  auto* joint = app.add_subcommand("joint", "(m, s, S) scatter and dependence summary");
  add_model_options(*joint, c);
  add_source_options(*joint, c, true);
  joint->add_option("--tail-quantile", c.tail_quantile, "Top |m| fraction for tail association")
      ->capture_default_str();
  add_output_options(*joint, c);

  auto* conditional = app.add_subcommand("conditional", "Conditional Sharpe curve and shape report");
  add_model_options(*conditional, c);
  add_source_options(*conditional, c, true);
  conditional->add_option("--points", c.points, "Threshold grid points")->capture_default_str();
  conditional->add_option("--grid-quantile", c.grid_quantile, "Upper grid end as a quantile of m")
      ->capture_default_str();
  conditional->add_option("--min-tail", c.min_tail, "Samples kept beyond the last threshold")
      ->capture_default_str();
  conditional->add_option("--min-count", c.min_count, "Noise guard for the shape report")
      ->capture_default_str();
  conditional->add_option("--tolerance", c.tolerance, "Fixed shape tolerance (default: 2 pooled SE)");
  conditional->add_option("--top-fraction", c.top_fraction, "Top-m fraction for the tail mean Sharpe")
      ->capture_default_str();
  add_output_options(*conditional, c);

  auto* ingest = app.add_subcommand("ingest", "Price panel to excess-return windows and pooled returns");
  add_source_options(*ingest, c, false);
  ingest->add_option("--bins", c.bins, "Pooled-return histogram bins")->capture_default_str();
  ingest->add_option("--nu", c.nu, "Tail index of the fitted Student density")->capture_default_str();
  add_output_options(*ingest, c);

  auto* grade = app.add_subcommand("grade", "Fractions of samples with S at or above grading thresholds");
  add_model_options(*grade, c);
  add_source_options(*grade, c, true);
  grade->add_option("--thresholds", c.thresholds, "Sharpe thresholds")->delimiter(',')->capture_default_str();
  add_output_options(*grade, c);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kOk : kUsage;
  }

  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (c.prefix.empty()) c.prefix = c.command;

  try {
    validate(c);
  } catch (const ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (c.command == "simulate") return cmd_simulate(c, out);
    if (c.command == "joint") return cmd_joint(c, out);
    if (c.command == "conditional") return cmd_conditional(c, out);
    if (c.command == "ingest") return cmd_ingest(c, out);
    if (c.command == "grade") return cmd_grade(c, out);
    err << "unknown subcommand\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DegenerateVolatilityError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace sharpe::cli
