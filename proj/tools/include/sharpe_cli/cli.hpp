#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sharpe::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
  kInternal = 4,
};

/// Everything a subcommand needs, after flags, config file and defaults are merged.
struct RunConfig {
  std::string command;

  // distribution / simulation
  std::string family = "student";
  double mu = 1.45e-4;
  double sigma = 1.73e-2;
  double nu = 3.0;
  std::size_t T = 252;
  std::size_t N = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 0;

  // sources other than simulation
  std::string input;                ///< existing sample-set file
  std::vector<std::string> prices;  ///< price CSV files or directories
  std::string riskfree;
  std::string policy = "rolling_block";
  std::size_t window = 252;
  std::size_t min_length = 200;
  std::string label = "panel";

  // analysis
  std::size_t bins = 100;
  double hist_lo = -4.0;
  double hist_hi = 4.0;
  std::size_t points = 101;
  double grid_quantile = 0.9999;
  std::size_t min_tail = 10;
  std::size_t min_count = 50;
  std::optional<double> tolerance;
  double top_fraction = 0.001;
  double tail_quantile = 0.001;
  std::vector<double> thresholds = {1.0, 2.0, 3.0};

  // output
  std::string out_dir = ".";
  std::string prefix;
  std::string format = "csv";
};

/// Throws sharpe::ValidationError on the first violated precondition.
void validate(const RunConfig& config);

/// Resolved configuration as compact JSON (execution-only fields omitted).
std::string config_json(const RunConfig& config);

/// Entry point. `args[0]` is the program name. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sharpe::cli
