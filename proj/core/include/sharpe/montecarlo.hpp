#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sharpe/distributions.hpp"
#include "sharpe/statistics.hpp"

namespace sharpe {

/// How a real-data return series is cut into analysis windows.
enum class WindowPolicy { calendar_year, rolling_block };

[[nodiscard]] std::string_view to_string(WindowPolicy policy);
[[nodiscard]] WindowPolicy parse_window_policy(std::string_view name);

struct SimulationProvenance {
  DistributionSpec spec;
  std::size_t T = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimulationProvenance&, const SimulationProvenance&) = default;
};

struct DatasetProvenance {
  std::string label;
  WindowPolicy policy = WindowPolicy::rolling_block;
  std::size_t T = 0;
  std::size_t min_length = 0;

  friend bool operator==(const DatasetProvenance&, const DatasetProvenance&) = default;
};

using Provenance = std::variant<SimulationProvenance, DatasetProvenance>;

/// N window reductions from one source, simulated or real.
struct JointSampleSet {
  std::vector<SampleStats> samples;
  Provenance provenance;

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  [[nodiscard]] bool empty() const { return samples.empty(); }
};

[[nodiscard]] std::vector<double> mean_returns(const JointSampleSet& set);
[[nodiscard]] std::vector<double> volatilities(const JointSampleSet& set);
[[nodiscard]] std::vector<double> sharpes(const JointSampleSet& set);

/// Generates N windows of T returns and reduces each to SampleStats.
///
/// Window i draws from RandomStream(seed).substream(i), so the result is
/// bit-identical for any `workers` value. `workers == 0` uses the hardware
/// concurrency. A zero-volatility window throws DegenerateVolatilityError
/// naming the window.
[[nodiscard]] JointSampleSet simulate_joint(const DistributionSpec& spec, std::size_t periods,
                                            std::size_t count, std::uint64_t seed,
                                            unsigned workers = 0);

/// Fraction of samples with sharpe >= threshold.
[[nodiscard]] double exceedance_fraction(const JointSampleSet& set, double threshold);

[[nodiscard]] double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Equal-width bins. Bins are left-closed, right-open; the last bin is closed.
struct Histogram {
  std::vector<double> edges;         ///< bins + 1 strictly increasing boundaries
  std::vector<std::size_t> counts;   ///< one per bin
  std::size_t total = 0;             ///< sum of counts

  [[nodiscard]] std::size_t bins() const { return counts.size(); }
  /// Count / (total * width): an empirical density.
  [[nodiscard]] double density(std::size_t bin) const;
};

/// Without `range` the bins span the data min/max. With an explicit range,
/// values outside it are clipped into the end bins.
[[nodiscard]] Histogram histogram(std::span<const double> values, std::size_t bins,
                                  std::optional<std::pair<double, double>> range = std::nullopt);

/// Median of s / (sqrt(T) |m|) over the samples whose |m| lies in the top
/// `quantile` fraction. Order one when large |m| is driven by a single jump.
[[nodiscard]] double tail_association(const JointSampleSet& set, double quantile = 0.001);

}  // namespace sharpe
