#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sharpe/montecarlo.hpp"
#include "sharpe/statistics.hpp"

namespace sharpe {

/// Adjusted close prices of one instrument.
struct PriceSeries {
  std::string label;
  std::vector<Date> dates;    ///< strictly increasing
  std::vector<double> prices; ///< strictly positive

  [[nodiscard]] std::size_t size() const { return prices.size(); }
  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

/// Annualized riskfree yields as a step function of date.
struct RiskfreeCurve {
  std::vector<Date> dates;
  std::vector<double> annual_yields;  ///< fractions, e.g. 0.05 for 5%

  /// Yield in force on `date` (last observation carried forward). Throws
  /// DataError for dates before the first observation.
  [[nodiscard]] double yield_at(Date date) const;
};

/// Log-returns with the date of the later price of each pair.
struct DatedReturns {
  std::vector<Date> dates;
  std::vector<double> values;
};

[[nodiscard]] Date parse_iso_date(std::string_view text);
[[nodiscard]] std::string format_iso_date(Date date);

// CSV readers throw DataError with the 1-based line number of the offending row.

/// Header `date,adjusted_close`.
[[nodiscard]] PriceSeries load_price_csv(std::istream& in, std::string label = {});
/// Label defaults to the file stem.
[[nodiscard]] PriceSeries load_price_file(const std::filesystem::path& path);
void write_price_csv(std::ostream& out, const PriceSeries& prices);

/// Header `date,yield_percent`; yields are stored divided by 100.
[[nodiscard]] RiskfreeCurve load_riskfree_csv(std::istream& in);
[[nodiscard]] RiskfreeCurve load_riskfree_file(const std::filesystem::path& path);

/// r_t = ln(p_t / p_{t-1}) over consecutive observations.
[[nodiscard]] DatedReturns log_returns(const PriceSeries& prices);

/// Per-period log rate ln(1 + y) / periods_per_year for an annual simple yield y.
[[nodiscard]] double periodic_riskfree_rate(double annual_yield,
                                            std::size_t periods_per_year = 252);

/// eta_t = r_t - periodic_riskfree_rate(yield_at(date_t)).
[[nodiscard]] ReturnSeries excess_returns(const DatedReturns& returns, const RiskfreeCurve& riskfree,
                                          std::size_t periods_per_year = 252);

/// calendar_year: one window per calendar year with >= min_length returns
/// (requires dates). rolling_block: consecutive non-overlapping blocks of
/// exactly T returns, remainder discarded.
[[nodiscard]] std::vector<ReturnSeries> windows(const ReturnSeries& series, WindowPolicy policy,
                                                std::size_t periods, std::size_t min_length);

struct WindowingOptions {
  WindowPolicy policy = WindowPolicy::rolling_block;
  std::size_t T = 252;
  std::size_t min_length = 200;
};

struct ManifestEntry {
  std::string path;
  std::string label;
  bool ok = false;
  std::size_t rows = 0;
  std::size_t returns = 0;
  std::size_t windows = 0;
  std::size_t degenerate_windows = 0;  ///< zero-volatility windows left out
  std::string reason;
};

struct LoadManifest {
  std::vector<ManifestEntry> entries;
  [[nodiscard]] std::size_t failures() const;
};

struct PanelResult {
  JointSampleSet set;
  std::vector<double> pooled;  ///< every excess return of every loaded instrument
  double pooled_mean = 0.0;
  double pooled_sd = 0.0;      ///< 1/n normalized
  LoadManifest manifest;
};

/// Loads every price file, converts to excess returns, windows and reduces
/// them. Per-file failures are recorded in the manifest, not thrown; the
/// instruments are merged in label order. Throws DataError when no usable
/// window remains.
[[nodiscard]] PanelResult panel_stats(std::span<const std::filesystem::path> price_files,
                                      const RiskfreeCurve& riskfree,
                                      const WindowingOptions& options,
                                      std::string dataset_label = "panel");

}  // namespace sharpe
