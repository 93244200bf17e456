#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sharpe {

struct DistributionSpec;

using Date = std::chrono::year_month_day;

/// Ordered window of per-period excess log-returns.
///
/// `dates`, when present, has the same length as `values` and carries the
/// observation date of each return (needed for calendar windowing only).
struct ReturnSeries {
  std::vector<double> values;
  std::size_t periods_per_year = 252;
  std::string label;
  std::vector<Date> dates;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] bool empty() const { return values.empty(); }
};

/// Reduction of one window: mean return, volatility, Sharpe ratio, growth.
struct SampleStats {
  double m = 0.0;       ///< mean excess return per period
  double s = 0.0;       ///< volatility per period, 1/T normalized
  std::size_t T = 0;    ///< window length in periods
  double sharpe = 0.0;  ///< sqrt(T) * m / s
  double growth = 1.0;  ///< exp(m * T)

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

// All estimators below take the raw values; the ReturnSeries overloads are
// conveniences. Empty input throws ValidationError.
//
// NOTE: volatility uses the population normalization
//     s^2 = sum((x - m)^2) / T
// and NOT the 1/(T-1) sample variance most finance libraries default to.

[[nodiscard]] double mean_return(std::span<const double> values);
[[nodiscard]] double volatility(std::span<const double> values);
/// Throws DegenerateVolatilityError when every value is equal (s == 0).
[[nodiscard]] double sharpe(std::span<const double> values);
/// m, s, Sharpe and growth in one pass pair. Throws like sharpe().
[[nodiscard]] SampleStats sample_stats(std::span<const double> values);

[[nodiscard]] inline double mean_return(const ReturnSeries& series) {
  return mean_return(series.values);
}
[[nodiscard]] inline double volatility(const ReturnSeries& series) {
  return volatility(series.values);
}
[[nodiscard]] inline double sharpe(const ReturnSeries& series) { return sharpe(series.values); }
[[nodiscard]] inline SampleStats sample_stats(const ReturnSeries& series) {
  return sample_stats(series.values);
}

/// exp(m * T): growth of one unit relative to the riskfree asset.
[[nodiscard]] double growth_factor(double m, std::size_t periods);

/// Asymptotic standard error of the Sharpe estimator for iid returns:
/// sqrt(1 + S^2 / 2).
[[nodiscard]] double lo_standard_error(double sharpe_value);

/// Normal density with mean theoretical_sharpe(spec, T) and standard
/// deviation lo_standard_error of that mean, evaluated at x.
[[nodiscard]] double lo_asymptotic_density(const DistributionSpec& spec, std::size_t periods,
                                           double x);
/// Cumulative distribution matching lo_asymptotic_density.
[[nodiscard]] double lo_asymptotic_cdf(const DistributionSpec& spec, std::size_t periods,
                                       double x);

}  // namespace sharpe
