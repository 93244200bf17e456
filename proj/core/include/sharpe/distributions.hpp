#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "sharpe/random.hpp"
#include "sharpe/statistics.hpp"

namespace sharpe {

enum class Family { gaussian, student };

[[nodiscard]] std::string_view to_string(Family family);
/// Accepts "gaussian"/"normal" and "student"/"t". Throws ValidationError otherwise.
[[nodiscard]] Family parse_family(std::string_view name);

/// Generative model of per-period excess log-returns.
///
/// Both families are parametrized by their exact mean `mu` and standard
/// deviation `sigma`. The Student family draws
///
///     mu + sigma * sqrt((nu - 2) / nu) * xi,   xi ~ t(nu),
///
/// which has variance sigma^2 for any nu > 2, and density tails ~ |x|^-(nu+1).
struct DistributionSpec {
  Family family = Family::gaussian;
  double mu = 0.0;
  double sigma = 1.0;
  std::optional<double> nu;  ///< tail index; set iff family == student

  static DistributionSpec gaussian(double mu, double sigma);
  static DistributionSpec student(double mu, double sigma, double nu);

  /// Throws ValidationError unless sigma > 0 and (student) nu > 2.
  void validate() const;

  /// Scale applied to the standard variate: sigma or sigma*sqrt((nu-2)/nu).
  [[nodiscard]] double scale() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Daily parameters calibrated on a US ETF panel.
inline constexpr double kDefaultMu = 1.45e-4;
inline constexpr double kDefaultSigma = 1.73e-2;
inline constexpr double kDefaultNu = 3.0;
inline constexpr std::size_t kTradingDaysPerYear = 252;

/// Standard normal variate (Marsaglia polar method).
double standard_normal(RandomStream& stream);

/// Gamma(shape, 1) variate, Marsaglia-Tsang squeeze; exact for any shape > 0.
double standard_gamma(double shape, RandomStream& stream);

/// Standard Student-t(nu) variate as z / sqrt(chi2_nu / nu).
double standard_student(double nu, RandomStream& stream);

/// Fills `out` with independent draws from `spec`. Allocation-free.
void draw_returns(const DistributionSpec& spec, std::span<double> out, RandomStream& stream);

/// T independent draws from `spec` as a series with the given label.
[[nodiscard]] ReturnSeries sample_returns(const DistributionSpec& spec, std::size_t periods,
                                          RandomStream& stream);

/// Probability density of the location-scale family at x.
[[nodiscard]] double density(const DistributionSpec& spec, double x);

/// sqrt(T) * mu / sigma.
[[nodiscard]] double theoretical_sharpe(const DistributionSpec& spec, std::size_t periods);

}  // namespace sharpe
