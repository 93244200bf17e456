#include "sharpe/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "sharpe/distributions.hpp"
#include "sharpe/error.hpp"

namespace sharpe {

namespace {

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : values) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

void require_nonempty(std::span<const double> values, const char* what) {
  if (values.empty()) throw ValidationError(std::string(what) + ": empty return series");
}

bool all_equal(std::span<const double> values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

struct Moments {
  double mean;
  double vol;
};

// Compensated mean, then the corrected two-pass variance
//   (sum d^2 - (sum d)^2 / n) / n,   d = x - mean,
// whose second term removes the residual error of the first pass.
Moments moments(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (all_equal(values)) return {values.front(), 0.0};
  const double mean = compensated_sum(values) / n;
  double sum_sq = 0.0;
  double sum_dev = 0.0;
  for (double x : values) {
    const double d = x - mean;
    sum_sq += d * d;
    sum_dev += d;
  }
  const double var = std::max(0.0, (sum_sq - sum_dev * sum_dev / n) / n);
  return {mean, std::sqrt(var)};
}

}  // namespace

double mean_return(std::span<const double> values) {
  require_nonempty(values, "mean_return");
  if (all_equal(values)) return values.front();
  return compensated_sum(values) / static_cast<double>(values.size());
}

double volatility(std::span<const double> values) {
  require_nonempty(values, "volatility");
  return moments(values).vol;
}

double sharpe(std::span<const double> values) { return sample_stats(values).sharpe; }

SampleStats sample_stats(std::span<const double> values) {
  require_nonempty(values, "sharpe");
  const Moments mo = moments(values);
  if (!(mo.vol > 0.0)) {
    throw DegenerateVolatilityError("Sharpe ratio undefined: zero volatility over " +
                                    std::to_string(values.size()) + " returns");
  }
  SampleStats out;
  out.m = mo.mean;
  out.s = mo.vol;
  out.T = values.size();
  out.sharpe = std::sqrt(static_cast<double>(out.T)) * mo.mean / mo.vol;
  out.growth = growth_factor(mo.mean, out.T);
  return out;
}

double growth_factor(double m, std::size_t periods) {
  return std::exp(m * static_cast<double>(periods));
}

double lo_standard_error(double sharpe_value) {
  return std::sqrt(1.0 + 0.5 * sharpe_value * sharpe_value);
}

double lo_asymptotic_density(const DistributionSpec& spec, std::size_t periods, double x) {
  const double center = theoretical_sharpe(spec, periods);
  const double width = lo_standard_error(center);
  const double z = (x - center) / width;
  return std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * std::numbers::pi));
}

double lo_asymptotic_cdf(const DistributionSpec& spec, std::size_t periods, double x) {
  const double center = theoretical_sharpe(spec, periods);
  const double width = lo_standard_error(center);
  return 0.5 * std::erfc(-(x - center) / (width * std::numbers::sqrt2));
}

}  // namespace sharpe
