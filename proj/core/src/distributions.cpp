#include "sharpe/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sharpe/error.hpp"

namespace sharpe {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::student:
      return "student";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian" || name == "normal") return Family::gaussian;
  if (name == "student" || name == "t") return Family::student;
  throw ValidationError("unknown distribution family '" + std::string(name) +
                        "' (expected gaussian or student)");
}

DistributionSpec DistributionSpec::gaussian(double mu, double sigma) {
  DistributionSpec spec{Family::gaussian, mu, sigma, std::nullopt};
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::student(double mu, double sigma, double nu) {
  DistributionSpec spec{Family::student, mu, sigma, nu};
  spec.validate();
  return spec;
}

void DistributionSpec::validate() const {
  if (!std::isfinite(mu)) throw ValidationError("mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("sigma must be finite and > 0, got " + std::to_string(sigma));
  }
  switch (family) {
    case Family::gaussian:
      if (nu) throw ValidationError("nu is only meaningful for the student family");
      break;
    case Family::student:
      if (!nu) throw ValidationError("student family requires a tail index nu");
      // The (nu-2)/nu variance normalization is undefined at and below 2.
      if (!(*nu > 2.0) || std::isnan(*nu)) {
        throw ValidationError("student tail index nu must be > 2, got " + std::to_string(*nu));
      }
      break;
  }
}

double DistributionSpec::scale() const {
  if (family == Family::student && std::isfinite(*nu)) return sigma * std::sqrt((*nu - 2.0) / *nu);
  return sigma;
}

double standard_normal(RandomStream& stream) {
  // Polar method without caching the second variate: keeps the stream
  // position the only state, so copies of a stream stay in lockstep.
  for (;;) {
    const double u = 2.0 * stream.uniform_open() - 1.0;
    const double v = 2.0 * stream.uniform_open() - 1.0;
    const double r2 = u * u + v * v;
    if (r2 > 0.0 && r2 < 1.0) return u * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

double standard_gamma(double shape, RandomStream& stream) {
  if (!(shape > 0.0)) throw ValidationError("gamma shape must be > 0");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = standard_gamma(shape + 1.0, stream);
    return g * std::pow(stream.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double standard_student(double nu, RandomStream& stream) {
  const double z = standard_normal(stream);
  if (std::isinf(nu)) return z;
  const double chi2 = 2.0 * standard_gamma(0.5 * nu, stream);
  return z / std::sqrt(chi2 / nu);
}

void draw_returns(const DistributionSpec& spec, std::span<double> out, RandomStream& stream) {
  const double scale = spec.scale();
  switch (spec.family) {
    case Family::gaussian:
      for (double& x : out) x = spec.mu + scale * standard_normal(stream);
      break;
    case Family::student: {
      const double nu = *spec.nu;
      for (double& x : out) x = spec.mu + scale * standard_student(nu, stream);
      break;
    }
  }
}

ReturnSeries sample_returns(const DistributionSpec& spec, std::size_t periods,
                            RandomStream& stream) {
  spec.validate();
  if (periods == 0) throw ValidationError("sample_returns requires T >= 1");
  ReturnSeries series;
  series.values.resize(periods);
  draw_returns(spec, series.values, stream);
  series.label = std::string(to_string(spec.family));
  return series;
}

double density(const DistributionSpec& spec, double x) {
  spec.validate();
  const double scale = spec.scale();
  const double z = (x - spec.mu) / scale;
  if (spec.family == Family::gaussian || std::isinf(*spec.nu)) {
    return std::exp(-0.5 * z * z) / (scale * std::sqrt(2.0 * std::numbers::pi));
  }
  const double nu = *spec.nu;
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * std::numbers::pi);
  const double log_kernel = -0.5 * (nu + 1.0) * std::log1p(z * z / nu);
  return std::exp(log_norm + log_kernel) / scale;
}

double theoretical_sharpe(const DistributionSpec& spec, std::size_t periods) {
  spec.validate();
  if (periods == 0) throw ValidationError("theoretical_sharpe requires T >= 1");
  return std::sqrt(static_cast<double>(periods)) * spec.mu / spec.sigma;
}

}  // namespace sharpe
