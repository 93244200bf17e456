#include "sharpe/distributions.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sharpe/error.hpp"

namespace sharpe {
namespace {

TEST(DistributionSpecTest, RejectsInvalidParameters) {
  EXPECT_THROW(DistributionSpec::gaussian(0.0, 0.0), ValidationError);
  EXPECT_THROW(DistributionSpec::gaussian(0.0, -1.0), ValidationError);
  EXPECT_THROW(DistributionSpec::student(0.0, 1.0, 2.0), ValidationError);
  EXPECT_THROW(DistributionSpec::student(0.0, 1.0, 1.5), ValidationError);
  EXPECT_THROW(DistributionSpec::student(0.0, 1.0, std::nan("")), ValidationError);
  EXPECT_THROW(DistributionSpec::gaussian(std::nan(""), 1.0), ValidationError);

  DistributionSpec missing_nu{Family::student, 0.0, 1.0, std::nullopt};
  EXPECT_THROW(missing_nu.validate(), ValidationError);
  DistributionSpec stray_nu{Family::gaussian, 0.0, 1.0, 3.0};
  EXPECT_THROW(stray_nu.validate(), ValidationError);
}

TEST(DistributionSpecTest, ParsesFamilyNames) {
  EXPECT_EQ(parse_family("gaussian"), Family::gaussian);
  EXPECT_EQ(parse_family("normal"), Family::gaussian);
  EXPECT_EQ(parse_family("student"), Family::student);
  EXPECT_THROW((void)parse_family("cauchy"), ValidationError);
}

TEST(SampleReturnsTest, RejectsZeroLengthAndBadSpec) {
  RandomStream s(1);
  EXPECT_THROW((void)sample_returns(DistributionSpec::gaussian(0, 1), 0, s), ValidationError);
  DistributionSpec bad{Family::gaussian, 0.0, 0.0, std::nullopt};
  EXPECT_THROW((void)sample_returns(bad, 4, s), ValidationError);
}

TEST(SampleReturnsTest, DegenerateScaleCollapsesOntoMean) {
  RandomStream s(3);
  const auto series = sample_returns(DistributionSpec::gaussian(5.0, 1e-12), 4, s);
  ASSERT_EQ(series.size(), 4u);
  for (double x : series.values) EXPECT_NEAR(x, 5.0, 1e-9);
}

TEST(SampleReturnsTest, DefaultConfigurationProducesOneTradingYear) {
  RandomStream s(42);
  const auto series = sample_returns(DistributionSpec::student(1.45e-4, 1.73e-2, 3.0), 252, s);
  EXPECT_EQ(series.size(), 252u);
  for (double x : series.values) EXPECT_TRUE(std::isfinite(x));
}

TEST(SampleReturnsTest, StudentUnitVarianceAtMillionDraws) {
  RandomStream s(42);
  const auto series = sample_returns(DistributionSpec::student(0.0, 1.0, 3.0), 1'000'000, s);
  const double sd = oracle::naive_volatility(series.values);
  EXPECT_GE(sd, 0.99);
  EXPECT_LE(sd, 1.01);
}

TEST(SampleReturnsTest, MomentsConvergeForBothFamilies) {
  constexpr std::size_t n = 1'000'000;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RandomStream gs(seed);
    const auto g = sample_returns(DistributionSpec::gaussian(0.3, 2.0), n, gs);
    // standard errors: sigma/sqrt(n) for the mean, sigma/sqrt(2n) for the sd
    EXPECT_NEAR(static_cast<double>(oracle::naive_mean(g.values)), 0.3, 3.0 * 2.0 / std::sqrt(n));
    EXPECT_NEAR(static_cast<double>(oracle::naive_volatility(g.values)), 2.0, 3.0 * 2.0 / std::sqrt(2.0 * n));

    RandomStream ts(seed);
    const auto t = sample_returns(DistributionSpec::student(0.3, 2.0, 3.0), n, ts);
    EXPECT_NEAR(static_cast<double>(oracle::naive_mean(t.values)), 0.3, 3.0 * 2.0 / std::sqrt(n));
    EXPECT_NEAR(static_cast<double>(oracle::naive_volatility(t.values)), 2.0, 0.05 * 2.0);
  }
}

TEST(SampleReturnsTest, DeterministicForSameSeed) {
  const auto spec = DistributionSpec::student(1e-4, 1e-2, 3.0);
  RandomStream a(99);
  RandomStream b(99);
  const auto x = sample_returns(spec, 500, a);
  const auto y = sample_returns(spec, 500, b);
  EXPECT_EQ(x.values, y.values);
}

TEST(VariateTest, StudentMatchesExactCdf) {
  // KS against the exact t(nu) cdf: the generator must be exact in distribution.
  for (double nu : {3.0, 5.5}) {
    RandomStream s(2024);
    std::vector<double> xs(100000);
    for (double& x : xs) x = standard_student(nu, s);
    const boost::math::students_t_distribution<double> t(nu);
    const double d = oracle::ks_statistic(xs, [&](double x) { return boost::math::cdf(t, x); });
    EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(xs.size()))) << "nu=" << nu;  // p = 0.01
  }
}

TEST(VariateTest, GammaMatchesExactCdfOnBothBranches) {
  for (double shape : {0.4, 1.5, 7.0}) {
    RandomStream s(5);
    std::vector<double> xs(100000);
    for (double& x : xs) x = standard_gamma(shape, s);
    const boost::math::gamma_distribution<double> g(shape);
    const double d = oracle::ks_statistic(xs, [&](double x) { return boost::math::cdf(g, x); });
    EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(xs.size()))) << "shape=" << shape;
  }
  RandomStream s(5);
  EXPECT_THROW((void)standard_gamma(0.0, s), ValidationError);
}

TEST(DensityTest, StandardNormalMode) {
  EXPECT_NEAR(density(DistributionSpec::gaussian(0, 1), 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi),
              1e-15);
}

TEST(DensityTest, UnitVarianceStudentAtZeroIsTwoOverPi) {
  EXPECT_NEAR(density(DistributionSpec::student(0, 1, 3), 0.0), 2.0 / std::numbers::pi, 1e-14);
}

TEST(DensityTest, MatchesRescaledStudentT) {
  const auto spec = DistributionSpec::student(0.2, 1.7, 4.5);
  const double scale = 1.7 * std::sqrt((4.5 - 2.0) / 4.5);
  const boost::math::students_t_distribution<double> t(4.5);
  for (double x : {-30.0, -3.0, -0.5, 0.2, 1.0, 7.0, 100.0}) {
    const double want = boost::math::pdf(t, (x - 0.2) / scale) / scale;
    EXPECT_NEAR(density(spec, x) / want, 1.0, 1e-12) << "x=" << x;
  }
}

TEST(DensityTest, IntegratesToOne) {
  for (const auto& spec : {DistributionSpec::gaussian(0.1, 0.5), DistributionSpec::student(0.1, 0.5, 3.0),
                           DistributionSpec::student(1.45e-4, 1.73e-2, 3.0)}) {
    const double lo = spec.mu - 200.0 * spec.sigma;
    const double hi = spec.mu + 200.0 * spec.sigma;
    const double mass = oracle::simpson([&](double x) { return density(spec, x); }, lo, hi, 400000);
    EXPECT_GE(mass, 0.995);
    EXPECT_LE(mass, 1.0001);
  }
}

TEST(DensityTest, StudentTailDecaysAsPowerNuPlusOne) {
  const auto spec = DistributionSpec::student(0.0, 1.0, 3.0);
  const double reference = density(spec, 100.0) * std::pow(100.0, 4.0);
  EXPECT_GT(reference, 0.0);
  for (double x : {50.0, 75.0, 150.0, 200.0}) {
    for (double sign : {-1.0, 1.0}) {
      const double ratio = density(spec, sign * x) * std::pow(x, 4.0);
      EXPECT_NEAR(ratio / reference, 1.0, 1e-3) << "x=" << sign * x;
    }
  }
}

TEST(DensityTest, LargeNuApproachesGaussian) {
  const auto student = DistributionSpec::student(0.3, 1.2, 1e6);
  const auto gauss = DistributionSpec::gaussian(0.3, 1.2);
  for (double z = -5.0; z <= 5.0; z += 0.01) {
    const double x = 0.3 + z * 1.2;
    ASSERT_LT(std::abs(density(student, x) - density(gauss, x)), 1e-4) << "x=" << x;
  }
}

TEST(DensityTest, NonNegativeEverywhere) {
  const auto spec = DistributionSpec::student(0.0, 1.0, 2.5);
  for (double x = -1e4; x <= 1e4; x += 7.3) ASSERT_GE(density(spec, x), 0.0);
  EXPECT_THROW((void)density(DistributionSpec{Family::student, 0, 1, 2.0}, 0.0), ValidationError);
}

TEST(TheoreticalSharpeTest, DefaultParameters) {
  const double s = theoretical_sharpe(DistributionSpec::gaussian(1.45e-4, 1.73e-2), 252);
  EXPECT_NEAR(s, 0.133, 5e-4);
  EXPECT_NEAR(s, std::sqrt(252.0) * 1.45e-4 / 1.73e-2, 1e-15);
}

TEST(TheoreticalSharpeTest, AlgebraicIdentities) {
  EXPECT_EQ(theoretical_sharpe(DistributionSpec::gaussian(0.0, 3.0), 17), 0.0);
  for (std::size_t T : {1u, 2u, 252u, 1000u}) {
    const double sigma = 0.37;
    const auto spec = DistributionSpec::student(sigma / std::sqrt(static_cast<double>(T)), sigma, 4.0);
    EXPECT_NEAR(theoretical_sharpe(spec, T), 1.0, 1e-14);
  }
  EXPECT_THROW((void)theoretical_sharpe(DistributionSpec::gaussian(0, 1), 0), ValidationError);
}

}  // namespace
}  // namespace sharpe
