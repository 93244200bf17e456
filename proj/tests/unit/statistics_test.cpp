#include "sharpe/statistics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sharpe/distributions.hpp"
#include "sharpe/error.hpp"

namespace sharpe {
namespace {

using Values = std::vector<double>;

TEST(MeanReturnTest, Examples) {
  EXPECT_DOUBLE_EQ(mean_return(Values{1, 2, 3}), 2.0);
  EXPECT_EQ(mean_return(Values(37, 0.1)), 0.1);
  EXPECT_THROW((void)mean_return(Values{}), ValidationError);
}

TEST(MeanReturnTest, ReferenceDrawMatchesNaiveSummation) {
  RandomStream s(42);
  const auto series = sample_returns(DistributionSpec::student(1.45e-4, 1.73e-2, 3.0), 252, s);
  const double m = mean_return(series);
  EXPECT_LT(oracle::relative_error(m, oracle::naive_mean(series.values)), 1e-13);
  // frozen from the naive oracle at this seed
  EXPECT_NEAR(m, 0.00015912567166290724, 1e-17);
}

TEST(VolatilityTest, PopulationNormalization) {
  EXPECT_EQ(volatility(Values{1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(volatility(Values{0, 2}), 1.0);
  EXPECT_DOUBLE_EQ(volatility(Values{0, 0, 3}), std::numbers::sqrt2);
  EXPECT_THROW((void)volatility(Values{}), ValidationError);
}

TEST(SharpeTest, Examples) {
  EXPECT_DOUBLE_EQ(sharpe(Values{0, 2}), std::numbers::sqrt2);
  EXPECT_EQ(sharpe(Values{-1, 1}), 0.0);
  EXPECT_THROW((void)sharpe(Values{5, 5, 5}), DegenerateVolatilityError);
  EXPECT_THROW((void)sharpe(Values{0.1, 0.1, 0.1, 0.1}), DegenerateVolatilityError);
  EXPECT_THROW((void)sharpe(Values{}), ValidationError);
}

TEST(SampleStatsTest, FieldsAgree) {
  const Values xs{0.01, -0.02, 0.03, 0.005};
  const SampleStats st = sample_stats(xs);
  EXPECT_EQ(st.T, 4u);
  EXPECT_DOUBLE_EQ(st.m, mean_return(xs));
  EXPECT_DOUBLE_EQ(st.s, volatility(xs));
  EXPECT_DOUBLE_EQ(st.sharpe, 2.0 * st.m / st.s);
  EXPECT_DOUBLE_EQ(st.growth, std::exp(4.0 * st.m));
}

TEST(GrowthFactorTest, Examples) {
  EXPECT_EQ(growth_factor(0.0, 252), 1.0);
  EXPECT_NEAR(growth_factor(std::numbers::ln2 / 252.0, 252), 2.0, 1e-14);
  // direct exponentiation at two precisions
  const double want_double = std::exp(1.45e-4 * 252.0);
  const long double want_long = std::exp(1.45e-4L * 252.0L);
  EXPECT_NEAR(growth_factor(1.45e-4, 252), want_double, 1e-15);
  EXPECT_NEAR(growth_factor(1.45e-4, 252), static_cast<double>(want_long), 1e-15);
  EXPECT_NEAR(growth_factor(1.45e-4, 252), 1.03722, 1e-5);
}

TEST(LoStandardErrorTest, Examples) {
  EXPECT_EQ(lo_standard_error(0.0), 1.0);
  EXPECT_NEAR(lo_standard_error(0.133), 1.0044, 1e-4);
  EXPECT_NEAR(lo_standard_error(std::numbers::sqrt2), std::numbers::sqrt2, 1e-15);
}

TEST(LoDensityTest, ModeAndParameters) {
  const auto spec = DistributionSpec::gaussian(1.45e-4, 1.73e-2);
  const double center = theoretical_sharpe(spec, 252);
  const double width = lo_standard_error(center);
  EXPECT_NEAR(center, 0.13, 5e-3);
  EXPECT_NEAR(width, 1.00, 5e-3);
  EXPECT_NEAR(lo_asymptotic_density(spec, 252, center), 1.0 / (std::sqrt(2.0 * std::numbers::pi) * width),
              1e-15);
  EXPECT_NEAR(lo_asymptotic_cdf(spec, 252, center), 0.5, 1e-15);
}

TEST(LoDensityTest, IntegratesToOne) {
  const auto spec = DistributionSpec::student(1.45e-4, 1.73e-2, 3.0);
  const double mass =
      oracle::simpson([&](double x) { return lo_asymptotic_density(spec, 252, x); }, -10.0, 10.0, 20000);
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_NEAR(lo_asymptotic_cdf(spec, 252, 10.0) - lo_asymptotic_cdf(spec, 252, -10.0), mass, 1e-6);
}

// Hand-rolled property tests over random series.

class RandomSeries : public ::testing::Test {
 protected:
  Values draw(std::size_t min_len = 2, std::size_t max_len = 50) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::normal_distribution<double> z(1.45e-4, 1.73e-2);
    Values xs(len(gen_));
    for (double& x : xs) x = z(gen_);
    return xs;
  }
  std::mt19937_64 gen_{20240601};
};

TEST_F(RandomSeries, MatchesNaiveOracle) {
  for (int trial = 0; trial < 1000; ++trial) {
    const Values xs = draw();
    ASSERT_LT(oracle::relative_error(mean_return(xs), oracle::naive_mean(xs)), 1e-12);
    ASSERT_LT(oracle::relative_error(volatility(xs), oracle::naive_volatility(xs)), 1e-12);
    ASSERT_LT(oracle::relative_error(sharpe(xs), oracle::naive_sharpe(xs)), 1e-12);
  }
}

TEST_F(RandomSeries, ScaleAndSignInvariance) {
  std::uniform_real_distribution<double> c(0.01, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Values xs = draw();
    const double k = c(gen_);
    Values scaled = xs;
    Values flipped = xs;
    for (double& x : scaled) x *= k;
    for (double& x : flipped) x = -x;
    const double s = sharpe(xs);
    ASSERT_NEAR(sharpe(scaled), s, 1e-11 * std::max(1.0, std::abs(s)));
    ASSERT_NEAR(sharpe(flipped), -s, 1e-11 * std::max(1.0, std::abs(s)));
  }
}

TEST_F(RandomSeries, ShiftCovariance) {
  std::uniform_real_distribution<double> c(-0.05, 0.05);
  for (int trial = 0; trial < 300; ++trial) {
    const Values xs = draw();
    const double k = c(gen_);
    Values shifted = xs;
    for (double& x : shifted) x += k;
    ASSERT_NEAR(mean_return(shifted), mean_return(xs) + k, 1e-15);
    ASSERT_NEAR(volatility(shifted), volatility(xs), 1e-14);
  }
}

TEST_F(RandomSeries, SecondMomentIdentity) {
  for (int trial = 0; trial < 300; ++trial) {
    const Values xs = draw();
    const double m = mean_return(xs);
    const double s = volatility(xs);
    long double sq = 0.0L;
    for (double x : xs) sq += static_cast<long double>(x) * x;
    const double want = static_cast<double>(sq / static_cast<long double>(xs.size()));
    ASSERT_NEAR(s * s + m * m, want, 1e-15 * want + 1e-300);
  }
}

TEST(TheoreticalSharpeScalingTest, ScalesAsSqrtT) {
  const auto spec = DistributionSpec::gaussian(1.45e-4, 1.73e-2);
  const double one = theoretical_sharpe(spec, 1);
  for (std::size_t T : {4u, 252u, 2520u}) {
    EXPECT_NEAR(theoretical_sharpe(spec, T), std::sqrt(static_cast<double>(T)) * one, 1e-15);
  }
}

}  // namespace
}  // namespace sharpe
