#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphemb/stats.hpp"

using namespace graphemb;

TEST(Stats, MeanVarianceStandardError) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(stats::mean(xs), 2.5);
  EXPECT_DOUBLE_EQ(stats::variance(xs), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats::standard_error(xs), std::sqrt(5.0 / 3.0 / 4.0));
  const std::vector<double> one{7.0};
  EXPECT_EQ(stats::variance(one), 0.0);
}

TEST(Stats, KolmogorovTailValues) {
  // Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2); at lambda = 1.3581 this is 0.05.
  const std::size_t n = 1000000;
  const double lambda = 1.3581;
  const double d = lambda / (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(stats::kolmogorov_pvalue(d, n), 0.05, 1e-4);
  EXPECT_NEAR(stats::kolmogorov_pvalue(0.0, n), 1.0, 1e-12);
  EXPECT_LT(stats::kolmogorov_pvalue(0.5, 1000), 1e-12);
}

TEST(Stats, KsAcceptsMatchingLawAndRejectsShiftedOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(5000);
  for (double& x : xs) x = unit(rng);
  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_TRUE(stats::ks_test(xs, uniform_cdf).passes(0.01));
  for (double& x : xs) x = std::min(1.0, x + 0.05);
  EXPECT_FALSE(stats::ks_test(xs, uniform_cdf).passes(0.01));
}

TEST(Stats, ChiSquareBinomial) {
  std::mt19937_64 rng(9);
  std::binomial_distribution<std::int64_t> fair(16, 0.5);
  std::binomial_distribution<std::int64_t> biased(16, 0.6);
  std::vector<std::int64_t> good(5000);
  std::vector<std::int64_t> bad(5000);
  for (auto& x : good) x = fair(rng);
  for (auto& x : bad) x = biased(rng);
  const auto ok = stats::chi_square_binomial(good, 16, 0.5);
  EXPECT_TRUE(ok.passes(0.01)) << ok.p_value;
  EXPECT_GT(ok.dof, 0u);
  EXPECT_FALSE(stats::chi_square_binomial(bad, 16, 0.5).passes(0.01));
}

TEST(Stats, WilsonInterval) {
  // 8 of 10 at z = 1.96: centre 0.7843, half-width 0.2285 (closed form).
  const auto ci = stats::wilson_interval(8, 10, 1.96);
  const double z2 = 1.96 * 1.96;
  const double centre = (0.8 + z2 / 20) / (1 + z2 / 10);
  const double half = 1.96 * std::sqrt(0.8 * 0.2 / 10 + z2 / 400) / (1 + z2 / 10);
  EXPECT_NEAR(ci.lower, centre - half, 1e-12);
  EXPECT_NEAR(ci.upper, centre + half, 1e-12);
  const auto all = stats::wilson_interval(50, 50);
  EXPECT_DOUBLE_EQ(all.upper, 1.0);
  EXPECT_LT(all.lower, 1.0);
}
