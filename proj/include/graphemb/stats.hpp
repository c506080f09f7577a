#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace graphemb::stats {

struct FitResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t samples = 0;
  /// Degrees of freedom for chi-square; 0 for KS.
  std::size_t dof = 0;

  bool passes(double alpha) const noexcept { return p_value >= alpha; }
};

/// Asymptotic Kolmogorov survival function Q(lambda) with the Stephens
/// correction lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) * D.
double kolmogorov_pvalue(double d_statistic, std::size_t n);

/// One-sample KS test. `samples` is taken by value because it gets sorted.
FitResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Chi-square goodness of fit of integer observations in [0, trials] against
/// Binomial(trials, p). Adjacent cells are pooled until every expected count
/// reaches `min_expected`.
FitResult chi_square_binomial(std::span<const std::int64_t> observations, std::size_t trials, double p,
                              double min_expected = 5.0);

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

struct Interval {
  double lower;
  double upper;
};

/// Wilson score interval for a binomial proportion; z = 1.959964 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

}  // namespace graphemb::stats
