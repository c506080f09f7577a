#include "graphemb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "graphemb/error.hpp"

namespace graphemb::stats {

double kolmogorov_pvalue(double d_statistic, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "KS test needs samples");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d_statistic;
  if (lambda < 1e-3) return 1.0;
  // Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

FitResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(Errc::InvalidArgument, "KS test needs samples");
  std::ranges::sort(samples);
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_pvalue(d, samples.size()), samples.size(), 0};
}

FitResult chi_square_binomial(std::span<const std::int64_t> observations, std::size_t trials, double p,
                              double min_expected) {
  if (observations.empty()) throw Error(Errc::InvalidArgument, "chi-square test needs samples");
  std::vector<double> observed(trials + 1, 0.0);
  for (auto x : observations) {
    if (x < 0 || static_cast<std::size_t>(x) > trials) {
      throw Error(Errc::InvalidArgument, "observation outside binomial support");
    }
    observed[static_cast<std::size_t>(x)] += 1.0;
  }
  const boost::math::binomial_distribution<double> binom(static_cast<double>(trials), p);
  const auto n = static_cast<double>(observations.size());

  // Pool adjacent cells left to right, then fold an under-filled tail back.
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (std::size_t v = 0; v <= trials; ++v) {
    obs_acc += observed[v];
    exp_acc += n * boost::math::pdf(binom, static_cast<double>(v));
    if (exp_acc >= min_expected) {
      cells.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(obs_acc, exp_acc);
    } else {
      cells.back().first += obs_acc;
      cells.back().second += exp_acc;
    }
  }
  if (cells.size() < 2) throw Error(Errc::InvalidArgument, "too few samples for a chi-square test");

  double chi2 = 0.0;
  for (auto [o, e] : cells) chi2 += (o - e) * (o - e) / e;
  const std::size_t dof = cells.size() - 1;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return {chi2, boost::math::cdf(boost::math::complement(dist, chi2)), observations.size(), dof};
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw Error(Errc::InvalidArgument, "Wilson interval needs trials");
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace graphemb::stats
