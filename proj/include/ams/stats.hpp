#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ams::stats {

// Statistical support for the experiment harness: summary moments, binomial
// intervals, weighted line fits, chi-square and Kolmogorov-Smirnov tests,
// and the deterministic replication fan-out.

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
};

MeanVar mean_var(std::span<const double> xs);

/// Wilson score interval for a binomial proportion.
struct Interval {
  double lo = 0.0, hi = 0.0;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// Weighted least squares fit y ~ intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                            std::span<const double> w);

/// Chi-square goodness of fit of observed counts against expected counts,
/// pooling bins from both tails until every expected count reaches
/// `min_expected`. Returns the statistic, degrees of freedom (bins - 1),
/// and the p-value.
struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};
GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected,
                         double min_expected = 5.0);

/// Poisson pmf/cdf (stable for large mean).
double poisson_pmf(std::uint64_t j, double mean);
double poisson_cdf(std::uint64_t j, double mean);

double normal_cdf(double x);

/// One-sample KS: sup |F_emp - cdf| over the sample, plus the asymptotic
/// p-value. The sample is sorted in place.
struct KsResult {
  double distance = 0.0;
  double p_value = 0.0;
};
KsResult ks_test(std::vector<double>& sample,
                 const std::function<double(double)>& cdf);

/// Two-sample KS with the asymptotic p-value at effective size n1*n2/(n1+n2).
KsResult ks_two_sample(std::vector<double>& a, std::vector<double>& b);

/// Upper tail of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_q(double x);

/// Regularized upper incomplete gamma Q(s, x) (chi-square survival uses
/// Q(dof/2, stat/2)).
double gamma_q(double s, double x);

/// Deterministic fan-out: fn(i) for i in [0, count), partitioned statically
/// over `workers` threads (0 = hardware concurrency). Each index must write
/// only to its own slots; results are then reduced in index order by the
/// caller, so totals do not depend on the worker count.
void parallel_for_index(std::uint64_t count, unsigned workers,
                        const std::function<void(std::uint64_t)>& fn);

}  // namespace ams::stats
