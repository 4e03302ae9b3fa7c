#include "ams/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <exception>
#include <thread>

#include "ams/errors.hpp"

namespace ams::stats {

MeanVar mean_var(std::span<const double> xs) {
  MeanVar mv;
  mv.count = xs.size();
  if (xs.empty()) return mv;
  double sum = 0.0;
  for (double x : xs) sum += x;
  mv.mean = sum / xs.size();
  if (xs.size() < 2) return mv;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - mv.mean;
    ss += d * d;
  }
  mv.variance = ss / (xs.size() - 1);
  return mv;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z) {
  if (trials == 0) throw domain_error("wilson_interval: no trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

LineFit weighted_linear_fit(std::span<const double> x,
                            std::span<const double> y,
                            std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
    throw domain_error("weighted_linear_fit: need >= 2 matching points");
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (det == 0.0) throw numerical_error("weighted_linear_fit: degenerate design");
  LineFit fit;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  return fit;
}

double gamma_q(double s, double x) { return boost::math::gamma_q(s, x); }

GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected,
                         double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw domain_error("chi_square_gof: size mismatch");
  // pool left to right until each bin's expected count reaches the floor;
  // a short final remainder merges into the previous bin
  std::vector<double> exp_pooled;
  std::vector<double> obs_pooled;
  double ce = 0.0, co = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ce += expected[i];
    co += static_cast<double>(observed[i]);
    if (ce >= min_expected) {
      exp_pooled.push_back(ce);
      obs_pooled.push_back(co);
      ce = co = 0.0;
    }
  }
  if (ce > 0.0 || co > 0.0) {
    if (!exp_pooled.empty()) {
      exp_pooled.back() += ce;
      obs_pooled.back() += co;
    } else {
      exp_pooled.push_back(ce);
      obs_pooled.push_back(co);
    }
  }
  if (exp_pooled.size() < 2)
    throw domain_error("chi_square_gof: too few bins after pooling");

  GofResult res;
  for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
    const double d = obs_pooled[i] - exp_pooled[i];
    res.statistic += d * d / exp_pooled[i];
  }
  res.dof = static_cast<int>(exp_pooled.size()) - 1;
  if (res.dof < 1) res.dof = 1;
  res.p_value = gamma_q(res.dof / 2.0, res.statistic / 2.0);
  return res;
}

double poisson_pmf(std::uint64_t j, double mean) {
  const double jd = static_cast<double>(j);
  return std::exp(jd * std::log(mean) - mean - std::lgamma(jd + 1.0));
}

double poisson_cdf(std::uint64_t j, double mean) {
  // P(J <= j) = Q(j+1, mean)
  return boost::math::gamma_q(static_cast<double>(j) + 1.0, mean);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 101; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_test(std::vector<double>& sample,
                 const std::function<double(double)>& cdf) {
  if (sample.empty()) throw domain_error("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return {d, kolmogorov_q(std::sqrt(n) * d)};
}

KsResult ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
  if (a.empty() || b.empty()) throw domain_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_q(std::sqrt(ne) * d)};
}

void parallel_for_index(std::uint64_t count, unsigned workers,
                        const std::function<void(std::uint64_t)>& fn) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned nw = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w) {
    pool.emplace_back([&, w]() {
      const std::uint64_t begin = count * w / nw;
      const std::uint64_t end = count * (w + 1) / nw;
      try {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ams::stats
