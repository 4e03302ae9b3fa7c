#include "ams/rates.hpp"

#include <cmath>
#include <limits>

#include "ams/errors.hpp"

namespace ams::rates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw domain_error("rate function: p must lie in (0,1)");
}

}  // namespace

double rate_I(double y, double p) {
  check_p(p);
  if (!(y > 0.0 && y < 1.0)) return kInf;
  return std::log(y) * std::log(std::log(p) / std::log(y)) + std::log(y / p);
}

double rate_J(double z, double p) {
  check_p(p);
  if (z >= 0.0) return kInf;
  return z - std::log(p) - z * std::log(z / std::log(p));
}

double lambda(double lam, double p) {
  check_p(p);
  return -std::log(p) * std::expm1(-lam);
}

double lambda_star(double z, double p) { return rate_J(z, p); }

double lambda_star_numeric(double z, double p) {
  check_p(p);
  auto objective = [&](double lam) { return lam * z - lambda(lam, p); };
  if (z >= 0.0) {
    // divergence probe: the objective keeps growing along lam -> +inf
    double prev = objective(0.0);
    for (double lam = 16.0; lam <= 1024.0; lam *= 2.0) {
      const double cur = objective(lam);
      if (!(cur > prev)) break;
      prev = cur;
    }
    return kInf;
  }
  // concave in lam; stationary point in closed form, then a golden-section
  // polish over a bracket around it guards the algebra
  const double lam_z = -std::log(z / std::log(p));
  double lo = lam_z - 2.0, hi = lam_z + 2.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = objective(c), fd = objective(d);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = objective(d);
    }
  }
  const double best = 0.5 * (lo + hi);
  return std::max(objective(best), objective(lam_z));
}

double rate_crude(double y, double p) {
  check_p(p);
  if (!(y > 0.0 && y < 1.0)) return kInf;
  return y * std::log(y / p) + (1.0 - y) * std::log((1.0 - y) / (1.0 - p));
}

double rate_fixed_N(double y, double p, int N) {
  check_p(p);
  if (N < 1) throw domain_error("rate_fixed_N: N must be >= 1");
  if (N == 1) return rate_crude(y, p);
  if (!(y > 0.0 && y < 1.0)) return kInf;
  const double log_pN = std::log(p) / N;
  const double pN = std::exp(log_pN);
  return y * (std::log(y) - log_pN) +
         (1.0 - y) * (std::log1p(-y) - std::log(-std::expm1(log_pN)));
}

double fixed_upper_bound(double y, double p, int N) {
  check_p(p);
  if (N < 1) throw domain_error("fixed_upper_bound: N must be >= 1");
  if (!(y > 0.0 && y < 1.0)) return kInf;
  const double log_yN = std::log(y) / N;
  const double log_pN = std::log(p) / N;
  const double yN = std::exp(log_yN);
  // N * [ yN (log yN - log pN) + (1-yN) (log(1-yN) - log(1-pN)) ]
  const double term1 = yN * (log_yN - log_pN);
  const double term2 = (-std::expm1(log_yN)) *
                       (std::log(-std::expm1(log_yN)) -
                        std::log(-std::expm1(log_pN)));
  return N * (term1 + term2);
}

double comparison_D(double y, double p) {
  return rate_I(y, p) - rate_crude(y, p);
}

double comparison_D_partial_p(double y, double p) {
  check_p(p);
  if (!(y > 0.0 && y < 1.0))
    throw domain_error("comparison_D_partial_p: y must lie in (0,1)");
  return (1.0 - y) / (p * std::log(p)) *
         (std::log(y) / (1.0 - y) - std::log(p) / (1.0 - p));
}

SmallPRates small_p_relative_rates(double eps, double p) {
  check_p(p);
  if (!(eps > 0.0 && eps < 1.0))
    throw domain_error("small_p_relative_rates: eps must lie in (0,1)");
  const double y = p * (1.0 + eps);
  if (y >= 1.0)
    throw domain_error("small_p_relative_rates: p(1+eps) must be below 1");
  SmallPRates out;
  out.ams_exact = rate_I(y, p);
  out.ams_asymptotic = std::pow(std::log1p(eps), 2) / (-2.0 * std::log(p));
  out.crude_exact = rate_crude(y, p);
  out.crude_asymptotic = p * ((1.0 + eps) * std::log1p(eps) - eps);
  return out;
}

std::pair<double, double> rate_I_derivatives(double y, double p) {
  check_p(p);
  if (!(y > 0.0 && y < 1.0))
    throw domain_error("rate_I_derivatives: y must lie in (0,1)");
  const double ratio = std::log(p) / std::log(y);  // positive
  const double first = std::log(ratio) / y;
  const double second =
      -std::log(ratio) / (y * y) - 1.0 / (y * y * std::log(y));
  return {first, second};
}

RateFunctionPoint rate_point(double (*rate)(double, double), double arg,
                             double p) {
  const double v = rate(arg, p);
  return {arg, v, std::isfinite(v)};
}

}  // namespace ams::rates
