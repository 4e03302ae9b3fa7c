#pragma once

#include <utility>

namespace ams::rates {

// Closed-form large-deviations rate functions for the three estimators and
// the comparison machinery around them. Points outside a rate function's
// effective domain evaluate to +infinity (never a finite sentinel); the
// probability parameter p must lie in (0,1) or a domain_error is thrown.
//
// The inner logarithms in the adaptive rate are both negative; every
// "log log" difference is evaluated as the log of the (positive) quotient
// log(p)/log(y), the unique real-valued reading.

struct RateFunctionPoint {
  double argument;
  double value;     // finite or +infinity
  bool in_domain;   // true iff the value is finite
};

/// Adaptive-splitting rate: log(y) log(log(p)/log(y)) + log(y/p) on (0,1).
double rate_I(double y, double p);

/// Rate of the log-estimator: z - log(p) - z log(z/log(p)) for z < 0.
double rate_J(double z, double p);

/// Limiting scaled log-Laplace transform: -log(p) (e^{-lambda} - 1).
double lambda(double lam, double p);

/// Fenchel-Legendre transform of lambda, closed form (equals rate_J).
double lambda_star(double z, double p);

/// Numerical supremum route: sup_lam (lam z - lambda(lam)) from the
/// stationary point plus a safeguarded golden-section refinement.
double lambda_star_numeric(double z, double p);

/// Crude Monte-Carlo (Bernoulli/Cramer) rate: y log(y/p) + (1-y) log((1-y)/(1-p)).
double rate_crude(double y, double p);

/// Per-stage rate of the optimal N-level fixed splitting: rate_crude with
/// p^{1/N} in place of p.
double rate_fixed_N(double y, double p, int N);

/// N * rate_fixed_N(y^{1/N}); upper bound for the fixed-level rate, converging
/// to rate_I as N grows.
double fixed_upper_bound(double y, double p, int N);

/// D(y,p) = I(y,p) - crude(y,p) and its partial derivative in p.
double comparison_D(double y, double p);
double comparison_D_partial_p(double y, double p);

struct SmallPRates {
  double ams_exact;        // I(p(1+eps))
  double ams_asymptotic;   // (log(1+eps))^2 / (-2 log p)
  double crude_exact;      // crude(p(1+eps))
  double crude_asymptotic; // p ((1+eps) log(1+eps) - eps)
};

/// Exact relative-deviation rates and their small-p equivalents.
SmallPRates small_p_relative_rates(double eps, double p);

/// First and second derivative of rate_I in y.
std::pair<double, double> rate_I_derivatives(double y, double p);

/// Wrap a rate evaluation as a point with domain flag.
RateFunctionPoint rate_point(double (*rate)(double, double), double arg, double p);

}  // namespace ams::rates
