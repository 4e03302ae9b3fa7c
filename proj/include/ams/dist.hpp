#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

namespace ams {

// Continuous laws with X > 0 a.s. in the idealized setting: the CDF is
// continuous and exact conditional sampling above any level is available
// through the inverse transform. All operations are pure.

class Distribution {
 public:
  virtual ~Distribution() = default;

  const std::string& name() const { return name_; }

  virtual double cdf(double x) const = 0;

  /// Quantile for q in (0,1). Default: bracketed bisection on the CDF to
  /// absolute tolerance 1e-12 (monotonicity makes this robust).
  virtual double inverse_cdf(double q) const;

  /// Quantile of L(X | X > floor): F^{-1}(F(floor) + u (1 - F(floor))).
  /// Overridden where a closed form exists.
  virtual double conditional_quantile(double floor, double u) const;

  /// True for the standard exponential; enables the memoryless fast path
  /// floor + E in the samplers.
  virtual bool unit_exponential() const { return false; }

  /// [inf, sup) of the support.
  virtual std::pair<double, double> support() const {
    return {0.0, std::numeric_limits<double>::infinity()};
  }

 protected:
  explicit Distribution(std::string name) : name_(std::move(name)) {}

 private:
  std::string name_;
};

/// Exponential with rate 1: F(y) = 1 - e^{-y} on [0, inf).
class Exponential final : public Distribution {
 public:
  Exponential() : Distribution("exponential") {}
  double cdf(double x) const override;
  double inverse_cdf(double q) const override;
  double conditional_quantile(double floor, double u) const override;
  bool unit_exponential() const override { return true; }
};

/// Pareto with tail index alpha shifted to start at 0: F(y) = 1 - (1+y)^{-alpha}.
class ShiftedPareto final : public Distribution {
 public:
  explicit ShiftedPareto(double alpha = 2.0);
  double cdf(double x) const override;
  double inverse_cdf(double q) const override;
  double conditional_quantile(double floor, double u) const override;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// A law given only by its CDF; quantiles go through the bisection default.
class GenericCdf final : public Distribution {
 public:
  GenericCdf(std::string name, std::function<double(double)> cdf,
             std::pair<double, double> support);
  double cdf(double x) const override;
  std::pair<double, double> support() const override { return support_; }

 private:
  std::function<double(double)> cdf_;
  std::pair<double, double> support_;
};

/// Factory for the built-in laws ("exponential", "pareto").
std::unique_ptr<Distribution> make_distribution(const std::string& name,
                                                double pareto_alpha = 2.0);

// ---- Conditional law L(X | X > floor) --------------------------------------

struct ConditionalLaw {
  const Distribution& base;
  double floor;
};

/// Inverse-transform draw above the floor from an explicit variate u in (0,1).
double conditional_sample(const ConditionalLaw& law, double u);

/// (F(y) - F(x)) / (1 - F(x)) clamped to [0,1]; 0 for y <= floor.
double conditional_cdf(const ConditionalLaw& law, double y);

// ---- Order statistics of conditional exponential samples -------------------
//
// The k-th order statistic of n i.i.d. draws from L(X | X > floor) with X
// standard exponential. The CDF uses the binomial tail, with the convention
// k = 0 meaning the constant 1 above the floor.

struct OrderStatisticLaw {
  int n;
  int k;
  double floor;
};

double order_stat_pdf(const OrderStatisticLaw& law, double y);
double order_stat_cdf(const OrderStatisticLaw& law, double y);

}  // namespace ams
