#include "ams/dist.hpp"

#include <cmath>

#include "ams/errors.hpp"

namespace ams {

double Distribution::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0))
    throw domain_error("inverse_cdf: q must lie in (0,1)");
  auto [lo, hi] = support();
  if (!std::isfinite(hi)) {
    // expand an upper bracket
    double step = 1.0;
    hi = lo + step;
    while (cdf(hi) < q) {
      step *= 2.0;
      hi = lo + step;
      if (!std::isfinite(hi))
        throw numerical_error("inverse_cdf: failed to bracket quantile");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double Distribution::conditional_quantile(double floor, double u) const {
  const double fx = cdf(floor);
  if (fx >= 1.0)
    throw domain_error("conditional_quantile: floor at or beyond the essential supremum");
  return inverse_cdf(fx + u * (1.0 - fx));
}

// ---- Exponential ------------------------------------------------------------

double Exponential::cdf(double x) const {
  return x > 0.0 ? -std::expm1(-x) : 0.0;
}

double Exponential::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0))
    throw domain_error("inverse_cdf: q must lie in (0,1)");
  return -std::log1p(-q);
}

double Exponential::conditional_quantile(double floor, double u) const {
  return floor - std::log1p(-u);
}

// ---- ShiftedPareto ----------------------------------------------------------

ShiftedPareto::ShiftedPareto(double alpha)
    : Distribution("pareto"), alpha_(alpha) {
  if (!(alpha > 0.0)) throw domain_error("ShiftedPareto: alpha must be > 0");
}

double ShiftedPareto::cdf(double x) const {
  return x > 0.0 ? -std::expm1(-alpha_ * std::log1p(x)) : 0.0;
}

double ShiftedPareto::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0))
    throw domain_error("inverse_cdf: q must lie in (0,1)");
  return std::expm1(-std::log1p(-q) / alpha_);
}

double ShiftedPareto::conditional_quantile(double floor, double u) const {
  // survival is (1+y)^{-alpha}: 1+y = (1+floor) (1-u)^{-1/alpha}
  return (1.0 + floor) * std::exp(-std::log1p(-u) / alpha_) - 1.0;
}

// ---- GenericCdf -------------------------------------------------------------

GenericCdf::GenericCdf(std::string name, std::function<double(double)> cdf,
                       std::pair<double, double> support)
    : Distribution(std::move(name)), cdf_(std::move(cdf)), support_(support) {}

double GenericCdf::cdf(double x) const { return cdf_(x); }

std::unique_ptr<Distribution> make_distribution(const std::string& name,
                                                double pareto_alpha) {
  if (name == "exponential" || name == "exp")
    return std::make_unique<Exponential>();
  if (name == "pareto") return std::make_unique<ShiftedPareto>(pareto_alpha);
  throw domain_error("unknown distribution: " + name);
}

// ---- Conditional law --------------------------------------------------------

double conditional_sample(const ConditionalLaw& law, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw domain_error("conditional_sample: u must lie in (0,1)");
  if (law.base.cdf(law.floor) >= 1.0)
    throw domain_error("conditional_sample: floor at or beyond the essential supremum");
  return law.base.conditional_quantile(law.floor, u);
}

double conditional_cdf(const ConditionalLaw& law, double y) {
  const double fx = law.base.cdf(law.floor);
  if (fx >= 1.0)
    throw domain_error("conditional_cdf: floor at or beyond the essential supremum");
  if (y <= law.floor) return 0.0;
  const double v = (law.base.cdf(y) - fx) / (1.0 - fx);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// ---- Order statistics (exponential case) ------------------------------------

namespace {

double lchoose(int n, int j) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
}

void check_order_stat(const OrderStatisticLaw& law, bool allow_zero) {
  const int lo = allow_zero ? 0 : 1;
  if (law.n < 1 || law.k < lo || law.k > law.n)
    throw domain_error("order statistic rank k outside {1,...,n}");
}

}  // namespace

double order_stat_pdf(const OrderStatisticLaw& law, double y) {
  check_order_stat(law, false);
  if (y < law.floor) return 0.0;
  const double d = y - law.floor;
  const double logf = -d;                 // log conditional density
  const double F = -std::expm1(-d);       // conditional CDF
  if (F == 0.0)  // y at the floor: k (n choose k) F^{k-1} f (1-F)^{n-k}
    return law.k == 1 ? static_cast<double>(law.n) : 0.0;
  const double log_pdf = std::log(static_cast<double>(law.k)) +
                         lchoose(law.n, law.k) + (law.k - 1) * std::log(F) +
                         logf + (law.n - law.k) * (-d);
  return std::exp(log_pdf);
}

double order_stat_cdf(const OrderStatisticLaw& law, double y) {
  check_order_stat(law, true);
  if (law.k == 0) return y >= law.floor ? 1.0 : 0.0;
  if (y <= law.floor) return 0.0;
  const double d = y - law.floor;
  const double F = -std::expm1(-d);
  if (F >= 1.0) return 1.0;
  const double logF = std::log(F);
  double sum = 0.0;
  for (int j = law.k; j <= law.n; ++j)
    sum += std::exp(lchoose(law.n, j) + j * logF + (law.n - j) * (-d));
  return sum > 1.0 ? 1.0 : sum;
}

}  // namespace ams
