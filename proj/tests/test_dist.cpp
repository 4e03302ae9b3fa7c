#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ams/dist.hpp"
#include "ams/errors.hpp"
#include "ams/rng.hpp"
#include "ams/stats.hpp"

using namespace ams;

namespace {

// test-side Simpson quadrature, independent of the library's integrator
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("conditional sampling: exponential memorylessness closed form") {
  const Exponential expo;
  const ConditionalLaw law{expo, 1.7};
  for (double u : {0.001, 0.25, 0.5, 0.99}) {
    CHECK(conditional_sample(law, u) ==
          doctest::Approx(1.7 - std::log1p(-u)).epsilon(1e-14));
  }
  // u -> 0+ approaches the floor from above
  CHECK(conditional_sample(law, 1e-12) == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(conditional_sample(law, 1e-12) > 1.7);
}

TEST_CASE("conditional sampling domain errors") {
  const Exponential expo;
  CHECK_THROWS_AS(conditional_sample({expo, 1.0}, 0.0), domain_error);
  CHECK_THROWS_AS(conditional_sample({expo, 1.0}, 1.0), domain_error);
  const GenericCdf bounded("bounded", [](double x) {
    return x <= 0 ? 0.0 : (x >= 1 ? 1.0 : x);
  }, {0.0, 1.0});
  CHECK_THROWS_AS(conditional_sample({bounded, 1.0}, 0.5), domain_error);
}

TEST_CASE("pareto conditional median against a rejection-sampling oracle") {
  const ShiftedPareto pareto(2.0);
  const double floor = 2.0;
  const double median = conditional_sample({pareto, floor}, 0.5);
  CHECK(median == doctest::Approx(3.0 * std::sqrt(2.0) - 1.0).epsilon(1e-12));

  // oracle: draw from the base law, reject below the floor, 10^6 accepted
  RandomSequence seq(2024, 0, 0);
  std::vector<double> accepted;
  accepted.reserve(1000000);
  while (accepted.size() < 1000000) {
    const double x = pareto.inverse_cdf(seq.next_open_unit());
    if (x > floor) accepted.push_back(x);
  }
  std::nth_element(accepted.begin(), accepted.begin() + accepted.size() / 2,
                   accepted.end());
  const double empirical = accepted[accepted.size() / 2];
  CHECK(empirical == doctest::Approx(median).epsilon(0.01));
}

TEST_CASE("conditional cdf") {
  const Exponential expo;
  const ConditionalLaw law{expo, 0.9};
  CHECK(conditional_cdf(law, 0.9) == 0.0);
  CHECK(conditional_cdf(law, 0.2) == 0.0);
  for (double y : {1.0, 1.5, 3.0})
    CHECK(conditional_cdf(law, y) ==
          doctest::Approx(1.0 - std::exp(-(y - 0.9))).epsilon(1e-14));
  CHECK(conditional_cdf(law, 1e9) == doctest::Approx(1.0));

  const ShiftedPareto pareto(2.0);
  // reduction identity: F(y;x) = (F(y)-F(x))/(1-F(x))
  const ConditionalLaw plaw{pareto, 2.0};
  const double y = 5.0;
  const double expect =
      (pareto.cdf(y) - pareto.cdf(2.0)) / (1.0 - pareto.cdf(2.0));
  CHECK(conditional_cdf(plaw, y) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("inverse-transform round trip through the conditional law") {
  const ShiftedPareto pareto(2.0);
  const Exponential expo;
  for (const Distribution* dist : {static_cast<const Distribution*>(&pareto),
                                   static_cast<const Distribution*>(&expo)}) {
    for (double x : {0.0, 0.5, 3.0}) {
      const ConditionalLaw law{*dist, x};
      for (double u : {1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
        const double y = conditional_sample(law, u);
        CHECK(conditional_cdf(law, y) == doctest::Approx(u).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("bisection inverse for a law without closed-form quantiles") {
  // same exponential law, but exposed only through its CDF
  const GenericCdf generic("generic-exp",
                           [](double x) { return x > 0 ? -std::expm1(-x) : 0.0; },
                           {0.0, std::numeric_limits<double>::infinity()});
  for (double q : {0.01, 0.3, 0.9, 0.999})
    CHECK(generic.inverse_cdf(q) ==
          doctest::Approx(-std::log1p(-q)).epsilon(1e-9));
  CHECK(generic.conditional_quantile(2.0, 0.5) ==
        doctest::Approx(2.0 + std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("memorylessness: conditional draws minus the floor are standard exponential") {
  const Exponential expo;
  RandomSequence seq(77, 0, 0);
  const double floor = 4.2;
  std::vector<double> sample(1000000);
  for (auto& s : sample)
    s = conditional_sample({expo, floor}, seq.next_open_unit()) - floor;
  const auto ks = stats::ks_test(sample, [](double x) {
    return x > 0 ? -std::expm1(-x) : 0.0;
  });
  CHECK(ks.distance < 0.005);
}

TEST_CASE("order statistic density basics") {
  CHECK_THROWS_AS(order_stat_pdf({5, 0, 0.0}, 1.0), domain_error);
  CHECK_THROWS_AS(order_stat_pdf({5, 6, 0.0}, 1.0), domain_error);

  // f_{n,l}(a; a) = n when l = 1, else 0
  for (int n : {2, 5, 9}) {
    for (int l = 1; l < n; ++l) {
      const double v = order_stat_pdf({n, l, 1.3}, 1.3);
      if (l == 1)
        CHECK(v == doctest::Approx(n));
      else
        CHECK(v == 0.0);
    }
  }
  // single draw: f_{1,1}(y;x) = e^{-(y-x)}
  for (double y : {0.5, 1.0, 3.0})
    CHECK(order_stat_pdf({1, 1, 0.5}, y) ==
          doctest::Approx(std::exp(-(y - 0.5))).epsilon(1e-14));
}

TEST_CASE("order statistic density against a Monte-Carlo histogram") {
  // 2nd order statistic of 3 exponential draws, density at y = 1
  RandomSequence seq(5150, 0, 0);
  const double h = 0.01;
  const int reps = 10000000;
  std::uint64_t in_bin = 0;
  for (int i = 0; i < reps; ++i) {
    double a = seq.next_exponential();
    double b = seq.next_exponential();
    double c = seq.next_exponential();
    // median of three
    const double mid = std::max(std::min(a, b), std::min(std::max(a, b), c));
    if (mid >= 1.0 - h / 2 && mid < 1.0 + h / 2) ++in_bin;
  }
  const double density = static_cast<double>(in_bin) / reps / h;
  const double expected = order_stat_pdf({3, 2, 0.0}, 1.0);
  const double se = std::sqrt(expected / (reps * h));
  CHECK(std::abs(density - expected) < 5.0 * se + 1e-4);
}

TEST_CASE("order statistic cdf: boundary conventions and closed form") {
  for (int l = 1; l <= 4; ++l) CHECK(order_stat_cdf({5, l, 2.0}, 2.0) == 0.0);
  CHECK(order_stat_cdf({5, 0, 2.0}, 2.0) == 1.0);
  CHECK(order_stat_cdf({5, 0, 2.0}, 1.0) == 0.0);
  CHECK(order_stat_cdf({5, 3, 0.0}, 80.0) == doctest::Approx(1.0));

  // quadrature oracle: integral of the density matches the binomial tail
  const OrderStatisticLaw law{5, 3, 0.0};
  const double via_quadrature =
      simpson([&](double y) { return order_stat_pdf(law, y); }, 0.0, 0.7, 2000);
  CHECK(order_stat_cdf(law, 0.7) ==
        doctest::Approx(via_quadrature).epsilon(1e-10));
}

TEST_CASE("binomial-tail identity over a grid of n and k") {
  for (int n : {2, 7, 20}) {
    for (int l = 1; l <= n; ++l) {
      const OrderStatisticLaw law{n, l, 0.5};
      for (double y : {0.6, 1.0, 2.5}) {
        const double lhs = order_stat_cdf(law, y);
        const double rhs = simpson(
            [&](double t) { return order_stat_pdf(law, t); }, 0.5, y, 4000);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("order statistic density integrates to one") {
  for (int n : {3, 8}) {
    for (int l = 1; l <= n; ++l) {
      const OrderStatisticLaw law{n, l, 1.0};
      // integrate to a far tail point
      const double mass = simpson(
          [&](double t) { return order_stat_pdf(law, t); }, 1.0, 1.0 + 40.0, 20000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}
