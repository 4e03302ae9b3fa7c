#include "ams/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ams/dist.hpp"
#include "ams/errors.hpp"
#include "ams/splitting.hpp"
#include "ams/stats.hpp"

namespace ams::laplace {

namespace {

void check_nk(int n, int k) {
  if (n < 2 || k < 1 || k > n - 1)
    throw domain_error("laplace: require 1 <= k <= n-1");
}

// survival weight exp(n lambda log(1 - l/n))
double level_weight(int n, double lambda, int l) {
  return std::exp(n * lambda * std::log1p(-static_cast<double>(l) / n));
}

}  // namespace

double theta(int n, int k, double lambda, double x, double a) {
  check_nk(n, k);
  if (!(x <= a)) throw domain_error("theta: require x <= a");
  double total = 0.0;
  for (int l = 0; l < k; ++l) {
    const double dl = order_stat_cdf({n, l, x}, a) - order_stat_cdf({n, l + 1, x}, a);
    total += level_weight(n, lambda, l) * dl;
  }
  return total;
}

OdeCoefficients ode_coefficients(int n, int k) {
  check_nk(n, k);
  OdeCoefficients out;
  out.n = n;
  out.k = k;
  // mu_0 = 1, mu_{l+1} = -(n-k+l+1) mu_l
  // r_{m,l+1} = r_{m-1,l} - (n-k+l+1) r_{m,l}, with the formal seeds
  // r_{l,l} = -1 and r_{-1,l} = 0
  BigInt mu = 1;
  std::vector<BigInt> r;  // r[m] at the current level l; r_{l,l} = -1 appended
  for (int l = 0; l < k; ++l) {
    const BigInt factor = n - k + l + 1;
    mu *= -factor;
    std::vector<BigInt> next(l + 1);
    r.push_back(-1);  // formal top entry r_{l,l}
    for (int m = 0; m <= l; ++m) {
      const BigInt above = m >= 1 ? r[m - 1] : BigInt(0);
      next[m] = above - factor * r[m];
    }
    r = std::move(next);
  }
  out.mu = std::move(mu);
  out.r = std::move(r);
  return out;
}

double BoundaryDerivatives::scaled(int m, int l) const {
  const BigInt& v = entries[m][l];
  BigInt scale = 1;
  for (int i = 0; i < m; ++i) scale *= n;
  return static_cast<double>(boost::multiprecision::cpp_rational(v, scale));
}

BoundaryData boundary_derivatives(int n, int k, double lambda) {
  check_nk(n, k);
  BoundaryData out;
  out.B.n = n;
  out.B.k = k;
  out.B.entries.assign(k, std::vector<BigInt>(k));
  // Work per column l with the representation of d^m (F_{n,l} - F_{n,l+1})(a; x)
  // as an integer combination of the densities f_{n,j}(a; x):
  //   d/dx F_{n,l}(a;x) = -f_{n,l}(a;x)          (l >= 1; F_{n,0} is constant)
  //   d/dx f_{n,1} = n f_{n,1}
  //   d/dx f_{n,j} = (n-j+1)(f_{n,j} - f_{n,j-1})
  // and evaluation at x = a uses f_{n,j}(a;a) = n 1_{j=1}.
  for (int l = 0; l < k; ++l) {
    out.B.entries[0][l] = l == 0 ? 1 : 0;
    std::vector<BigInt> coeff(k + 2);  // coeff[j] multiplies f_{n,j}, j = 1..k
    // d (F_{n,l} - F_{n,l+1}) = f_{n,l+1} - f_{n,l}
    coeff[l + 1] += 1;
    if (l >= 1) coeff[l] -= 1;
    for (int m = 1; m < k; ++m) {
      out.B.entries[m][l] = coeff[1] * n;
      std::vector<BigInt> next(k + 2);
      for (int j = 1; j <= k; ++j) {
        if (coeff[j] == 0) continue;
        if (j == 1) {
          next[1] += coeff[1] * n;
        } else {
          next[j] += coeff[j] * (n - j + 1);
          next[j - 1] -= coeff[j] * (n - j + 1);
        }
      }
      coeff = std::move(next);
    }
  }
  out.theta_derivs.resize(k);
  for (int m = 0; m < k; ++m) {
    double s = 0.0;
    for (int l = 0; l < k; ++l)
      s += level_weight(n, lambda, l) *
           static_cast<double>(out.B.entries[m][l]);
    out.theta_derivs[m] = s;
  }
  return out;
}

std::vector<std::complex<double>> characteristic_roots(int n, int k,
                                                       double lambda) {
  check_nk(n, k);
  using cplx = std::complex<double>;
  const double rhs = std::exp(n * lambda * std::log1p(-static_cast<double>(k) / n));

  if (k == 1) {
    // (n - nu)/n = rhs  =>  nu = n (1 - rhs), exact
    return {cplx(n * (1.0 - rhs), 0.0)};
  }

  // scaled polynomial in z = nu/n:  prod_j (c_j - z) - rhs prod_j c_j = 0,
  // with c_j = 1 - j/n. Evaluated in product form for stability.
  std::vector<double> c(k);
  double prod_c = 1.0;
  for (int j = 0; j < k; ++j) {
    c[j] = 1.0 - static_cast<double>(j) / n;
    prod_c *= c[j];
  }
  const double target = rhs * prod_c;
  auto poly = [&](cplx z) {
    cplx acc(1.0, 0.0);
    for (int j = 0; j < k; ++j) acc *= (c[j] - z);
    return acc - target;
  };
  const double lead_sign = (k % 2 == 0) ? 1.0 : -1.0;  // coefficient of z^k

  // Durand-Kerner initialized at the large-n limit points
  // 1 - e^{-lambda} e^{i 2 pi (l-1) / k}; this also fixes the ordering.
  std::vector<cplx> z(k), lim(k);
  for (int l = 0; l < k; ++l) {
    lim[l] = 1.0 - std::exp(-lambda) *
                       std::exp(cplx(0.0, 2.0 * M_PI * l / k));
    z[l] = lim[l];
  }
  const double tol = 1e-13;
  bool converged = false;
  for (int it = 0; it < 500 && !converged; ++it) {
    converged = true;
    for (int i = 0; i < k; ++i) {
      cplx denom(lead_sign, 0.0);
      for (int j = 0; j < k; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) == 0.0)
        throw numerical_error("characteristic_roots: root collision");
      const cplx step = poly(z[i]) / denom;
      z[i] -= step;
      if (std::abs(step) > tol * std::max(1.0, std::abs(z[i])))
        converged = false;
    }
  }
  if (!converged)
    throw numerical_error(
        "characteristic_roots: Durand-Kerner failed to converge (n=" +
        std::to_string(n) + ", k=" + std::to_string(k) + ")");

  // nearest-neighbor assignment of the converged roots to the limit points
  std::vector<cplx> ordered(k);
  std::vector<bool> used(k, false);
  for (int l = 0; l < k; ++l) {
    int best = -1;
    double best_d = 0.0;
    for (int i = 0; i < k; ++i) {
      if (used[i]) continue;
      const double d = std::abs(z[i] - lim[l]);
      if (best < 0 || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    used[best] = true;
    ordered[l] = z[best];
  }
  for (auto& zz : ordered) zz *= static_cast<double>(n);
  return ordered;
}

std::vector<std::complex<double>> solve_gamma(
    const std::vector<std::complex<double>>& roots,
    const std::vector<double>& theta_derivs, int n) {
  using cplx = std::complex<double>;
  const int k = static_cast<int>(roots.size());
  if (static_cast<int>(theta_derivs.size()) != k)
    throw domain_error("solve_gamma: boundary data size mismatch");
  // scaled system: sum_l gamma_l (nu_l/n)^m = theta_derivs[m] / n^m
  std::vector<std::vector<cplx>> A(k, std::vector<cplx>(k + 1));
  std::vector<cplx> pw(k, cplx(1.0, 0.0));
  for (int m = 0; m < k; ++m) {
    for (int l = 0; l < k; ++l) {
      A[m][l] = pw[l];
      pw[l] *= roots[l] / static_cast<double>(n);
    }
    A[m][k] = theta_derivs[m] / std::pow(static_cast<double>(n), m);
  }
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int row = col + 1; row < k; ++row)
      if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
    if (std::abs(A[piv][col]) < 1e-14)
      throw numerical_error("solve_gamma: near-singular system (root collision)");
    std::swap(A[col], A[piv]);
    for (int row = col + 1; row < k; ++row) {
      const cplx f = A[row][col] / A[col][col];
      for (int j = col; j <= k; ++j) A[row][j] -= f * A[col][j];
    }
  }
  std::vector<cplx> gamma(k);
  for (int row = k - 1; row >= 0; --row) {
    cplx acc = A[row][k];
    for (int j = row + 1; j < k; ++j) acc -= A[row][j] * gamma[j];
    gamma[row] = acc / A[row][row];
  }
  return gamma;
}

CharacteristicSolution characteristic_solution(int n, int k, double lambda) {
  CharacteristicSolution sol;
  sol.n = n;
  sol.k = k;
  sol.lambda = lambda;
  sol.roots = characteristic_roots(n, k, lambda);
  sol.coefficients =
      solve_gamma(sol.roots, boundary_derivatives(n, k, lambda).theta_derivs, n);
  return sol;
}

double gamma_from_solution(const CharacteristicSolution& sol, double x,
                           double a) {
  std::complex<double> acc(0.0, 0.0);
  for (int l = 0; l < sol.k; ++l)
    acc += sol.coefficients[l] * std::exp(sol.roots[l] * (x - a));
  if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
    throw numerical_error("gamma_from_solution: imaginary residue too large");
  return acc.real();
}

GammaValue gamma_transform(int n, int k, double lambda, double x, double a,
                           GammaRoute route, const McParams& mc) {
  check_nk(n, k);
  if (!(x <= a)) throw domain_error("gamma_transform: require x <= a");
  switch (route) {
    case GammaRoute::closed: {
      if (k != 1)
        throw domain_error("gamma_transform: closed route requires k = 1");
      const double nu = n * (1.0 - std::exp(n * lambda * std::log1p(-1.0 / n)));
      return {std::exp(nu * (x - a)), 0.0};
    }
    case GammaRoute::ode: {
      const CharacteristicSolution sol = characteristic_solution(n, k, lambda);
      return {gamma_from_solution(sol, x, a), 0.0};
    }
    case GammaRoute::mc: {
      const Exponential expo;
      AmsConfig cfg;
      cfg.n = n;
      cfg.k = k;
      cfg.threshold = a;
      cfg.initial_level = x;
      cfg.expected_p_hint = std::exp(-(a - x));
      std::vector<double> weights(mc.reps);
      stats::parallel_for_index(mc.reps, mc.workers, [&](std::uint64_t rep) {
        const AmsResult r = run_ams(cfg, expo, mc.seed, rep);
        weights[rep] = std::exp(n * lambda * r.log_estimate);
      });
      const auto mv = stats::mean_var(weights);
      return {mv.mean, std::sqrt(mv.variance / static_cast<double>(mc.reps))};
    }
  }
  throw domain_error("gamma_transform: unknown route");
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol) {
  struct Simpson {
    const std::function<double(double)>& f;
    int evals = 0;
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      evals += 2;
      if (evals > 2000000)
        throw numerical_error("integrate: too many evaluations");
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth > 60)
        throw numerical_error("integrate: recursion depth exceeded");
      if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  if (!(hi > lo)) return 0.0;
  Simpson s{f};
  const double m = 0.5 * (lo + hi);
  const double fa = f(lo), fm = f(m), fb = f(hi);
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return s.recurse(lo, hi, fa, fm, fb, whole, abs_tol, 0);
}

double functional_equation_residual(int n, int k, double lambda, double a,
                                    const std::function<double(double)>& Gamma,
                                    int grid_points) {
  check_nk(n, k);
  if (grid_points < 2) throw domain_error("residual: need at least 2 grid points");
  const double factor = level_weight(n, lambda, k);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = a * static_cast<double>(i) / (grid_points - 1);
    const double integral = integrate(
        [&](double y) { return Gamma(y) * order_stat_pdf({n, k, x}, y); }, x, a,
        1e-11);
    const double res = std::abs(factor * integral + theta(n, k, lambda, x, a) -
                                Gamma(x));
    worst = std::max(worst, res);
  }
  return worst;
}

double scaled_log_laplace(int n, int k, double lambda, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw domain_error("scaled_log_laplace: p must lie in (0,1)");
  const double a = -std::log(p);
  const GammaValue g = gamma_transform(n, k, lambda, 0.0, a, GammaRoute::ode);
  if (!(g.value > 0.0))
    throw numerical_error("scaled_log_laplace: non-positive Gamma");
  return std::log(g.value) / n;
}

}  // namespace ams::laplace
