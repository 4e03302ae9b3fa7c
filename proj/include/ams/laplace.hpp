#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace ams::laplace {

// Numerical realization of the Laplace-transform machinery behind the
// large-deviations analysis: the auxiliary function Theta, the order-k linear
// ODE satisfied by Gamma(lambda; x) = E[exp(n lambda log p_hat(x))] in the
// exponential case, its exact integer coefficients, exact boundary
// derivatives at x = a, the characteristic roots/coefficients, and the
// scaled log-Laplace limit.

using BigInt = boost::multiprecision::cpp_int;

/// Theta_{n,k}(lambda; x): sum over l < k of exp(n lambda log(1 - l/n)) times
/// the probability that exactly l of n conditional draws fall below a.
double theta(int n, int k, double lambda, double x, double a);

// ---- ODE coefficients (exact integers) --------------------------------------

struct OdeCoefficients {
  int n = 0, k = 0;
  BigInt mu;               // (-1)^k n (n-1) ... (n-k+1)
  std::vector<BigInt> r;   // r[m], m = 0..k-1
};

/// Coefficient recursion for the order-k ODE; exact integer arithmetic.
/// Satisfies nu^k - sum_m r[m] nu^m = (nu-n)(nu-n+1)...(nu-n+k-1).
OdeCoefficients ode_coefficients(int n, int k);

// ---- Boundary data at x = a --------------------------------------------------

struct BoundaryDerivatives {
  int n = 0, k = 0;
  // entries[m][l] = d^m/dx^m (F_{n,l}(a;x) - F_{n,l+1}(a;x)) at x = a, exact
  std::vector<std::vector<BigInt>> entries;

  double scaled(int m, int l) const;  // entries[m][l] / n^m
};

struct BoundaryData {
  BoundaryDerivatives B;
  std::vector<double> theta_derivs;  // d^m Theta|_{x=a}, m = 0..k-1
};

/// Exact derivatives of the order-statistic CDF differences at x = a by
/// symbolic application of the density recursions, plus the lambda-weighted
/// Theta derivatives they induce.
BoundaryData boundary_derivatives(int n, int k, double lambda);

// ---- Characteristic roots and coefficients -----------------------------------

struct CharacteristicSolution {
  int n = 0, k = 0;
  double lambda = 0.0;
  std::vector<std::complex<double>> roots;         // nu^l, l = 1..k
  std::vector<std::complex<double>> coefficients;  // gamma^l
};

/// Roots nu of (n-nu)...(n-k+1-nu) / (n...(n-k+1)) = exp(n lambda log(1-k/n)),
/// ordered by matching to the limit points n (1 - e^{-lambda} e^{i 2 pi (l-1)/k}).
std::vector<std::complex<double>> characteristic_roots(int n, int k,
                                                       double lambda);

/// Solves the Vandermonde system sum_l gamma_l nu_l^m = d^m Theta|_{x=a} in
/// the scaled variables nu/n and Theta_m / n^m. Roots must be distinct.
std::vector<std::complex<double>> solve_gamma(
    const std::vector<std::complex<double>>& roots,
    const std::vector<double>& theta_derivs, int n);

/// Roots plus coefficients in one bundle (independent of a).
CharacteristicSolution characteristic_solution(int n, int k, double lambda);

/// Gamma(lambda; x) reconstructed from a solution: sum gamma_l e^{nu_l (x-a)}.
/// Throws if the imaginary residue exceeds 1e-10 of the magnitude.
double gamma_from_solution(const CharacteristicSolution& sol, double x,
                           double a);

// ---- Gamma routes ------------------------------------------------------------

enum class GammaRoute { closed, ode, mc };

struct GammaValue {
  double value = 0.0;
  double std_error = 0.0;  // Monte-Carlo route only
};

struct McParams {
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// E[exp(n lambda log p_hat^{n,k}(x))] with threshold a, by the requested
/// route. `closed` is the k = 1 formula; `ode` uses the characteristic
/// representation; `mc` averages over AMS runs and reports a standard error.
GammaValue gamma_transform(int n, int k, double lambda, double x, double a,
                           GammaRoute route, const McParams& mc = {});

/// sup_x |Gamma(x) - integral term - Theta(x)| over a uniform x grid, with
/// adaptive quadrature (absolute tolerance 1e-11) for the integral.
double functional_equation_residual(int n, int k, double lambda, double a,
                                    const std::function<double(double)>& Gamma,
                                    int grid_points = 21);

/// (1/n) log Gamma_{n,k}(lambda; 0) with a = -log p, via the ODE route.
double scaled_log_laplace(int n, int k, double lambda, double p);

/// Adaptive Simpson quadrature used by the residual check (exposed for tests).
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol);

}  // namespace ams::laplace
