#include "ams/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ams/baselines.hpp"
#include "ams/errors.hpp"
#include "ams/laplace.hpp"
#include "ams/rates.hpp"
#include "ams/rng.hpp"
#include "ams/splitting.hpp"
#include "ams/stats.hpp"

namespace ams::bench {

ExperimentKind parse_kind(const std::string& name) {
  if (name == "ldp-slope") return ExperimentKind::ldp_slope;
  if (name == "unbiasedness") return ExperimentKind::unbiasedness;
  if (name == "clt") return ExperimentKind::clt;
  if (name == "poisson-gof") return ExperimentKind::poisson_gof;
  if (name == "lognormal") return ExperimentKind::lognormal;
  if (name == "laplace-verify") return ExperimentKind::laplace_verify;
  if (name == "compare") return ExperimentKind::compare;
  throw domain_error("unknown experiment kind: " + name);
}

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "ams") return EstimatorKind::ams;
  if (name == "crude") return EstimatorKind::crude;
  if (name == "fixed") return EstimatorKind::fixed;
  throw domain_error("unknown estimator: " + name);
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ldp_slope: return "ldp-slope";
    case ExperimentKind::unbiasedness: return "unbiasedness";
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::poisson_gof: return "poisson-gof";
    case ExperimentKind::lognormal: return "lognormal";
    case ExperimentKind::laplace_verify: return "laplace-verify";
    case ExperimentKind::compare: return "compare";
  }
  return "?";
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::ams: return "ams";
    case EstimatorKind::crude: return "crude";
    case EstimatorKind::fixed: return "fixed";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw domain_error("config: reps must be >= 1");
  if (kind == ExperimentKind::lognormal) {
    if (!(sigma > 0.0)) throw domain_error("config: lognormal requires sigma > 0");
  } else if (p != 0.0) {
    // Theorem 3.1 is restricted to p in (0,1); p = 1 is degenerate
    if (!(p > 0.0 && p < 1.0)) throw domain_error("config: p must lie in (0,1)");
  } else if (!(threshold > 0.0)) {
    throw domain_error("config: provide p in (0,1) or a positive threshold");
  }
  if (n_grid.empty()) throw domain_error("config: empty n grid");
  if (kind == ExperimentKind::laplace_verify && lambda_grid.empty())
    throw domain_error("config: laplace-verify needs a lambda grid");
  for (int n : n_grid)
    if (n < 2) throw domain_error("config: all n must be >= 2");
  if (k < 1) throw domain_error("config: k must be >= 1");
  if (levels < 1) throw domain_error("config: levels must be >= 1");
  if (format != "csv" && format != "json")
    throw domain_error("config: format must be csv or json");
}

ResolvedTarget resolve_target(const ExperimentConfig& config) {
  ResolvedTarget t;
  t.dist = make_distribution(config.dist, config.pareto_alpha);
  if (config.p > 0.0) {
    t.p = config.p;
    t.threshold = t.dist->inverse_cdf(1.0 - config.p);
  } else {
    t.threshold = config.threshold;
    t.p = 1.0 - t.dist->cdf(config.threshold);
    if (!(t.p > 0.0 && t.p < 1.0))
      throw domain_error("config: threshold gives P(X > a) outside (0,1)");
  }
  return t;
}

namespace {

Report base_report(const ExperimentConfig& config) {
  Report r;
  r.add_meta("experiment", to_string(config.kind));
  r.add_meta("seed", std::to_string(config.seed));
  r.add_meta("version", "1.0");
  return r;
}

void finish_report(Report& r,
                   std::chrono::steady_clock::time_point start) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  r.add_meta("wall_clock_ms", std::to_string(ms));
}

}  // namespace

std::vector<double> sample_estimator(const ExperimentConfig& config,
                                     EstimatorKind estimator, int n,
                                     std::uint32_t cell) {
  const ResolvedTarget target = resolve_target(config);
  std::vector<double> out(config.reps);
  switch (estimator) {
    case EstimatorKind::ams: {
      AmsConfig ams_cfg;
      ams_cfg.n = n;
      ams_cfg.k = config.k;
      ams_cfg.threshold = target.threshold;
      ams_cfg.expected_p_hint = target.p;
      stats::parallel_for_index(config.reps, config.workers, [&](std::uint64_t rep) {
        out[rep] = run_ams(ams_cfg, *target.dist, config.seed,
                           stream_for(cell, rep))
                       .estimate;
      });
      break;
    }
    case EstimatorKind::crude: {
      stats::parallel_for_index(config.reps, config.workers, [&](std::uint64_t rep) {
        out[rep] = crude_mc(n, *target.dist, target.threshold, config.seed,
                            stream_for(cell, rep));
      });
      break;
    }
    case EstimatorKind::fixed: {
      const FixedLevelPlan plan =
          optimal_levels(*target.dist, target.threshold, config.levels);
      stats::parallel_for_index(config.reps, config.workers, [&](std::uint64_t rep) {
        out[rep] = run_fixed_splitting(n, plan, *target.dist, config.seed,
                                       stream_for(cell, rep))
                       .estimate;
      });
      break;
    }
  }
  return out;
}

// ---- ldp-slope ---------------------------------------------------------------

ExperimentOutcome run_ldp_slope(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (!(config.eps > 0.0)) throw domain_error("ldp-slope: eps must be > 0");
  if (config.estimator == EstimatorKind::fixed)
    throw domain_error("ldp-slope: estimator must be ams or crude");
  const ResolvedTarget target = resolve_target(config);
  const double y_hi = target.p + config.eps;
  const double y_lo = target.p - config.eps;
  const bool is_ams = config.estimator == EstimatorKind::ams;
  const double rate_hi = is_ams ? rates::rate_I(y_hi, target.p)
                                : rates::rate_crude(y_hi, target.p);

  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.add_meta("estimator", to_string(config.estimator));
  outcome.report.columns = {
      "row",        "estimator",  "n",         "reps",     "count_hi",
      "count_lo",   "q_hi",       "q_lo",      "neglogq_hi_over_n",
      "wilson_lo",  "wilson_hi",  "excluded",  "slope",    "slope_ref",
      "slope_rel_err", "pass"};

  std::vector<double> fit_x, fit_y, fit_w;
  for (std::size_t ci = 0; ci < config.n_grid.size(); ++ci) {
    const int n = config.n_grid[ci];
    const std::vector<double> est =
        sample_estimator(config, config.estimator, n, static_cast<std::uint32_t>(ci));
    std::uint64_t hi = 0, lo = 0;
    for (double e : est) {
      if (e - target.p >= config.eps) ++hi;
      if (e - target.p <= -config.eps) ++lo;
    }
    const double q_hi = static_cast<double>(hi) / config.reps;
    const double q_lo = static_cast<double>(lo) / config.reps;
    const bool excluded = hi == 0;
    if (!excluded) {
      // straight-line fit of -log q - (1/2) log n against n: the universal
      // sqrt(n) prefactor of the tail estimate is removed up front, and the
      // weights are the inverse variances of the log counts
      fit_x.push_back(n);
      fit_y.push_back(-std::log(q_hi) - 0.5 * std::log(static_cast<double>(n)));
      fit_w.push_back(static_cast<double>(config.reps) * q_hi / (1.0 - q_hi));
    }
    const auto wil = stats::wilson_interval(hi, config.reps, 2.0);
    outcome.report.rows.push_back(
        {std::string("cell"), to_string(config.estimator),
         static_cast<std::int64_t>(n), static_cast<std::int64_t>(config.reps),
         static_cast<std::int64_t>(hi), static_cast<std::int64_t>(lo), q_hi,
         q_lo, hi > 0 ? -std::log(q_hi) / n : 0.0, wil.lo, wil.hi,
         static_cast<std::int64_t>(excluded ? 1 : 0), std::string(),
         std::string(), std::string(), std::string()});
  }

  if (fit_x.size() >= 2) {
    const auto fit = stats::weighted_linear_fit(fit_x, fit_y, fit_w);
    const double rel = std::abs(fit.slope - rate_hi) / rate_hi;
    const bool pass = rel <= config.slope_tolerance;
    outcome.passed = pass;
    outcome.report.rows.push_back(
        {std::string("fit"), to_string(config.estimator), std::int64_t(0),
         static_cast<std::int64_t>(config.reps), std::int64_t(0),
         std::int64_t(0), std::string(), std::string(), std::string(),
         std::string(), std::string(), std::int64_t(0), fit.slope, rate_hi,
         rel, static_cast<std::int64_t>(pass ? 1 : 0)});
  } else {
    outcome.passed = false;
  }
  finish_report(outcome.report, start);
  return outcome;
}

// ---- unbiasedness --------------------------------------------------------------

ExperimentOutcome run_unbiasedness(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedTarget target = resolve_target(config);
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.add_meta("estimator", to_string(config.estimator));
  outcome.report.columns = {"estimator", "n",  "k",    "levels", "p",
                            "reps",      "mean", "se", "dev_in_se", "pass"};
  for (std::size_t ci = 0; ci < config.n_grid.size(); ++ci) {
    const int n = config.n_grid[ci];
    const auto est = sample_estimator(config, config.estimator, n,
                                      static_cast<std::uint32_t>(ci));
    const auto mv = stats::mean_var(est);
    const double se = std::sqrt(mv.variance / config.reps);
    const double dev = std::abs(mv.mean - target.p) / se;
    const bool pass = dev <= config.se_multiplier;
    outcome.passed = outcome.passed && pass;
    outcome.report.rows.push_back(
        {to_string(config.estimator), static_cast<std::int64_t>(n),
         static_cast<std::int64_t>(config.k),
         static_cast<std::int64_t>(config.levels), target.p,
         static_cast<std::int64_t>(config.reps), mv.mean, se, dev,
         static_cast<std::int64_t>(pass ? 1 : 0)});
  }
  finish_report(outcome.report, start);
  return outcome;
}

// ---- clt -----------------------------------------------------------------------

ExperimentOutcome run_clt(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedTarget target = resolve_target(config);
  const double limit = -target.p * target.p * std::log(target.p);
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.columns = {"n",        "k",    "p",       "reps", "n_var",
                            "limit",    "rel_err", "pass"};
  for (std::size_t ci = 0; ci < config.n_grid.size(); ++ci) {
    const int n = config.n_grid[ci];
    const auto est = sample_estimator(config, config.estimator, n,
                                      static_cast<std::uint32_t>(ci));
    const auto mv = stats::mean_var(est);
    const double nv = n * mv.variance;
    const double rel = std::abs(nv - limit) / limit;
    const bool pass = rel <= config.var_tolerance;
    outcome.passed = outcome.passed && pass;
    outcome.report.rows.push_back(
        {static_cast<std::int64_t>(n), static_cast<std::int64_t>(config.k),
         target.p, static_cast<std::int64_t>(config.reps), nv, limit, rel,
         static_cast<std::int64_t>(pass ? 1 : 0)});
  }
  finish_report(outcome.report, start);
  return outcome;
}

// ---- poisson-gof ----------------------------------------------------------------

ExperimentOutcome run_poisson_gof(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.k != 1) throw domain_error("poisson-gof: requires k = 1");
  const ResolvedTarget target = resolve_target(config);
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.columns = {"n",      "p",        "reps",   "mean_J",
                            "target_mean", "mean_ok", "chi2", "dof",
                            "p_value", "pass"};
  for (std::size_t ci = 0; ci < config.n_grid.size(); ++ci) {
    const int n = config.n_grid[ci];
    AmsConfig ams_cfg;
    ams_cfg.n = n;
    ams_cfg.k = 1;
    ams_cfg.threshold = target.threshold;
    ams_cfg.expected_p_hint = target.p;
    std::vector<std::uint64_t> iters(config.reps);
    stats::parallel_for_index(config.reps, config.workers, [&](std::uint64_t rep) {
      iters[rep] = run_ams(ams_cfg, *target.dist, config.seed,
                           stream_for(static_cast<std::uint32_t>(ci), rep))
                       .iterations;
    });
    const double mean_target = -n * std::log(target.p);
    double mean = 0.0;
    std::uint64_t jmax = 0;
    for (auto j : iters) {
      mean += static_cast<double>(j);
      jmax = std::max(jmax, j);
    }
    mean /= config.reps;
    const bool mean_ok =
        std::abs(mean - mean_target) <=
        config.se_multiplier * std::sqrt(mean_target / config.reps);

    std::vector<std::uint64_t> observed(jmax + 2, 0);
    for (auto j : iters) ++observed[j];
    std::vector<double> expected(jmax + 2, 0.0);
    for (std::uint64_t j = 0; j <= jmax; ++j)
      expected[j] = config.reps * stats::poisson_pmf(j, mean_target);
    expected[jmax + 1] =
        config.reps * (1.0 - stats::poisson_cdf(jmax, mean_target));
    const auto gof = stats::chi_square_gof(observed, expected);
    const bool pass = mean_ok && gof.p_value >= config.alpha;
    outcome.passed = outcome.passed && pass;
    outcome.report.rows.push_back(
        {static_cast<std::int64_t>(n), target.p,
         static_cast<std::int64_t>(config.reps), mean, mean_target,
         static_cast<std::int64_t>(mean_ok ? 1 : 0), gof.statistic,
         static_cast<std::int64_t>(gof.dof), gof.p_value,
         static_cast<std::int64_t>(pass ? 1 : 0)});
  }
  finish_report(outcome.report, start);
  return outcome;
}

// ---- lognormal -------------------------------------------------------------------

ExperimentOutcome run_lognormal(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.k != 1) throw domain_error("lognormal: requires k = 1");
  if (!(config.sigma > 0.0)) throw domain_error("lognormal: sigma must be > 0");
  const Exponential expo;
  const double sigma = config.sigma;
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.add_meta("sigma", format_double(sigma));
  outcome.report.columns = {"n",    "a",          "reps",     "ks_distance",
                            "mean_ratio", "tail_freq", "pass"};
  double prev_ks = -1.0;
  bool monotone = true;
  double last_ks = 1.0;
  for (std::size_t ci = 0; ci < config.n_grid.size(); ++ci) {
    const int n = config.n_grid[ci];
    const double a = sigma * sigma * n;  // -log p in the exponential case
    AmsConfig ams_cfg;
    ams_cfg.n = n;
    ams_cfg.k = 1;
    ams_cfg.threshold = a;
    ams_cfg.expected_p_hint = std::exp(-a);
    std::vector<double> log_ratio(config.reps);
    stats::parallel_for_index(config.reps, config.workers, [&](std::uint64_t rep) {
      const AmsResult r = run_ams(ams_cfg, expo, config.seed,
                                  stream_for(static_cast<std::uint32_t>(ci), rep));
      log_ratio[rep] = r.log_estimate + a;  // log(p_hat / p)
    });
    // KS against Normal(-sigma^2/2, sigma) on the log scale (KS distance is
    // invariant under the monotone exp transform)
    std::vector<double> sorted = log_ratio;
    const double mu = -0.5 * sigma * sigma;
    const auto ks = stats::ks_test(
        sorted, [&](double x) { return stats::normal_cdf((x - mu) / sigma); });
    double mean_ratio = 0.0;
    std::uint64_t tail = 0;
    for (double lr : log_ratio) {
      const double ratio = std::exp(lr);
      mean_ratio += ratio;
      if (config.eps > 0.0 && std::abs(ratio - 1.0) >= config.eps) ++tail;
    }
    mean_ratio /= config.reps;
    if (prev_ks >= 0.0 && ks.distance > prev_ks) monotone = false;
    prev_ks = ks.distance;
    last_ks = ks.distance;
    outcome.report.rows.push_back(
        {static_cast<std::int64_t>(n), a, static_cast<std::int64_t>(config.reps),
         ks.distance, mean_ratio,
         static_cast<double>(tail) / config.reps, std::string()});
  }
  outcome.passed = monotone && last_ks < config.ks_limit;
  // mark the aggregate verdict on the last row
  if (!outcome.report.rows.empty())
    outcome.report.rows.back().back() =
        static_cast<std::int64_t>(outcome.passed ? 1 : 0);
  finish_report(outcome.report, start);
  return outcome;
}

// ---- compare ----------------------------------------------------------------------

ExperimentOutcome run_compare(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedTarget target = resolve_target(config);
  const double p = target.p;
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.columns = {"estimator", "n",        "reps",   "mean",
                            "se",        "n_var",    "n_var_ref", "tail_hi",
                            "tail_lo",   "expected_work"};
  std::uint32_t cell = 0;
  for (EstimatorKind est :
       {EstimatorKind::ams, EstimatorKind::crude, EstimatorKind::fixed}) {
    for (int n : config.n_grid) {
      const auto samples = sample_estimator(config, est, n, cell++);
      const auto mv = stats::mean_var(samples);
      std::uint64_t hi = 0, lo = 0;
      if (config.eps > 0.0) {
        for (double e : samples) {
          if (e - p >= config.eps) ++hi;
          if (e - p <= -config.eps) ++lo;
        }
      }
      double n_var_ref = 0.0;
      double work = 0.0;
      switch (est) {
        case EstimatorKind::ams:
          n_var_ref = -p * p * std::log(p);
          work = -n * std::log(p);
          break;
        case EstimatorKind::crude:
          n_var_ref = p * (1.0 - p);
          work = n;
          break;
        case EstimatorKind::fixed: {
          const int N = config.levels;
          n_var_ref = p * p * N * (std::pow(p, -1.0 / N) - 1.0);
          work = static_cast<double>(N) * n;
          break;
        }
      }
      outcome.report.rows.push_back(
          {to_string(est), static_cast<std::int64_t>(n),
           static_cast<std::int64_t>(config.reps), mv.mean,
           std::sqrt(mv.variance / config.reps), n * mv.variance, n_var_ref,
           static_cast<double>(hi) / config.reps,
           static_cast<double>(lo) / config.reps, work});
    }
  }
  finish_report(outcome.report, start);
  return outcome;
}

// ---- laplace-verify ----------------------------------------------------------------

ExperimentOutcome run_laplace_verify(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedTarget target = resolve_target(config);
  const double a = target.threshold;
  ExperimentOutcome outcome;
  outcome.report = base_report(config);
  outcome.report.columns = {"row",  "n",    "k",    "lambda", "value_a",
                            "value_b", "gap", "detail"};
  auto add = [&](const std::string& row, int n, int k, double lam, Cell a_val,
                 Cell b_val, double gap, const std::string& detail) {
    outcome.report.rows.push_back({row, static_cast<std::int64_t>(n),
                                   static_cast<std::int64_t>(k), lam,
                                   std::move(a_val), std::move(b_val), gap,
                                   detail});
  };

  for (int n : config.n_grid) {
    for (double lam : config.lambda_grid) {
      // k = 1: closed form vs ODE route
      const double closed =
          laplace::gamma_transform(n, 1, lam, 0.0, a, laplace::GammaRoute::closed)
              .value;
      const double ode1 =
          laplace::gamma_transform(n, 1, lam, 0.0, a, laplace::GammaRoute::ode)
              .value;
      add("route_k1", n, 1, lam, closed, ode1, std::abs(closed - ode1), "");

      if (config.k >= 2 && n > config.k) {
        // functional-equation residual for the ODE-route Gamma
        const auto sol = laplace::characteristic_solution(n, config.k, lam);
        const double res = laplace::functional_equation_residual(
            n, config.k, lam, a,
            [&](double x) { return laplace::gamma_from_solution(sol, x, a); });
        add("residual", n, config.k, lam, res, 0.0, res, "");

        // root gaps against the limit points and coefficient limits
        double worst_root = 0.0;
        for (int l = 0; l < config.k; ++l) {
          const std::complex<double> lim =
              1.0 - std::exp(-lam) *
                        std::exp(std::complex<double>(0.0, 2.0 * M_PI * l / config.k));
          worst_root = std::max(
              worst_root, std::abs(sol.roots[l] / static_cast<double>(n) - lim));
        }
        double max_minor = 0.0;
        for (int l = 1; l < config.k; ++l)
          max_minor = std::max(max_minor, std::abs(sol.coefficients[l]));
        add("roots", n, config.k, lam, worst_root, 0.0, worst_root, "");
        add("gamma_coeff", n, config.k, lam, std::abs(sol.coefficients[0] - 1.0),
            max_minor, std::abs(sol.coefficients[0] - 1.0), "");

        // scaled log-Laplace against the limit
        const double s = laplace::scaled_log_laplace(n, config.k, lam, target.p);
        const double lim = rates::lambda(lam, target.p);
        add("scaled_log_laplace", n, config.k, lam, s, lim,
            std::abs(s - lim), "");
      }
    }
  }
  finish_report(outcome.report, start);
  return outcome;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::ldp_slope: return run_ldp_slope(config);
    case ExperimentKind::unbiasedness: return run_unbiasedness(config);
    case ExperimentKind::clt: return run_clt(config);
    case ExperimentKind::poisson_gof: return run_poisson_gof(config);
    case ExperimentKind::lognormal: return run_lognormal(config);
    case ExperimentKind::laplace_verify: return run_laplace_verify(config);
    case ExperimentKind::compare: return run_compare(config);
  }
  throw domain_error("unknown experiment kind");
}

}  // namespace ams::bench
