#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ams/baselines.hpp"
#include "ams/errors.hpp"
#include "ams/experiments.hpp"
#include "ams/rates.hpp"
#include "ams/report.hpp"
#include "ams/rng.hpp"
#include "ams/splitting.hpp"

namespace {

using ams::bench::Cell;
using ams::bench::ExperimentConfig;
using ams::bench::Report;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--n", cfg.n_grid, "replica counts (grid)");
  cmd->add_option("--k", cfg.k, "replicas killed per iteration");
  cmd->add_option("--p", cfg.p, "target probability in (0,1)");
  cmd->add_option("--threshold", cfg.threshold, "threshold a (with --dist)");
  cmd->add_option("--dist", cfg.dist, "distribution: exponential | pareto");
  cmd->add_option("--pareto-alpha", cfg.pareto_alpha, "Pareto tail index");
  cmd->add_option("--levels", cfg.levels, "fixed-splitting level count N");
  cmd->add_option("--lambda", cfg.lambda_grid, "Laplace parameter grid");
  cmd->add_option("--eps", cfg.eps, "deviation half-width");
  cmd->add_option("--sigma", cfg.sigma, "lognormal regime parameter");
  cmd->add_option("--reps", cfg.reps, "replication count M");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "csv | json");
  cmd->add_flag("--check", cfg.check, "exit 4 when the statistical check fails");
  cmd->add_option("--alpha", cfg.alpha, "test significance level");
  cmd->add_option("--se-multiplier", cfg.se_multiplier, "mean-test band width");
  cmd->add_option("--slope-tolerance", cfg.slope_tolerance, "slope relative tolerance");
  cmd->add_option("--var-tolerance", cfg.var_tolerance, "variance relative tolerance");
  cmd->add_option("--ks-limit", cfg.ks_limit, "terminal KS bound");
  cmd->set_config("--config", "", "flat key=value config file (CLI overrides)");
}

int run_experiment_command(const ExperimentConfig& cfg) {
  const auto outcome = ams::bench::run_experiment(cfg);
  ams::bench::write_report(outcome.report, cfg.out, cfg.format);
  if (cfg.check && !outcome.passed) return kExitCheckFailed;
  return kExitOk;
}

int run_ams_run(const ExperimentConfig& cfg, bool record_levels, double x) {
  const auto target = ams::bench::resolve_target(cfg);
  if (cfg.n_grid.size() != 1)
    throw ams::domain_error("ams-run: provide exactly one --n");
  ams::AmsConfig ams_cfg;
  ams_cfg.n = cfg.n_grid[0];
  ams_cfg.k = cfg.k;
  ams_cfg.threshold = target.threshold;
  ams_cfg.initial_level = x;
  ams_cfg.expected_p_hint = target.p;
  ams_cfg.record_levels = record_levels;

  Report report;
  report.add_meta("experiment", "ams-run");
  report.add_meta("seed", std::to_string(cfg.seed));
  report.columns = {"rep",      "iterations",   "surviving_count",
                    "surviving_fraction", "estimate", "log_estimate"};
  if (record_levels) report.columns.push_back("levels");
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    const auto r = ams::run_ams(ams_cfg, *target.dist, cfg.seed,
                                ams::stream_for(0, rep));
    std::vector<Cell> row = {static_cast<std::int64_t>(rep),
                             static_cast<std::int64_t>(r.iterations),
                             static_cast<std::int64_t>(r.surviving_count),
                             r.surviving_fraction(), r.estimate,
                             r.log_estimate};
    if (record_levels) {
      std::string levels;
      for (std::size_t i = 0; i < r.levels.size(); ++i) {
        if (i) levels += ';';
        levels += ams::bench::format_double(r.levels[i]);
      }
      row.emplace_back(std::move(levels));
    }
    report.rows.push_back(std::move(row));
  }
  ams::bench::write_report(report, cfg.out, cfg.format);
  return kExitOk;
}

int run_mc_run(const ExperimentConfig& cfg) {
  const auto target = ams::bench::resolve_target(cfg);
  if (cfg.n_grid.size() != 1)
    throw ams::domain_error("mc-run: provide exactly one --n");
  Report report;
  report.add_meta("experiment", "mc-run");
  report.add_meta("seed", std::to_string(cfg.seed));
  report.columns = {"rep", "estimate"};
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    const double est = ams::crude_mc(cfg.n_grid[0], *target.dist,
                                     target.threshold, cfg.seed,
                                     ams::stream_for(0, rep));
    report.rows.push_back({static_cast<std::int64_t>(rep), est});
  }
  ams::bench::write_report(report, cfg.out, cfg.format);
  return kExitOk;
}

int run_fixed_run(const ExperimentConfig& cfg) {
  const auto target = ams::bench::resolve_target(cfg);
  if (cfg.n_grid.size() != 1)
    throw ams::domain_error("fixed-run: provide exactly one --n");
  const auto plan =
      ams::optimal_levels(*target.dist, target.threshold, cfg.levels);
  Report report;
  report.add_meta("experiment", "fixed-run");
  report.add_meta("seed", std::to_string(cfg.seed));
  report.columns = {"rep", "estimate", "zero_stage"};
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    const auto r = ams::run_fixed_splitting(cfg.n_grid[0], plan, *target.dist,
                                            cfg.seed, ams::stream_for(0, rep));
    report.rows.push_back({static_cast<std::int64_t>(rep), r.estimate,
                           static_cast<std::int64_t>(r.zero_stage ? 1 : 0)});
  }
  ams::bench::write_report(report, cfg.out, cfg.format);
  return kExitOk;
}

int run_rate_eval(const ExperimentConfig& cfg, const std::string& rate,
                  const std::vector<double>& args) {
  namespace rates = ams::rates;
  Report report;
  report.add_meta("experiment", "rate-eval");
  report.columns = {"rate", "argument", "p", "N", "value", "in_domain"};
  const double p = cfg.p;
  auto emit = [&](const std::string& name, double arg, double value) {
    report.rows.push_back({name, arg, p, static_cast<std::int64_t>(cfg.levels),
                           value, static_cast<std::int64_t>(
                                      std::isfinite(value) ? 1 : 0)});
  };
  for (double arg : args) {
    if (rate == "I") emit(rate, arg, rates::rate_I(arg, p));
    else if (rate == "J") emit(rate, arg, rates::rate_J(arg, p));
    else if (rate == "Lambda") emit(rate, arg, rates::lambda(arg, p));
    else if (rate == "Lambda-star") emit(rate, arg, rates::lambda_star(arg, p));
    else if (rate == "Lambda-star-numeric")
      emit(rate, arg, rates::lambda_star_numeric(arg, p));
    else if (rate == "crude") emit(rate, arg, rates::rate_crude(arg, p));
    else if (rate == "fixed") emit(rate, arg, rates::rate_fixed_N(arg, p, cfg.levels));
    else if (rate == "fixed-bound")
      emit(rate, arg, rates::fixed_upper_bound(arg, p, cfg.levels));
    else if (rate == "D") emit(rate, arg, rates::comparison_D(arg, p));
    else if (rate == "dD-dp") emit(rate, arg, rates::comparison_D_partial_p(arg, p));
    else if (rate == "I-prime")
      emit(rate, arg, rates::rate_I_derivatives(arg, p).first);
    else if (rate == "I-second")
      emit(rate, arg, rates::rate_I_derivatives(arg, p).second);
    else if (rate == "small-p") {
      const auto s = rates::small_p_relative_rates(arg, p);
      emit("small-p-ams-exact", arg, s.ams_exact);
      emit("small-p-ams-asymptotic", arg, s.ams_asymptotic);
      emit("small-p-crude-exact", arg, s.crude_exact);
      emit("small-p-crude-asymptotic", arg, s.crude_asymptotic);
    } else {
      throw ams::domain_error("rate-eval: unknown rate " + rate);
    }
  }
  ams::bench::write_report(report, cfg.out, cfg.format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multilevel splitting rare-event benchmark"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  bool record_levels = false;
  double initial_level = 0.0;
  std::string rate_name = "I";
  std::vector<double> rate_args;

  auto* ams_run = app.add_subcommand("ams-run", "run the AMS estimator");
  add_common_options(ams_run, cfg);
  ams_run->add_flag("--record-levels", record_levels, "store level trajectories");
  ams_run->add_option("--x", initial_level, "initial level x");

  auto* mc_run = app.add_subcommand("mc-run", "run the crude Monte-Carlo estimator");
  add_common_options(mc_run, cfg);

  auto* fixed_run = app.add_subcommand("fixed-run", "run fixed-level splitting");
  add_common_options(fixed_run, cfg);

  auto* rate_eval = app.add_subcommand("rate-eval", "evaluate rate functions");
  add_common_options(rate_eval, cfg);
  rate_eval->add_option("--rate", rate_name,
                        "I | J | Lambda | Lambda-star | Lambda-star-numeric | "
                        "crude | fixed | fixed-bound | D | dD-dp | I-prime | "
                        "I-second | small-p");
  rate_eval->add_option("--at", rate_args, "evaluation points")->required();

  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"ldp-slope", "tail-deviation decay rates vs the rate function"},
      {"poisson-gof", "k=1 iteration-count law against Poisson"},
      {"lognormal", "k=1 lognormal regime (-log p = sigma^2 n)"},
      {"compare", "AMS vs crude vs fixed-level summaries"},
      {"laplace-verify", "Laplace-transform route agreement and limits"},
      {"unbiasedness", "estimator mean against p"},
      {"clt", "n Var(p_hat) against -p^2 log p"},
  };
  for (const auto& [name, desc] : experiments)
    add_common_options(app.add_subcommand(name, desc), cfg);
  app.get_subcommand("ldp-slope")
      ->add_option_function<std::string>(
          "--estimator",
          [&cfg](const std::string& v) { cfg.estimator = ams::bench::parse_estimator(v); },
          "ams | crude");
  app.get_subcommand("unbiasedness")
      ->add_option_function<std::string>(
          "--estimator",
          [&cfg](const std::string& v) { cfg.estimator = ams::bench::parse_estimator(v); },
          "ams | crude | fixed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
                   e.get_name() == "CallForVersion"
               ? kExitOk
               : kExitConfig;
  }

  try {
    if (ams_run->parsed()) return run_ams_run(cfg, record_levels, initial_level);
    if (mc_run->parsed()) return run_mc_run(cfg);
    if (fixed_run->parsed()) return run_fixed_run(cfg);
    if (rate_eval->parsed()) return run_rate_eval(cfg, rate_name, rate_args);
    for (const auto& [name, desc] : experiments) {
      if (app.get_subcommand(name)->parsed()) {
        cfg.kind = ams::bench::parse_kind(name);
        return run_experiment_command(cfg);
      }
    }
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const ams::nontermination_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ams::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ams::domain_error& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
