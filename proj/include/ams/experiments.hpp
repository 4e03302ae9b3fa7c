#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ams/dist.hpp"
#include "ams/report.hpp"

namespace ams::bench {

// Seeded, reproducible experiment harness. Replication r of cell c always
// draws from the counter stream (seed, c << 32 | r), so reports are
// byte-identical across re-runs and worker counts.

enum class ExperimentKind {
  ldp_slope,
  unbiasedness,
  clt,
  poisson_gof,
  lognormal,
  laplace_verify,
  compare,
};

enum class EstimatorKind { ams, crude, fixed };

ExperimentKind parse_kind(const std::string& name);
EstimatorKind parse_estimator(const std::string& name);
std::string to_string(ExperimentKind kind);
std::string to_string(EstimatorKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::compare;
  EstimatorKind estimator = EstimatorKind::ams;

  std::vector<int> n_grid;
  int k = 1;
  double p = 0.0;          // target probability; 0 means derive from threshold
  double threshold = 0.0;  // a; used when p is not given
  std::string dist = "exponential";
  double pareto_alpha = 2.0;
  int levels = 1;          // N for fixed-level splitting
  std::vector<double> lambda_grid;
  double eps = 0.0;
  double sigma = 0.0;      // lognormal regime parameter
  std::uint64_t reps = 1;  // M
  std::uint64_t seed = 1;
  unsigned workers = 0;    // 0: hardware concurrency

  std::string out;             // output path ("" or "-": stdout)
  std::string format = "csv";  // csv | json
  bool check = false;          // exit 4 on statistical failure

  // statistical acceptance knobs (config fields, not hard-coded)
  double alpha = 0.01;          // significance for GOF / KS tests
  double se_multiplier = 4.0;   // mean checks
  double slope_tolerance = 0.20;
  double var_tolerance = 0.10;
  double ks_limit = 0.02;       // lognormal terminal KS bound

  void validate() const;
};

struct ResolvedTarget {
  std::unique_ptr<Distribution> dist;
  double threshold = 0.0;
  double p = 0.0;
};

/// Fill in the (distribution, threshold, probability) triple from whichever
/// of p / threshold the config provides.
ResolvedTarget resolve_target(const ExperimentConfig& config);

struct ExperimentOutcome {
  Report report;
  bool passed = true;  // statistical checks, when the experiment defines any
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

ExperimentOutcome run_ldp_slope(const ExperimentConfig& config);
ExperimentOutcome run_unbiasedness(const ExperimentConfig& config);
ExperimentOutcome run_clt(const ExperimentConfig& config);
ExperimentOutcome run_poisson_gof(const ExperimentConfig& config);
ExperimentOutcome run_lognormal(const ExperimentConfig& config);
ExperimentOutcome run_laplace_verify(const ExperimentConfig& config);
ExperimentOutcome run_compare(const ExperimentConfig& config);

/// Per-replication estimator samples for one cell, fanned out over the
/// worker pool. Exposed for tests and the acceptance suite.
std::vector<double> sample_estimator(const ExperimentConfig& config,
                                     EstimatorKind estimator, int n,
                                     std::uint32_t cell);

}  // namespace ams::bench
