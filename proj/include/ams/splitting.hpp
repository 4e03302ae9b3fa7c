#pragma once

#include <cstdint>
#include <vector>

#include "ams/dist.hpp"
#include "ams/rng.hpp"

namespace ams {

// AMS(n, k; a, x): n interacting replicas; each iteration kills the k lowest,
// takes the k-th order statistic Z as the new level, and resamples the killed
// replicas from L(X | X > Z); stops once Z >= a. The estimator is
// C (1 - k/n)^J with J the iteration count and C the terminal fraction >= a.

struct AmsConfig {
  int n = 0;                    // replica count, >= 2
  int k = 0;                    // killed per iteration, in {1,...,n-1}
  double threshold = 0.0;       // a
  double initial_level = 0.0;   // x, must satisfy x < a
  std::uint64_t max_iterations = 0;  // 0: derived from expected_p_hint, else 1e8
  double expected_p_hint = 0.0; // optional rough guess of P(x), sizes the cap
  bool record_levels = false;   // store the Z^j trajectory (reference path only)

  void validate() const;
  std::uint64_t iteration_cap() const;
};

struct AmsResult {
  std::uint64_t iterations = 0;  // J
  int n = 0;
  int surviving_count = 0;       // n * C
  double estimate = 0.0;         // C (1 - k/n)^J
  double log_estimate = 0.0;     // log C + J log(1 - k/n)
  std::vector<double> levels;    // Z^1 < ... < Z^{J+1} when recorded

  double surviving_fraction() const {
    return static_cast<double>(surviving_count) / n;
  }
};

struct Estimate {
  double value;
  double log_value;
};

/// Eq-(5) evaluation from counts; value is C (1-k/n)^J exactly, log_value is
/// the log-space accumulation log C + J log1p(-k/n).
Estimate estimate_from_counts(int n, int k, std::uint64_t iterations,
                              int surviving_count);

/// One run. `stream` identifies the replication; replica i draws from the
/// counter sequence (stream, i), so results do not depend on scheduling.
/// For k = 1 without level recording an equivalent merge-order schedule is
/// used; it consumes the same per-replica draws and returns bit-identical
/// results (equivalence-tested against the reference path).
AmsResult run_ams(const AmsConfig& config, const Distribution& dist,
                  std::uint64_t seed, std::uint64_t stream);

/// As run_ams, with the log-scale estimate surfaced.
std::pair<double, AmsResult> run_ams_log(const AmsConfig& config,
                                         const Distribution& dist,
                                         std::uint64_t seed,
                                         std::uint64_t stream);

namespace detail {
/// Reference interacting-ensemble implementation (ordered heap), all k.
AmsResult run_ams_heap(const AmsConfig& config, const Distribution& dist,
                       std::uint64_t seed, std::uint64_t stream);
/// k = 1 merge-order schedule; bit-identical to the reference path.
AmsResult run_ams_race(const AmsConfig& config, const Distribution& dist,
                       std::uint64_t seed, std::uint64_t stream);
}  // namespace detail

}  // namespace ams
