#pragma once

#include <cstdint>
#include <vector>

#include "ams/dist.hpp"
#include "ams/rng.hpp"

namespace ams {

// The two comparison estimators: the crude Monte-Carlo frequency and the
// non-adaptive multilevel splitting product over a fixed level sequence.

/// (1/n) #{X_m > a} over n i.i.d. draws.
double crude_mc(int n, const Distribution& dist, double a, std::uint64_t seed,
                std::uint64_t stream);

struct FixedLevelPlan {
  std::vector<double> levels;   // a_1 < ... < a_N = a (a_0 = 0 implicit)
  double per_level_target = 0;  // p^{1/N} for the optimal plan, else 0

  int stages() const { return static_cast<int>(levels.size()); }
  void validate() const;
};

/// Equal-conditional-probability plan: a_i = F^{-1}(1 - p^{i/N}) with
/// p = 1 - F(a); for the exponential law the levels are i a / N.
FixedLevelPlan optimal_levels(const Distribution& dist, double a, int N);

struct FixedSplitResult {
  double estimate = 0.0;
  bool zero_stage = false;       // some stage had no successes (estimate 0)
  std::vector<int> stage_counts; // successes per stage
};

/// prod_i (1/n) #{X^{(i)}_m > a_i} with stage i drawing n i.i.d. samples
/// from L(X | X > a_{i-1}); all N*n draws independent.
FixedSplitResult run_fixed_splitting(int n, const FixedLevelPlan& plan,
                                     const Distribution& dist,
                                     std::uint64_t seed, std::uint64_t stream);

}  // namespace ams
