#include "ams/baselines.hpp"

#include <cmath>

#include "ams/errors.hpp"
#include "ams/kernels.hpp"

namespace ams {

namespace {

constexpr std::size_t kBatchBlocks = 256;  // 1024 draws per refill

// Draws `count` samples from L(X | X > floor) and returns #{v > threshold}.
// Batched through the kernels; sequence (stream, seq_id) supplies the draws.
std::size_t count_conditional_exceedances(const Distribution& dist, double floor,
                                          double threshold, int count,
                                          std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t seq_id) {
  const std::uint64_t key[2] = {seed, stream};
  const bool exponential = dist.unit_exponential();
  std::uint64_t raw[4 * kBatchBlocks];
  double vals[4 * kBatchBlocks];
  std::size_t hits = 0;
  int produced = 0;
  std::uint64_t block = 0;
  while (produced < count) {
    const int want = count - produced;
    const std::size_t blocks =
        std::min(kBatchBlocks, static_cast<std::size_t>((want + 3) / 4));
    const std::size_t m = std::min(static_cast<std::size_t>(want), 4 * blocks);
    kernels::philox_fill(key, block, seq_id, rng_domain::replica, raw, blocks);
    block += blocks;
    if (exponential) {
      kernels::u64_to_exponential(raw, vals, m);
      for (std::size_t i = 0; i < m; ++i) vals[i] += floor;
      hits += kernels::count_greater(vals, m, threshold);
    } else {
      kernels::u64_to_unit(raw, vals, m);
      for (std::size_t i = 0; i < m; ++i) {
        // u == 0 maps to the floor itself, below any threshold > floor
        vals[i] = vals[i] > 0.0 ? dist.conditional_quantile(floor, vals[i])
                                : floor;
      }
      hits += kernels::count_greater(vals, m, threshold);
    }
    produced += static_cast<int>(m);
  }
  return hits;
}

}  // namespace

double crude_mc(int n, const Distribution& dist, double a, std::uint64_t seed,
                std::uint64_t stream) {
  if (n < 1) throw domain_error("crude_mc: n must be >= 1");
  auto [lo, hi] = dist.support();
  if (a < lo) return 1.0;
  const std::size_t hits = count_conditional_exceedances(
      dist, /*floor=*/0.0, a, n, seed, stream, /*seq_id=*/0);
  return static_cast<double>(hits) / n;
}

void FixedLevelPlan::validate() const {
  if (levels.empty()) throw domain_error("FixedLevelPlan: no levels");
  double prev = 0.0;
  for (double a : levels) {
    if (!(a > prev))
      throw domain_error("FixedLevelPlan: levels must be strictly increasing");
    prev = a;
  }
}

FixedLevelPlan optimal_levels(const Distribution& dist, double a, int N) {
  if (N < 1) throw domain_error("optimal_levels: N must be >= 1");
  const double p = 1.0 - dist.cdf(a);
  if (!(p > 0.0 && p < 1.0))
    throw domain_error("optimal_levels: P(X > a) must lie in (0,1)");
  FixedLevelPlan plan;
  plan.per_level_target = std::pow(p, 1.0 / N);
  plan.levels.resize(N);
  for (int i = 1; i < N; ++i) {
    plan.levels[i - 1] =
        dist.inverse_cdf(1.0 - std::pow(p, static_cast<double>(i) / N));
  }
  plan.levels[N - 1] = a;
  plan.validate();
  return plan;
}

FixedSplitResult run_fixed_splitting(int n, const FixedLevelPlan& plan,
                                     const Distribution& dist,
                                     std::uint64_t seed, std::uint64_t stream) {
  if (n < 1) throw domain_error("run_fixed_splitting: n must be >= 1");
  plan.validate();
  FixedSplitResult result;
  result.stage_counts.reserve(plan.stages());
  double estimate = 1.0;
  double floor = 0.0;
  for (int i = 0; i < plan.stages(); ++i) {
    const std::size_t hits = count_conditional_exceedances(
        dist, floor, plan.levels[i], n, seed, stream,
        /*seq_id=*/static_cast<std::uint64_t>(i));
    result.stage_counts.push_back(static_cast<int>(hits));
    estimate *= static_cast<double>(hits) / n;
    if (hits == 0) {
      result.zero_stage = true;  // a legitimate sample of the estimator
      estimate = 0.0;
    }
    floor = plan.levels[i];
  }
  result.estimate = estimate;
  return result;
}

}  // namespace ams
