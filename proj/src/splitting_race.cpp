#include <cstdint>

#include "ams/errors.hpp"
#include "ams/kernels.hpp"
#include "ams/splitting.hpp"

// k = 1 schedule: with one replica killed per iteration, the killed replica
// is the minimum and is resampled above its own value, so each replica walks
// upward independently; the interacting loop is the merge of those walks in
// increasing order. J is therefore the total number of per-replica positions
// strictly below the threshold, and every replica ends at its first position
// >= a. Because replica draws are counter-addressed, this schedule consumes
// exactly the draws the reference heap path consumes and returns the same
// result bit for bit.

namespace ams::detail {

namespace {

constexpr int kLanes = 4;
constexpr int kWordsPerBlock = 4;

AmsResult run_race_exponential(const AmsConfig& config, std::uint64_t seed,
                               std::uint64_t stream) {
  const int n = config.n;
  const double a = config.threshold;
  const double x = config.initial_level;
  const std::uint64_t cap = config.iteration_cap();
  const std::uint64_t key[2] = {seed, stream};

  std::uint64_t c0[kLanes];  // block index within the lane's sequence
  std::uint64_t c1[kLanes];  // sequence id (replica), or scratch padding
  double pos[kLanes];
  std::uint64_t count[kLanes];
  bool active[kLanes];

  int next_replica = 0;
  int remaining = n;
  auto assign = [&](int lane) {
    if (next_replica < n) {
      c0[lane] = 0;
      c1[lane] = static_cast<std::uint64_t>(next_replica++);
      pos[lane] = x;
      count[lane] = 0;
      active[lane] = true;
    } else {
      // padding: an unused sequence id, never observed
      c0[lane] = 0;
      c1[lane] = static_cast<std::uint64_t>(n + lane);
      active[lane] = false;
    }
  };
  for (int lane = 0; lane < kLanes; ++lane) assign(lane);

  std::uint64_t total = 0;
  std::uint64_t raw[kLanes * kWordsPerBlock];
  double exps[kLanes * kWordsPerBlock];

  while (remaining > 0) {
    kernels::philox_blocks4(key, c0, c1, rng_domain::replica, raw);
    kernels::u64_to_exponential(raw, exps, kLanes * kWordsPerBlock);
    for (int lane = 0; lane < kLanes; ++lane) {
      if (!active[lane]) continue;
      bool finished = false;
      for (int w = 0; w < kWordsPerBlock; ++w) {
        const double e = exps[kWordsPerBlock * lane + w];
        if (e == 0.0) continue;               // zero draw, redrawn
        const double v = pos[lane] + e;
        if (v <= pos[lane]) continue;         // rounding tie, redrawn
        pos[lane] = v;
        if (v >= a) {
          finished = true;
          break;
        }
        ++count[lane];
      }
      if (finished) {
        total += count[lane];
        if (total > cap)
          throw nontermination_error("run_ams: iteration cap exceeded");
        --remaining;
        assign(lane);
      } else {
        if (count[lane] > cap)
          throw nontermination_error("run_ams: iteration cap exceeded");
        ++c0[lane];
      }
    }
  }

  AmsResult result;
  result.n = n;
  result.iterations = total;
  result.surviving_count = n;  // every replica stops at a value >= a
  const Estimate est = estimate_from_counts(n, 1, total, n);
  result.estimate = est.value;
  result.log_estimate = est.log_value;
  return result;
}

AmsResult run_race_generic(const AmsConfig& config, const Distribution& dist,
                           std::uint64_t seed, std::uint64_t stream) {
  const int n = config.n;
  const double a = config.threshold;
  const double x = config.initial_level;
  const std::uint64_t cap = config.iteration_cap();

  std::uint64_t total = 0;
  for (int r = 0; r < n; ++r) {
    RandomSequence seq(seed, stream, static_cast<std::uint64_t>(r));
    double pos = x;
    for (;;) {
      const double v = dist.conditional_quantile(pos, seq.next_open_unit());
      if (v <= pos) continue;
      pos = v;
      if (v >= a) break;
      ++total;
      if (total > cap)
        throw nontermination_error("run_ams: iteration cap exceeded");
    }
  }

  AmsResult result;
  result.n = n;
  result.iterations = total;
  result.surviving_count = n;
  const Estimate est = estimate_from_counts(n, 1, total, n);
  result.estimate = est.value;
  result.log_estimate = est.log_value;
  return result;
}

}  // namespace

AmsResult run_ams_race(const AmsConfig& config, const Distribution& dist,
                       std::uint64_t seed, std::uint64_t stream) {
  if (dist.cdf(config.threshold) >= 1.0 || dist.cdf(config.initial_level) >= 1.0)
    throw domain_error("run_ams: P(X > a | X > x) is not positive");
  if (dist.unit_exponential())
    return run_race_exponential(config, seed, stream);
  return run_race_generic(config, dist, seed, stream);
}

}  // namespace ams::detail
