#include "ams/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ams/errors.hpp"

namespace ams {

void AmsConfig::validate() const {
  if (n < 2) throw domain_error("AmsConfig: n must be >= 2");
  if (k < 1 || k > n - 1)
    throw domain_error("AmsConfig: k must lie in {1,...,n-1}");
  if (!(initial_level < threshold))
    throw domain_error("AmsConfig: initial level must be below the threshold");
}

std::uint64_t AmsConfig::iteration_cap() const {
  if (max_iterations > 0) return max_iterations;
  if (expected_p_hint > 0.0 && expected_p_hint < 1.0) {
    const double per = std::ceil(-n * std::log(expected_p_hint) / k);
    return static_cast<std::uint64_t>(100.0 * per) + 100;
  }
  return 100000000ull;
}

Estimate estimate_from_counts(int n, int k, std::uint64_t iterations,
                              int surviving_count) {
  if (n < 2 || k < 1 || k > n - 1)
    throw domain_error("estimate_from_counts: invalid (n,k)");
  if (surviving_count < n - k + 1 || surviving_count > n)
    throw domain_error(
        "estimate_from_counts: surviving count outside {n-k+1,...,n}");
  const double c = static_cast<double>(surviving_count) / n;
  const double ratio = 1.0 - static_cast<double>(k) / n;
  const double log_value =
      std::log(c) + static_cast<double>(iterations) *
                        std::log1p(-static_cast<double>(k) / n);
  const double value = c * std::pow(ratio, static_cast<double>(iterations));
  return {value, log_value};
}

namespace detail {

namespace {

struct Replica {
  double value;
  std::uint32_t id;

  bool operator>(const Replica& o) const {
    // total order (value, id); ties in value are broken by replica id
    return value != o.value ? value > o.value : id > o.id;
  }
};

}  // namespace

AmsResult run_ams_heap(const AmsConfig& config, const Distribution& dist,
                       std::uint64_t seed, std::uint64_t stream) {
  const int n = config.n;
  const int k = config.k;
  const double a = config.threshold;
  const double x = config.initial_level;
  const bool exponential = dist.unit_exponential();

  if (dist.cdf(a) >= 1.0 || dist.cdf(x) >= 1.0)
    throw domain_error("run_ams: P(X > a | X > x) is not positive");

  std::vector<RandomSequence> seqs;
  seqs.reserve(n);
  for (int i = 0; i < n; ++i) seqs.emplace_back(seed, stream, i);

  auto draw_above = [&](double floor, int replica) {
    for (;;) {
      double v;
      if (exponential) {
        v = floor + seqs[replica].next_exponential();
      } else {
        v = dist.conditional_quantile(floor, seqs[replica].next_open_unit());
      }
      if (v > floor) return v;  // redraw on a floating-point tie at the floor
    }
  };

  const auto greater = std::greater<>{};
  std::vector<Replica> heap;
  heap.reserve(n);
  for (int i = 0; i < n; ++i) {
    heap.push_back({draw_above(x, i), static_cast<std::uint32_t>(i)});
  }
  std::make_heap(heap.begin(), heap.end(), greater);

  const std::uint64_t cap = config.iteration_cap();
  std::vector<Replica> killed(k);
  AmsResult result;
  result.n = n;

  for (;;) {
    // peek the k lowest in order; the k-th is the level Z
    for (int j = 0; j < k; ++j) {
      std::pop_heap(heap.begin(), heap.end() - j, greater);
      killed[j] = *(heap.end() - 1 - j);
    }
    const double level = killed[k - 1].value;
    if (config.record_levels) result.levels.push_back(level);

    if (level >= a) {
      // terminal ensemble keeps the k lowest; restore them
      for (int j = k - 1; j >= 0; --j) {
        *(heap.end() - 1 - j) = killed[j];
        std::push_heap(heap.begin(), heap.end() - j, greater);
      }
      break;
    }
    if (result.iterations >= cap)
      throw nontermination_error(
          "run_ams: iteration cap " + std::to_string(cap) +
          " exceeded at level " + std::to_string(level));

    for (int j = 0; j < k; ++j) {
      *(heap.end() - 1 - j) = {draw_above(level, static_cast<int>(killed[j].id)),
                               killed[j].id};
    }
    for (int j = k - 1; j >= 0; --j) std::push_heap(heap.begin(), heap.end() - j, greater);
    ++result.iterations;
  }

  int surviving = 0;
  for (const auto& r : heap) surviving += r.value >= a ? 1 : 0;
  result.surviving_count = surviving;
  const Estimate est = estimate_from_counts(n, k, result.iterations, surviving);
  result.estimate = est.value;
  result.log_estimate = est.log_value;
  return result;
}

}  // namespace detail

AmsResult run_ams(const AmsConfig& config, const Distribution& dist,
                  std::uint64_t seed, std::uint64_t stream) {
  config.validate();
  if (config.k == 1 && !config.record_levels)
    return detail::run_ams_race(config, dist, seed, stream);
  return detail::run_ams_heap(config, dist, seed, stream);
}

std::pair<double, AmsResult> run_ams_log(const AmsConfig& config,
                                         const Distribution& dist,
                                         std::uint64_t seed,
                                         std::uint64_t stream) {
  AmsResult r = run_ams(config, dist, seed, stream);
  return {r.log_estimate, std::move(r)};
}

}  // namespace ams
