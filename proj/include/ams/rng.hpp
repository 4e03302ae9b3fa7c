#pragma once

#include <cstdint>

#include "ams/kernels.hpp"

namespace ams {

// Counter-based random streams (Philox4x64-10). A stream is addressed by
// (seed, stream); within a stream, independent sequences are addressed by
// (sequence, domain). Draw t of a sequence is word t%4 of block t/4, so any
// consumer — one draw at a time or in batches — sees the same values at the
// same draw indices. This is what makes the replication fan-out and the
// optimized sampling schedules reproducible.

namespace rng_domain {
inline constexpr std::uint64_t replica = 0;  // per-replica draws inside a run
inline constexpr std::uint64_t scratch = 1;  // padding lanes, never observed
}  // namespace rng_domain

/// Stream id for replication `rep` of experiment cell `cell`.
inline std::uint64_t stream_for(std::uint64_t cell, std::uint64_t rep) {
  return (cell << 32) | rep;
}

class RandomSequence {
 public:
  RandomSequence(std::uint64_t seed, std::uint64_t stream,
                 std::uint64_t sequence = 0,
                 std::uint64_t domain = rng_domain::replica)
      : key_{seed, stream}, c1_(sequence), c2_(domain) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      kernels::philox_fill(key_, block_, c1_, c2_, buf_, 1);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1): the zero draw (probability 2^-53) is redrawn.
  double next_open_unit() {
    for (;;) {
      const double u = next_unit();
      if (u > 0.0) return u;
    }
  }

  /// Standard exponential, strictly positive (zero draws are redrawn).
  double next_exponential() {
    for (;;) {
      const std::uint64_t x = next_u64();
      double e;
      kernels::u64_to_exponential(&x, &e, 1);
      if (e > 0.0) return e;
    }
  }

 private:
  std::uint64_t key_[2];
  std::uint64_t c1_, c2_;
  std::uint64_t block_ = 0;
  std::uint64_t buf_[4] = {};
  int pos_ = 4;
};

}  // namespace ams
