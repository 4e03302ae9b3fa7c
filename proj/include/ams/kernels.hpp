#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

// Batch kernels used by the samplers and estimators. Every kernel has a
// scalar reference implementation and (on x86-64) an AVX2 variant selected
// once at startup. The two paths are bit-identical by construction: the
// scalar code is the operation-for-operation specification of the vector
// lanes, so the equivalence tests compare outputs with memcmp.

namespace ams::kernels {

enum class Isa { scalar, avx2 };

/// The instruction set the dispatched kernels currently use.
Isa active_isa();

/// True if the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available();

/// Override dispatch (tests only). std::nullopt restores auto-detection.
/// Forcing avx2 on a machine without it throws.
void force_isa(std::optional<Isa> isa);

// ---- Philox4x64-10 counter-based generator -------------------------------
//
// Counter layout: 256 bits as four 64-bit words {c0, c1, c2, c3}. c0 is the
// block index within a sequence and the remaining words address independent
// sequences; key = {seed, stream}. Word order and constants follow the
// Random123 convention (the same one numpy.random.Philox implements), so the
// known-answer tests are pinned against an independent implementation.

/// One block: out[0..3] from counter {c0,c1,c2,c3} and key {k0,k1}.
void philox_block(const std::uint64_t key[2], const std::uint64_t ctr[4],
                  std::uint64_t out[4]);

/// Four independent blocks with per-lane c0/c1 and shared c2 (c3 = 0).
/// Block i writes out[4*i .. 4*i+3].
void philox_blocks4(const std::uint64_t key[2], const std::uint64_t c0[4],
                    const std::uint64_t c1[4], std::uint64_t c2,
                    std::uint64_t* out);

/// nblocks consecutive blocks of one sequence: counter {c0_start + i, c1, c2, 0}.
void philox_fill(const std::uint64_t key[2], std::uint64_t c0_start,
                 std::uint64_t c1, std::uint64_t c2, std::uint64_t* out,
                 std::size_t nblocks);

// ---- Variate transforms ---------------------------------------------------

/// u = (x >> 11) * 2^-53, uniform on [0, 1).
void u64_to_unit(const std::uint64_t* in, double* out, std::size_t n);

/// E = -log(1 - u) with u as above; E = 0 exactly iff the top 53 bits are 0.
void u64_to_exponential(const std::uint64_t* in, double* out, std::size_t n);

/// Scalar reference for the log used by u64_to_exponential: natural log on
/// (0, 1], accurate to ~1 ulp. Exposed so tests can compare against libm.
double log_unit_ref(double t);

// ---- Reductions ------------------------------------------------------------

/// #{ i : x[i] > threshold }.
std::size_t count_greater(const double* x, std::size_t n, double threshold);

}  // namespace ams::kernels
