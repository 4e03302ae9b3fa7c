#include <atomic>

#include "ams/errors.hpp"
#include "ams/kernels.hpp"
#include "kernels_impl.hpp"

namespace ams::kernels {

namespace {

bool detect_avx2() {
#ifdef AMS_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> g_forced{-1};  // -1 auto, else static_cast<int>(Isa)

Isa resolve() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect_avx2() ? Isa::avx2 : Isa::scalar;
  return detected;
}

}  // namespace

bool avx2_available() { return detect_avx2(); }

Isa active_isa() { return resolve(); }

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    g_forced.store(-1, std::memory_order_relaxed);
    return;
  }
  if (*isa == Isa::avx2 && !detect_avx2())
    throw domain_error("force_isa: AVX2 not available on this CPU/build");
  g_forced.store(static_cast<int>(*isa), std::memory_order_relaxed);
}

void philox_block(const std::uint64_t key[2], const std::uint64_t ctr[4],
                  std::uint64_t out[4]) {
  detail::philox_block_scalar(key, ctr, out);
}

void philox_blocks4(const std::uint64_t key[2], const std::uint64_t c0[4],
                    const std::uint64_t c1[4], std::uint64_t c2,
                    std::uint64_t* out) {
#ifdef AMS_HAVE_AVX2
  if (resolve() == Isa::avx2)
    return detail::philox_blocks4_avx2(key, c0, c1, c2, out);
#endif
  detail::philox_blocks4_scalar(key, c0, c1, c2, out);
}

void philox_fill(const std::uint64_t key[2], std::uint64_t c0_start,
                 std::uint64_t c1, std::uint64_t c2, std::uint64_t* out,
                 std::size_t nblocks) {
  std::size_t i = 0;
#ifdef AMS_HAVE_AVX2
  if (resolve() == Isa::avx2) {
    for (; i + 4 <= nblocks; i += 4) {
      const std::uint64_t c0s[4] = {c0_start + i, c0_start + i + 1,
                                    c0_start + i + 2, c0_start + i + 3};
      const std::uint64_t c1s[4] = {c1, c1, c1, c1};
      detail::philox_blocks4_avx2(key, c0s, c1s, c2, out + 4 * i);
    }
  }
#endif
  for (; i < nblocks; ++i) {
    const std::uint64_t ctr[4] = {c0_start + i, c1, c2, 0};
    detail::philox_block_scalar(key, ctr, out + 4 * i);
  }
}

void u64_to_unit(const std::uint64_t* in, double* out, std::size_t n) {
#ifdef AMS_HAVE_AVX2
  if (resolve() == Isa::avx2) return detail::u64_to_unit_avx2(in, out, n);
#endif
  detail::u64_to_unit_scalar(in, out, n);
}

void u64_to_exponential(const std::uint64_t* in, double* out, std::size_t n) {
#ifdef AMS_HAVE_AVX2
  if (resolve() == Isa::avx2) return detail::u64_to_exponential_avx2(in, out, n);
#endif
  detail::u64_to_exponential_scalar(in, out, n);
}

std::size_t count_greater(const double* x, std::size_t n, double threshold) {
#ifdef AMS_HAVE_AVX2
  if (resolve() == Isa::avx2) return detail::count_greater_avx2(x, n, threshold);
#endif
  return detail::count_greater_scalar(x, n, threshold);
}

}  // namespace ams::kernels
