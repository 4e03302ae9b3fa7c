#include <immintrin.h>

#include <cstdint>

#include "kernels_impl.hpp"

// AVX2 variants. Each kernel performs, lane for lane, the same IEEE
// operations as its scalar reference, so outputs are bit-identical.

namespace ams::kernels::detail {

namespace {

const __m256i kLow32 = _mm256_set1_epi64x(0xFFFFFFFFll);

// 64x64 -> high/low 64-bit products from 32-bit pieces.
inline void mulhilo4(__m256i a, __m256i b, __m256i& hi, __m256i& lo) {
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i x0 = _mm256_mul_epu32(a, b);        // alo*blo
  const __m256i x1 = _mm256_mul_epu32(a_hi, b);     // ahi*blo
  const __m256i x2 = _mm256_mul_epu32(a, b_hi);     // alo*bhi
  const __m256i x3 = _mm256_mul_epu32(a_hi, b_hi);  // ahi*bhi
  const __m256i mid = _mm256_add_epi64(
      _mm256_add_epi64(_mm256_srli_epi64(x0, 32), _mm256_and_si256(x1, kLow32)),
      _mm256_and_si256(x2, kLow32));
  hi = _mm256_add_epi64(
      _mm256_add_epi64(x3, _mm256_srli_epi64(mid, 32)),
      _mm256_add_epi64(_mm256_srli_epi64(x1, 32), _mm256_srli_epi64(x2, 32)));
  lo = _mm256_add_epi64(x0, _mm256_slli_epi64(_mm256_add_epi64(x1, x2), 32));
}

struct Ctr4 {
  __m256i c0, c1, c2, c3;
};

inline void philox_round4(Ctr4& c, __m256i k0, __m256i k1) {
  __m256i hi0, lo0, hi1, lo1;
  mulhilo4(_mm256_set1_epi64x(static_cast<long long>(kPhiloxM0)), c.c0, hi0, lo0);
  mulhilo4(_mm256_set1_epi64x(static_cast<long long>(kPhiloxM1)), c.c2, hi1, lo1);
  const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c.c1), k0);
  const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c.c3), k1);
  c.c0 = n0;
  c.c1 = lo1;
  c.c2 = n2;
  c.c3 = lo0;
}

inline void philox10_4(const std::uint64_t key[2], Ctr4& c) {
  __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(key[0]));
  __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(key[1]));
  const __m256i w0 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxW0));
  const __m256i w1 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxW1));
  for (int r = 0; r < 10; ++r) {
    if (r) {
      k0 = _mm256_add_epi64(k0, w0);
      k1 = _mm256_add_epi64(k1, w1);
    }
    philox_round4(c, k0, k1);
  }
}

}  // namespace

void philox_blocks4_avx2(const std::uint64_t key[2], const std::uint64_t c0[4],
                         const std::uint64_t c1[4], std::uint64_t c2,
                         std::uint64_t* out) {
  Ctr4 c;
  c.c0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c0));
  c.c1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c1));
  c.c2 = _mm256_set1_epi64x(static_cast<long long>(c2));
  c.c3 = _mm256_setzero_si256();
  philox10_4(key, c);
  // lanes are blocks: out[4i+j] = word j of block i
  alignas(32) std::uint64_t w0[4], w1[4], w2[4], w3[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(w0), c.c0);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w1), c.c1);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w2), c.c2);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w3), c.c3);
  for (int i = 0; i < 4; ++i) {
    out[4 * i + 0] = w0[i];
    out[4 * i + 1] = w1[i];
    out[4 * i + 2] = w2[i];
    out[4 * i + 3] = w3[i];
  }
}

namespace {

inline __m256d unit_from_u64(__m256i x) {
  const __m256i shifted = _mm256_srli_epi64(x, 11);  // < 2^53
  // uint64 (< 2^53) -> double via the 2^52 magic-number method, exact for
  // the low 52 bits plus explicit handling of bit 52
  const __m256i low52 = _mm256_and_si256(shifted, _mm256_set1_epi64x(0xFFFFFFFFFFFFFll));
  const __m256i hi_bit = _mm256_srli_epi64(shifted, 52);
  const __m256d lo = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(low52, _mm256_set1_epi64x(0x4330000000000000ll))),
      _mm256_set1_pd(0x1.0p52));
  const __m256d hi = _mm256_mul_pd(
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(
                        hi_bit, _mm256_set1_epi64x(0x4330000000000000ll))),
                    _mm256_set1_pd(0x1.0p52)),
      _mm256_set1_pd(0x1.0p52));
  return _mm256_mul_pd(_mm256_add_pd(hi, lo), _mm256_set1_pd(0x1.0p-53));
}

inline __m256d log_unit4(__m256d t) {
  const __m256i bits = _mm256_castpd_si256(t);
  const __m256i mbits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
      _mm256_set1_epi64x(0x3FF0000000000000ll));
  __m256d m = _mm256_castsi256_pd(mbits);
  __m256i raw = _mm256_srli_epi64(bits, 52);
  const __m256d sqrt2 = _mm256_castsi256_pd(
      _mm256_set1_epi64x(static_cast<long long>(kSqrt2Bits)));
  const __m256d bigmask = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(_mm256_set1_pd(0.5), m), bigmask);
  raw = _mm256_sub_epi64(raw, _mm256_castpd_si256(bigmask));  // mask is -1
  const __m256d k = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(raw, _mm256_set1_epi64x(0x4330000000000000ll))),
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x43300000000003FFll)));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d f = _mm256_sub_pd(m, one);
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);
  __m256d t1 = _mm256_set1_pd(kLg6);
  t1 = _mm256_add_pd(_mm256_set1_pd(kLg4), _mm256_mul_pd(w, t1));
  t1 = _mm256_add_pd(_mm256_set1_pd(kLg2), _mm256_mul_pd(w, t1));
  t1 = _mm256_mul_pd(w, t1);
  __m256d t2 = _mm256_set1_pd(kLg7);
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg5), _mm256_mul_pd(w, t2));
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg3), _mm256_mul_pd(w, t2));
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg1), _mm256_mul_pd(w, t2));
  t2 = _mm256_mul_pd(z, t2);
  const __m256d r = _mm256_add_pd(t1, t2);
  const __m256d hfsq =
      _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_mul_pd(f, f));
  // k*ln2hi - ((hfsq - (s*(hfsq+r) + k*ln2lo)) - f)
  const __m256d inner = _mm256_add_pd(
      _mm256_mul_pd(s, _mm256_add_pd(hfsq, r)),
      _mm256_mul_pd(k, _mm256_set1_pd(kLn2Lo)));
  return _mm256_sub_pd(
      _mm256_mul_pd(k, _mm256_set1_pd(kLn2Hi)),
      _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f));
}

}  // namespace

void u64_to_unit_avx2(const std::uint64_t* in, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    _mm256_storeu_pd(out + i, unit_from_u64(x));
  }
  if (i < n) u64_to_unit_scalar(in + i, out + i, n - i);
}

void u64_to_exponential_avx2(const std::uint64_t* in, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    const __m256d t = _mm256_sub_pd(one, unit_from_u64(x));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(zero, log_unit4(t)));
  }
  if (i < n) u64_to_exponential_scalar(in + i, out + i, n - i);
}

std::size_t count_greater_avx2(const double* x, std::size_t n, double threshold) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, thr, _CMP_GT_OQ));
    c += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) c += x[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace ams::kernels::detail
