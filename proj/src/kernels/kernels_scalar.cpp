#include <bit>
#include <cstring>

#include "ams/kernels.hpp"
#include "kernels_impl.hpp"

namespace ams::kernels {

namespace detail {

namespace {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void philox_round(std::uint64_t c[4], const std::uint64_t k[2]) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo64(kPhiloxM0, c[0], hi0, lo0);
  mulhilo64(kPhiloxM1, c[2], hi1, lo1);
  const std::uint64_t n0 = hi1 ^ c[1] ^ k[0];
  const std::uint64_t n2 = hi0 ^ c[3] ^ k[1];
  c[0] = n0;
  c[1] = lo1;
  c[2] = n2;
  c[3] = lo0;
}

}  // namespace

void philox_block_scalar(const std::uint64_t key[2], const std::uint64_t ctr[4],
                         std::uint64_t out[4]) {
  std::uint64_t c[4] = {ctr[0], ctr[1], ctr[2], ctr[3]};
  std::uint64_t k[2] = {key[0], key[1]};
  for (int r = 0; r < 10; ++r) {
    if (r) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    philox_round(c, k);
  }
  out[0] = c[0];
  out[1] = c[1];
  out[2] = c[2];
  out[3] = c[3];
}

void philox_blocks4_scalar(const std::uint64_t key[2], const std::uint64_t c0[4],
                           const std::uint64_t c1[4], std::uint64_t c2,
                           std::uint64_t* out) {
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t ctr[4] = {c0[i], c1[i], c2, 0};
    philox_block_scalar(key, ctr, out + 4 * i);
  }
}

void u64_to_unit_scalar(const std::uint64_t* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(in[i] >> 11) * 0x1.0p-53;
  }
}

// Natural log on (0, 1]; operation-for-operation the spec of the AVX2 lanes.
// 1 - u is exactly representable for u = m * 2^-53, m < 2^53, so the
// exponential transform below never sees a rounded argument.
static inline double log_unit_core(double t) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(t);
  const std::uint64_t mbits =
      (bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull;
  double m = std::bit_cast<double>(mbits);
  std::uint64_t raw = bits >> 52;  // biased exponent, in [970, 1023] here
  const bool big = m >= std::bit_cast<double>(kSqrt2Bits);
  m = big ? 0.5 * m : m;
  raw = big ? raw + 1 : raw;
  // biased exponent -> double via the 2^52 mantissa trick, then unbias;
  // matches the vector path exactly
  const double k = std::bit_cast<double>(0x4330000000000000ull | raw) -
                   std::bit_cast<double>(0x43300000000003FFull);
  const double f = m - 1.0;
  const double s = f / (2.0 + f);
  const double z = s * s;
  const double w = z * z;
  const double t1 = w * (kLg2 + w * (kLg4 + w * kLg6));
  const double t2 = z * (kLg1 + w * (kLg3 + w * (kLg5 + w * kLg7)));
  const double r = t1 + t2;
  const double hfsq = 0.5 * f * f;
  return k * kLn2Hi - ((hfsq - (s * (hfsq + r) + k * kLn2Lo)) - f);
}

void u64_to_exponential_scalar(const std::uint64_t* in, double* out,
                               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(in[i] >> 11) * 0x1.0p-53;
    const double t = 1.0 - u;       // exact
    out[i] = 0.0 - log_unit_core(t);  // +0.0 when u == 0, same as the vector path
  }
}

std::size_t count_greater_scalar(const double* x, std::size_t n,
                                 double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] > threshold ? 1 : 0;
  return c;
}

}  // namespace detail

double log_unit_ref(double t) { return detail::log_unit_core(t); }

}  // namespace ams::kernels
