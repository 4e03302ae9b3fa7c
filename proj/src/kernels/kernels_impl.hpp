#pragma once

#include <cstddef>
#include <cstdint>

// Internal: per-ISA entry points wired up by the dispatcher.

namespace ams::kernels::detail {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73Bull;

// fdlibm e_log.c coefficients; both ISA paths use exactly this scheme.
inline constexpr double kLg1 = 6.666666666666735130e-01;
inline constexpr double kLg2 = 3.999999999940941908e-01;
inline constexpr double kLg3 = 2.857142874366239149e-01;
inline constexpr double kLg4 = 2.222219843214978396e-01;
inline constexpr double kLg5 = 1.818357216161805012e-01;
inline constexpr double kLg6 = 1.531383769920937332e-01;
inline constexpr double kLg7 = 1.479819860511658591e-01;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr std::uint64_t kSqrt2Bits = 0x3FF6A09E667F3BCDull;

void philox_block_scalar(const std::uint64_t key[2], const std::uint64_t ctr[4],
                         std::uint64_t out[4]);
void philox_blocks4_scalar(const std::uint64_t key[2], const std::uint64_t c0[4],
                           const std::uint64_t c1[4], std::uint64_t c2,
                           std::uint64_t* out);
void u64_to_unit_scalar(const std::uint64_t* in, double* out, std::size_t n);
void u64_to_exponential_scalar(const std::uint64_t* in, double* out, std::size_t n);
std::size_t count_greater_scalar(const double* x, std::size_t n, double threshold);

#ifdef AMS_HAVE_AVX2
void philox_blocks4_avx2(const std::uint64_t key[2], const std::uint64_t c0[4],
                         const std::uint64_t c1[4], std::uint64_t c2,
                         std::uint64_t* out);
void u64_to_unit_avx2(const std::uint64_t* in, double* out, std::size_t n);
void u64_to_exponential_avx2(const std::uint64_t* in, double* out, std::size_t n);
std::size_t count_greater_avx2(const double* x, std::size_t n, double threshold);
#endif

}  // namespace ams::kernels::detail
