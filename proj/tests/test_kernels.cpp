#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "ams/kernels.hpp"
#include "ams/rng.hpp"

namespace k = ams::kernels;

namespace {

// Restores automatic dispatch when a test section ends.
struct IsaGuard {
  ~IsaGuard() { k::force_isa(std::nullopt); }
};

}  // namespace

TEST_CASE("philox4x64-10 known-answer vectors") {
  // Official Random123 vectors for counter/key all zeros and all ones.
  const std::uint64_t key0[2] = {0, 0};
  std::uint64_t out[4];
  std::uint64_t ctr[4] = {0, 0, 0, 0};
  k::philox_block(key0, ctr, out);
  CHECK(out[0] == 0x16554d9eca36314cull);
  CHECK(out[1] == 0xdb20fe9d672d0fdcull);
  CHECK(out[2] == 0xd7e772cee186176bull);
  CHECK(out[3] == 0x7e68b68aec7ba23bull);
  const std::uint64_t keyf[2] = {~0ull, ~0ull};
  const std::uint64_t ctrf[4] = {~0ull, ~0ull, ~0ull, ~0ull};
  k::philox_block(keyf, ctrf, out);
  CHECK(out[0] == 0x87b092c3013fe90bull);
  CHECK(out[1] == 0x438c3c67be8d0224ull);
  CHECK(out[2] == 0x9cc7d7c69cd777b6ull);
  CHECK(out[3] == 0xa09caebf594f0ba0ull);

  // Cross-checks against numpy.random.Philox, which pre-increments the
  // counter: its first block for counter c equals ours at c+1.
  ctr[0] = 1;
  k::philox_block(key0, ctr, out);
  CHECK(out[0] == 0x02f4ba6408e4d89bull);
  CHECK(out[1] == 0x3dd62b0b9ca8c5b2ull);
  CHECK(out[2] == 0x1c8667a55d902e79ull);
  CHECK(out[3] == 0x907d7a052fd5b4dcull);

  const std::uint64_t key1[2] = {0xA5A5A5A55A5A5A5Aull, 0x0123456789ABCDEFull};
  const std::uint64_t ctr1[4] = {0xDEADBEEF12345679ull, 0x0F0E0D0C0B0A0908ull, 1, 2};
  k::philox_block(key1, ctr1, out);
  CHECK(out[0] == 0xc96f4c82105a7458ull);
  CHECK(out[1] == 0x597b49a8e0f1729full);
  CHECK(out[2] == 0xfcff0e7ce99ae43cull);
  CHECK(out[3] == 0x5d7da7c2c0273818ull);
}

TEST_CASE("scalar and AVX2 kernel paths are bit-identical") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available; dispatch equivalence skipped");
    return;
  }
  IsaGuard guard;
  std::mt19937_64 gen(42);
  const std::uint64_t key[2] = {gen(), gen()};

  SUBCASE("philox_blocks4 and philox_fill") {
    std::uint64_t c0[4], c1[4];
    for (int rep = 0; rep < 50; ++rep) {
      for (int i = 0; i < 4; ++i) {
        c0[i] = gen();
        c1[i] = gen();
      }
      std::uint64_t a[16], b[16];
      k::force_isa(k::Isa::scalar);
      k::philox_blocks4(key, c0, c1, 7, a);
      k::force_isa(k::Isa::avx2);
      k::philox_blocks4(key, c0, c1, 7, b);
      CHECK(std::memcmp(a, b, sizeof(a)) == 0);
    }
    std::vector<std::uint64_t> fa(4 * 1003), fb(4 * 1003);
    k::force_isa(k::Isa::scalar);
    k::philox_fill(key, 123, 5, 0, fa.data(), 1003);
    k::force_isa(k::Isa::avx2);
    k::philox_fill(key, 123, 5, 0, fb.data(), 1003);
    CHECK(std::memcmp(fa.data(), fb.data(), fa.size() * 8) == 0);
  }

  SUBCASE("transforms and count_greater") {
    std::vector<std::uint64_t> raw(4097);
    for (auto& x : raw) x = gen();
    raw[0] = 0;                       // u = 0 edge
    raw[1] = 0x7FFull;                // low bits only: u = 0 after the shift
    raw[2] = ~0ull;                   // largest u
    std::vector<double> ua(raw.size()), ub(raw.size());
    std::vector<double> ea(raw.size()), eb(raw.size());
    k::force_isa(k::Isa::scalar);
    k::u64_to_unit(raw.data(), ua.data(), raw.size());
    k::u64_to_exponential(raw.data(), ea.data(), raw.size());
    k::force_isa(k::Isa::avx2);
    k::u64_to_unit(raw.data(), ub.data(), raw.size());
    k::u64_to_exponential(raw.data(), eb.data(), raw.size());
    CHECK(std::memcmp(ua.data(), ub.data(), ua.size() * 8) == 0);
    CHECK(std::memcmp(ea.data(), eb.data(), ea.size() * 8) == 0);

    k::force_isa(k::Isa::scalar);
    const std::size_t ca = k::count_greater(ea.data(), ea.size(), 0.7);
    k::force_isa(k::Isa::avx2);
    const std::size_t cb = k::count_greater(ea.data(), ea.size(), 0.7);
    CHECK(ca == cb);
  }
}

TEST_CASE("log_unit_ref matches libm within 2 ulp on (0,1]") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    double t = unif(gen);
    if (t == 0.0) continue;
    const double mine = k::log_unit_ref(t);
    const double ref = std::log(t);
    const double ulp = std::abs(std::nexttoward(ref, 2.0 * ref) - ref);
    if (ulp > 0) worst = std::max(worst, std::abs(mine - ref) / ulp);
  }
  // denormal-free range endpoints
  CHECK(k::log_unit_ref(1.0) == 0.0);
  CHECK(k::log_unit_ref(0x1.0p-53) == doctest::Approx(std::log(0x1.0p-53)).epsilon(1e-15));
  CHECK(worst <= 2.0);
}

TEST_CASE("exponential transform semantics") {
  const std::uint64_t zero = 0;
  double e;
  k::u64_to_exponential(&zero, &e, 1);
  CHECK(e == 0.0);
  CHECK(!std::signbit(e));
  const std::uint64_t top = ~0ull;
  k::u64_to_exponential(&top, &e, 1);
  CHECK(e == doctest::Approx(53 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("RandomSequence word addressing matches raw kernel blocks") {
  const std::uint64_t key[2] = {99, 1234567};
  ams::RandomSequence seq(99, 1234567, /*sequence=*/17, /*domain=*/0);
  std::vector<std::uint64_t> raw(4 * 10);
  k::philox_fill(key, 0, 17, 0, raw.data(), 10);
  for (std::size_t t = 0; t < raw.size(); ++t) CHECK(seq.next_u64() == raw[t]);
}

TEST_CASE("sequences with different ids or streams differ") {
  ams::RandomSequence a(1, 2, 3), b(1, 2, 4), c(1, 5, 3), d(6, 2, 3);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64() || va != c.next_u64() || va != d.next_u64())
      all_equal = false;
  }
  CHECK(!all_equal);
}
