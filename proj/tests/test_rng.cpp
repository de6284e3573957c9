#include <array>
#include <cstdint>

#include "chslab/rng.hpp"
#include "doctest.h"

namespace rng = chslab::rng;

TEST_SUITE("rng") {

// Reference vectors for Philox4x64-10 from the published test set; any change
// to the round constants or the round count breaks these.
TEST_CASE("philox known-answer vectors") {
  {
    const auto r = rng::philox({0, 0, 0, 0}, {0, 0});
    CHECK(r[0] == 0x16554d9eca36314cull);
    CHECK(r[1] == 0xdb20fe9d672d0fdcull);
    CHECK(r[2] == 0xd7e772cee186176bull);
    CHECK(r[3] == 0x7e68b68aec7ba23bull);
  }
  {
    const std::uint64_t ff = ~0ull;
    const auto r = rng::philox({ff, ff, ff, ff}, {ff, ff});
    CHECK(r[0] == 0x87b092c3013fe90bull);
    CHECK(r[1] == 0x438c3c67be8d0224ull);
    CHECK(r[2] == 0x9cc7d7c69cd777b6ull);
    CHECK(r[3] == 0xa09caebf594f0ba0ull);
  }
  {
    const auto r = rng::philox({0x243f6a8885a308d3ull, 0x13198a2e03707344ull,
                                0xa4093822299f31d0ull, 0x082efa98ec4e6c89ull},
                               {0x452821e638d01377ull, 0xbe5466cf34e90c6cull});
    CHECK(r[0] == 0xa528f45403e61d95ull);
    CHECK(r[1] == 0x38c72dbd566e9788ull);
    CHECK(r[2] == 0xa5a1610e72fd18b5ull);
    CHECK(r[3] == 0x57bd43b5e52b7fe6ull);
  }
}

TEST_CASE("u01 stays inside the open unit interval") {
  CHECK(rng::u01(0) > 0.0);
  CHECK(rng::u01(0) == doctest::Approx(0x1p-53).epsilon(1e-12));
  CHECK(rng::u01(~0ull) < 1.0);
  CHECK(rng::u01(~0ull) > 1.0 - 1e-15);
  CHECK(rng::u01(1ull << 12) > rng::u01(0));
}

TEST_CASE("gauss4 moments") {
  const rng::Key key = rng::make_key(123, rng::Stream::kOuNoise);
  const int blocks = 1 << 16;
  double sum = 0.0, sumsq = 0.0, sum4 = 0.0;
  for (int i = 0; i < blocks; ++i) {
    const auto g = rng::gauss4({static_cast<std::uint64_t>(i), 0, 0, 0}, key);
    for (double x : g) {
      sum += x;
      sumsq += x * x;
      sum4 += x * x * x * x;
    }
  }
  const double n = 4.0 * blocks;
  const double mean = sum / n;
  const double var = sumsq / n;
  const double kurt = sum4 / n;
  // 5-sigma bands: se(mean) = 1/sqrt(n), se(var) = sqrt(2/n), se(m4) = sqrt(96/n).
  CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(kurt - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("keys separate streams and instances") {
  const rng::Counter c{42, 0, 0, 0};
  const auto a = rng::philox(c, rng::make_key(7, rng::Stream::kOuNoise));
  const auto b = rng::philox(c, rng::make_key(7, rng::Stream::kFreeField));
  const auto d = rng::philox(c, rng::make_key(7, rng::Stream::kOuNoise, 1));
  const auto e = rng::philox(c, rng::make_key(8, rng::Stream::kOuNoise));
  CHECK(a != b);
  CHECK(a != d);
  CHECK(a != e);
  // pure function of (counter, key)
  CHECK(a == rng::philox(c, rng::make_key(7, rng::Stream::kOuNoise)));
}

}  // TEST_SUITE
