#pragma once

#include <array>
#include <cstdint>
#include <cmath>

// Counter-based randomness: every draw is a pure function of (key, counter),
// so samples can be generated in any order, on any number of workers, and a
// trajectory is reproducible from (seed, stream, instance, step, mode) alone.

namespace chslab::rng {

struct Counter {
  std::uint64_t c0 = 0, c1 = 0, c2 = 0, c3 = 0;
};

struct Key {
  std::uint64_t k0 = 0, k1 = 0;
};

namespace detail {

inline constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

// Philox4x64-10 block function (checked against the published reference
// vectors in the unit tests).
inline std::array<std::uint64_t, 4> philox(Counter c, Key k) {
  std::uint64_t x0 = c.c0, x1 = c.c1, x2 = c.c2, x3 = c.c3;
  std::uint64_t k0 = k.k0, k1 = k.k1;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo(detail::kMul0, x0, hi0, lo0);
    detail::mulhilo(detail::kMul1, x2, hi1, lo1);
    const std::uint64_t y0 = hi1 ^ x1 ^ k0;
    const std::uint64_t y2 = hi0 ^ x3 ^ k1;
    x0 = y0;
    x1 = lo1;
    x2 = y2;
    x3 = lo0;
    k0 += detail::kWeyl0;
    k1 += detail::kWeyl1;
  }
  return {x0, x1, x2, x3};
}

// Uniform on the open interval (0,1); never returns 0 or 1, safe under log().
// 52 payload bits: with the half-step offset the top value is 1 - 2^-53,
// which a 53-bit offset would round up to exactly 1.0.
inline double u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

// Four independent standard normals from one block (Box-Muller on lane pairs).
inline std::array<double, 4> gauss4(Counter c, Key k) {
  const auto b = philox(c, k);
  const double u0 = u01(b[0]), u1 = u01(b[1]);
  const double u2 = u01(b[2]), u3 = u01(b[3]);
  const double r0 = std::sqrt(-2.0 * std::log(u0));
  const double r2 = std::sqrt(-2.0 * std::log(u2));
  constexpr double kTau = 6.283185307179586476925286766559;
  return {r0 * std::cos(kTau * u1), r0 * std::sin(kTau * u1),
          r2 * std::cos(kTau * u3), r2 * std::sin(kTau * u3)};
}

// Disjoint key lanes per sampling purpose; instance separates ensemble
// members (trajectories, chains, synthetic fields).
enum class Stream : std::uint64_t {
  kOuNoise = 1,
  kNoisePair = 2,
  kInitialData = 3,
  kFreeField = 4,
  kPcnProposal = 5,
  kPcnAccept = 6,
  kRoughField = 7,
};

inline Key make_key(std::uint64_t seed, Stream stream,
                    std::uint64_t instance = 0) {
  return Key{seed, static_cast<std::uint64_t>(stream) | (instance << 16)};
}

}  // namespace chslab::rng
