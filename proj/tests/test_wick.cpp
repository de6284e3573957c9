#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "chslab/grid.hpp"
#include "chslab/ou.hpp"
#include "chslab/rng.hpp"
#include "chslab/spectral.hpp"
#include "chslab/wick.hpp"
#include "doctest.h"

namespace wick = chslab::wick;
namespace grid = chslab::grid;
namespace ou = chslab::ou;
namespace rng = chslab::rng;
namespace spectral = chslab::spectral;
using spectral::SpectralField;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Coefficient-space product oracle: (uv)^(m) = (1/L) sum_k u^(k) v^(m-k),
// computed on a widened index square so nothing aliases.
using CoefGrid = Eigen::ArrayXXcd;

CoefGrid widen(const SpectralField& u, int w) {
  const int n = u.cutoff();
  CoefGrid out = CoefGrid::Zero(2 * w + 1, 2 * w + 1);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      out(k1 + w, k2 + w) = u.c(k1, k2);
  return out;
}

CoefGrid convolve(const CoefGrid& a, const CoefGrid& b, double side) {
  const int w = (static_cast<int>(a.rows()) - 1) / 2;
  CoefGrid out = CoefGrid::Zero(a.rows(), a.cols());
  for (int m1 = -w; m1 <= w; ++m1)
    for (int m2 = -w; m2 <= w; ++m2) {
      std::complex<double> s{0.0, 0.0};
      for (int k1 = std::max(-w, m1 - w); k1 <= std::min(w, m1 + w); ++k1)
        for (int k2 = std::max(-w, m2 - w); k2 <= std::min(w, m2 + w); ++k2)
          s += a(k1 + w, k2 + w) * b(m1 - k1 + w, m2 - k2 + w);
      out(m1 + w, m2 + w) = s / side;
    }
  return out;
}

SpectralField random_field(int cutoff, std::uint64_t seed,
                           std::uint64_t draw) {
  return ou::stationary_sample(cutoff, 2.0,
                               rng::make_key(seed, rng::Stream::kFreeField),
                               draw);
}

}  // namespace

TEST_SUITE("wick") {

TEST_CASE("hermite polynomials, explicit coefficients") {
  for (double x : {0.0, 1.0, -1.0, 2.5, -3.7}) {
    CHECK(wick::hermite(0, x) == 1.0);
    CHECK(wick::hermite(1, x) == x);
    CHECK(wick::hermite(2, x) == doctest::Approx(x * x - 1.0).epsilon(1e-14));
    CHECK(wick::hermite(3, x) ==
          doctest::Approx(x * x * x - 3.0 * x).epsilon(1e-14));
    const double x2 = x * x;
    CHECK(wick::hermite(4, x) ==
          doctest::Approx((x2 - 6.0) * x2 + 3.0).epsilon(1e-14));
    CHECK(wick::hermite(5, x) ==
          doctest::Approx(((x2 - 10.0) * x2 + 15.0) * x).epsilon(1e-13));
    CHECK(wick::hermite(8, x) ==
          doctest::Approx((((x2 - 28.0) * x2 + 210.0) * x2 - 420.0) * x2 +
                          105.0)
              .epsilon(1e-12));
  }
}

TEST_CASE("binomial shift identity") {
  rng::Key key = rng::make_key(77, rng::Stream::kInitialData);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = rng::gauss4({static_cast<std::uint64_t>(i), 0, 0, 0}, key);
    for (int n = 0; n <= 8; ++n) {
      const double lhs = wick::binomial_shift(n, g[0], g[1]);
      const double rhs = wick::hermite(n, g[0] + g[1]);
      const double scale = 1.0 + std::abs(rhs);
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("renormalization constant: exact value and log growth") {
  // N=1, L=2: (1/4) * (4/pi^2 + 4/(2 pi^2)) = 3 / (2 pi^2)
  CHECK(wick::renorm_constant(1, 2.0, wick::RenormMode::kCovariance) ==
        doctest::Approx(1.5 / (kPi * kPi)).epsilon(1e-15));

  // the constant diverges logarithmically: octave increments approach a
  // positive limit set by the scale invariance of 1/|k|^2
  const double c16 = wick::renorm_constant(16, 2.0, wick::RenormMode::kCovariance);
  const double c32 = wick::renorm_constant(32, 2.0, wick::RenormMode::kCovariance);
  const double c64 = wick::renorm_constant(64, 2.0, wick::RenormMode::kCovariance);
  const double d1 = c32 - c16, d2 = c64 - c32;
  CHECK(d1 > 0.01);
  CHECK(d2 / d1 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("variance-exact mode approaches the stationary constant") {
  const double c_inf =
      wick::renorm_constant(4, 2.0, wick::RenormMode::kCovariance);
  const double c_early =
      wick::renorm_constant(4, 2.0, wick::RenormMode::kVarianceExact, 1e-4);
  const double c_mid =
      wick::renorm_constant(4, 2.0, wick::RenormMode::kVarianceExact, 1e-2);
  const double c_late =
      wick::renorm_constant(4, 2.0, wick::RenormMode::kVarianceExact, 5.0);
  CHECK(c_early > 0.0);
  CHECK(c_early < c_mid);
  CHECK(c_mid < c_inf);
  CHECK(c_late == doctest::Approx(c_inf).epsilon(1e-12));
}

TEST_CASE("bundle of a single cosine, against hand values") {
  const double a = 0.8, c = 0.3;
  SpectralField z(3, 2.0);
  z.c(1, 0) = {a, 0.0};
  z.c(-1, 0) = {a, 0.0};
  const wick::WickBundle w = wick::make_wick_bundle(z, c);

  // pointwise caches are the exact renormalized powers of the sampled values
  CHECK((w.z2g.values - (w.zg.values.square() - c)).abs().maxCoeff() < 1e-13);
  CHECK((w.z3g.values - (w.zg.values.cube() - 3.0 * c * w.zg.values))
            .abs()
            .maxCoeff() < 1e-13);

  // z(x) = a cos(pi x1): z^2 - c has modes (0,0) -> a^2 - 2c and (+-2,0) -> a^2/2,
  // z^3 - 3cz keeps (+-1,0) -> 3a(a^2/4 - c) and (+-3,0) -> a^3/4
  CHECK(w.z2.c(0, 0).real() == doctest::Approx(a * a - 2.0 * c).epsilon(1e-12));
  CHECK(w.z2.c(2, 0).real() == doctest::Approx(a * a / 2.0).epsilon(1e-12));
  CHECK(std::abs(w.z2.c(1, 1)) < 1e-13);
  CHECK(w.z3.c(1, 0).real() ==
        doctest::Approx(3.0 * a * (a * a / 4.0 - c)).epsilon(1e-12));
  CHECK(w.z3.c(3, 0).real() == doctest::Approx(a * a * a / 4.0).epsilon(1e-12));
}

TEST_CASE("recombination against brute-force convolution") {
  const int n = 2, wide = 3 * n;
  const double c = 0.41;
  const SpectralField y = random_field(n, 1, 0);
  const SpectralField z = random_field(n, 2, 1);
  const wick::WickBundle w = wick::make_wick_bundle(z, c);

  // y^3 + 3y^2 z + 3y z2 + z3 collapses to (y+z)^3 - 3c (y+z)
  CoefGrid sum = widen(y, wide) + widen(z, wide);
  const CoefGrid sq = convolve(sum, sum, 2.0);
  const CoefGrid cube = convolve(sq, sum, 2.0);

  const SpectralField r3 = wick::recombine(y, w, 3);
  const SpectralField r2 = wick::recombine(y, w, 2);
  double worst3 = 0.0, worst2 = 0.0;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const std::complex<double> want3 =
          cube(k1 + wide, k2 + wide) - 3.0 * c * sum(k1 + wide, k2 + wide);
      std::complex<double> want2 = sq(k1 + wide, k2 + wide);
      if (k1 == 0 && k2 == 0) want2 -= c * 2.0;  // constant c has coefficient cL
      worst3 = std::max(worst3, std::abs(r3.c(k1, k2) - want3));
      worst2 = std::max(worst2, std::abs(r2.c(k1, k2) - want2));
    }
  CHECK(worst3 < 1e-12);
  CHECK(worst2 < 1e-12);
}

TEST_CASE("renormalized square integrates to zero in the mean") {
  const int cutoff = 3;
  const double c =
      wick::renorm_constant(cutoff, 2.0, wick::RenormMode::kCovariance);
  const rng::Key key = rng::make_key(404, rng::Stream::kFreeField);
  const int n = 4000;
  double acc = 0.0, var_acc = 0.0;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    const SpectralField z = ou::stationary_sample(cutoff, 2.0, key,
                                                  static_cast<std::uint64_t>(i));
    // integral of :z^2: = sum |z_k|^2 - c L^2 by Parseval
    vals[i] = spectral::l2_inner(z, z) - c * 4.0;
    acc += vals[i];
  }
  const double mean = acc / n;
  for (double v : vals) var_acc += (v - mean) * (v - mean);
  const double se = std::sqrt(var_acc / (n - 1.0) / n);
  CHECK(std::abs(mean) < 5.0 * se);
}

}  // TEST_SUITE
