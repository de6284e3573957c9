#include <cmath>
#include <complex>
#include <vector>

#include "chslab/ou.hpp"
#include "chslab/rng.hpp"
#include "chslab/spectral.hpp"
#include "doctest.h"

namespace ou = chslab::ou;
namespace rng = chslab::rng;
namespace spectral = chslab::spectral;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_SUITE("ou") {

TEST_CASE("divergence of a noise pair is i (2pi/L) k . w") {
  // deterministic pair: a single Hermitian mode in each component
  ou::NoisePair n{spectral::SpectralField(3, 2.0),
                  spectral::SpectralField(3, 2.0)};
  n.w1.c(1, 0) = {0.7, -0.2};
  n.w1.c(-1, 0) = std::conj(n.w1.c(1, 0));
  n.w2.c(1, 2) = {0.1, 0.4};
  n.w2.c(-1, -2) = std::conj(n.w2.c(1, 2));

  const spectral::SpectralField d = ou::divergence_noise(n);
  const std::complex<double> i_pi{0.0, kPi};  // i * 2pi/L at L=2
  CHECK(std::abs(d.c(1, 0) - i_pi * 1.0 * n.w1.c(1, 0)) < 1e-14);
  CHECK(std::abs(d.c(1, 2) - i_pi * 2.0 * n.w2.c(1, 2)) < 1e-14);
  CHECK(d.mean_coeff() == 0.0);
  CHECK(spectral::is_hermitian(d));
}

TEST_CASE("noise increments carry variance dt per mode") {
  const int cutoff = 3;
  const double dt = 0.37;
  const rng::Key key = rng::make_key(5, rng::Stream::kNoisePair);
  const int n = 4000;
  double s10 = 0.0, s12 = 0.0;
  for (int i = 0; i < n; ++i) {
    const ou::NoisePair p = ou::sample_noise_increment(cutoff, 2.0, dt, key,
                                                       static_cast<std::uint64_t>(i));
    s10 += std::norm(p.w1.c(1, 0));
    s12 += std::norm(p.w2.c(-1, 2));
  }
  // E|w(k)|^2 = dt, relative se = sqrt(2/n) for the complex modulus square
  const double band = 5.0 * dt * std::sqrt(2.0 / n);
  CHECK(std::abs(s10 / n - dt) < band);
  CHECK(std::abs(s12 / n - dt) < band);
}

TEST_CASE("transient variance matches the closed form") {
  // starting from z = 0, E|z_k(t)|^2 = (1 - e^{-lambda^2 t}) / lambda; reach
  // t both as one exact step and as many small ones
  const int cutoff = 2;
  const double t = 0.004;
  const int n = 6000;
  double one_step = 0.0, composed = 0.0;
  for (int i = 0; i < n; ++i) {
    ou::OuState a = ou::make_ou_state(cutoff, 2.0, 99,
                                      static_cast<std::uint64_t>(i));
    a = ou::ou_step(std::move(a), t);
    one_step += std::norm(a.z.c(1, 0));

    ou::OuState b = ou::make_ou_state(cutoff, 2.0, 1099,
                                      static_cast<std::uint64_t>(i));
    for (int s = 0; s < 8; ++s) b = ou::ou_step(std::move(b), t / 8.0);
    composed += std::norm(b.z.c(1, 0));
  }
  const double lambda = kPi * kPi;
  const double target = (1.0 - std::exp(-lambda * lambda * t)) / lambda;
  const double band = 5.0 * target * std::sqrt(2.0 / n);
  CHECK(std::abs(one_step / n - target) < band);
  CHECK(std::abs(composed / n - target) < band);
}

TEST_CASE("long-run variance reaches 1/lambda") {
  const int cutoff = 2;
  const int n = 6000;
  double acc10 = 0.0, acc11 = 0.0;
  for (int i = 0; i < n; ++i) {
    ou::OuState s = ou::make_ou_state(cutoff, 2.0, 7,
                                      static_cast<std::uint64_t>(i));
    s = ou::ou_step(std::move(s), 2.0);  // e^{-lambda^2 t} ~ 1e-85 at the slowest mode
    acc10 += std::norm(s.z.c(1, 0));
    acc11 += std::norm(s.z.c(1, 1));
  }
  const double l10 = kPi * kPi, l11 = 2.0 * kPi * kPi;
  CHECK(std::abs(acc10 / n - 1.0 / l10) < 5.0 / l10 * std::sqrt(2.0 / n));
  CHECK(std::abs(acc11 / n - 1.0 / l11) < 5.0 / l11 * std::sqrt(2.0 / n));
}

TEST_CASE("stationary sampler: law and invariance under the step") {
  const int cutoff = 3;
  const rng::Key key = rng::make_key(31, rng::Stream::kFreeField);
  const int n = 6000;
  double before = 0.0, after = 0.0;
  for (int i = 0; i < n; ++i) {
    const spectral::SpectralField z =
        ou::stationary_sample(cutoff, 2.0, key, static_cast<std::uint64_t>(i));
    CHECK(z.mean_coeff() == 0.0);
    before += std::norm(z.c(2, 1));

    // push a stationary draw through one OU step: the law must not move
    ou::OuState s = ou::make_ou_state(cutoff, 2.0, 555,
                                      static_cast<std::uint64_t>(i));
    s.z = z;
    s = ou::ou_step(std::move(s), 0.013);
    after += std::norm(s.z.c(2, 1));
  }
  const double lambda = 5.0 * kPi * kPi;
  const double band = 5.0 / lambda * std::sqrt(2.0 / n);
  CHECK(std::abs(before / n - 1.0 / lambda) < band);
  CHECK(std::abs(after / n - 1.0 / lambda) < band);
}

TEST_CASE("paths are deterministic in (seed, instance)") {
  ou::OuState a = ou::make_ou_state(4, 2.0, 12345, 6);
  ou::OuState b = ou::make_ou_state(4, 2.0, 12345, 6);
  ou::OuState c = ou::make_ou_state(4, 2.0, 12345, 7);
  for (int s = 0; s < 20; ++s) {
    a = ou::ou_step(std::move(a), 0.01);
    b = ou::ou_step(std::move(b), 0.01);
    c = ou::ou_step(std::move(c), 0.01);
  }
  CHECK((a.z.coeffs() - b.z.coeffs()).abs().maxCoeff() == 0.0);
  CHECK((a.z.coeffs() - c.z.coeffs()).abs().maxCoeff() > 0.0);
  CHECK(spectral::is_hermitian(a.z));
}

}  // TEST_SUITE
