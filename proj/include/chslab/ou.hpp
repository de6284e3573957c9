#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "chslab/rng.hpp"
#include "chslab/spectral.hpp"

namespace chslab::ou {

// Independent white-noise increments for the two components of the vector
// Wiener process; E|w_j(k)|^2 = dt per mode.
struct NoisePair {
  spectral::SpectralField w1, w2;
};

NoisePair sample_noise_increment(int cutoff, double side, double dt,
                                 rng::Key key, std::uint64_t step_index);

// i (2pi/L) (k1 w1 + k2 w2): the divergence of the pair, zero-mean by
// construction. Its per-mode variance is lambda_k dt.
spectral::SpectralField divergence_noise(const NoisePair& n);

// State of the stochastic convolution, advanced by exact per-mode sampling:
// each step is distributionally exact for the truncated system, so dt only
// controls where the path is observed, not its law.
struct OuState {
  spectral::SpectralField z;  // zero-mean at all times
  double t = 0.0;
  std::uint64_t step_index = 0;  // counts noise blocks consumed
  rng::Key key;

  // per-mode caches for the last dt used
  double cached_dt = -1.0;
  Eigen::ArrayXXd decay;     // exp(-lambda^2 dt / 2)
  Eigen::ArrayXXd step_std;  // std dev of each real component of the shock
};

OuState make_ou_state(int cutoff, double side, std::uint64_t seed,
                      std::uint64_t instance = 0);

// z'(k) = decay_k z(k) + eta_k with E|eta_k|^2 = (1 - e^{-lambda_k^2 dt}) / lambda_k.
OuState ou_step(OuState state, double dt);

// One draw from the truncated free field: independent modes with
// E|z(k)|^2 = 1 / lambda_k, mean mode exactly zero.
spectral::SpectralField stationary_sample(int cutoff, double side, rng::Key key,
                                          std::uint64_t draw_index);

}  // namespace chslab::ou
