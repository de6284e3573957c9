#include "chslab/ou.hpp"

#include <cmath>
#include <stdexcept>

namespace chslab::ou {

namespace {

inline std::uint64_t mode_id(int k1, int k2, int n) {
  return static_cast<std::uint64_t>(k1 + n) * (2 * n + 1) +
         static_cast<std::uint64_t>(k2 + n);
}

}  // namespace

NoisePair sample_noise_increment(int cutoff, double side, double dt,
                                 rng::Key key, std::uint64_t step_index) {
  if (dt < 0.0) throw std::invalid_argument("dt must be nonnegative");
  NoisePair out{spectral::SpectralField(cutoff, side),
                spectral::SpectralField(cutoff, side)};
  if (dt == 0.0) return out;
  const int n = cutoff;
  const double comp_std = std::sqrt(dt / 2.0);  // per real component
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (!spectral::is_representative(k1, k2)) continue;
      const auto g =
          rng::gauss4({step_index, mode_id(k1, k2, n), 0, 0}, key);
      out.w1.c(k1, k2) = spectral::Complex(comp_std * g[0], comp_std * g[1]);
      out.w2.c(k1, k2) = spectral::Complex(comp_std * g[2], comp_std * g[3]);
      out.w1.c(-k1, -k2) = std::conj(out.w1.c(k1, k2));
      out.w2.c(-k1, -k2) = std::conj(out.w2.c(k1, k2));
    }
  // the mean mode is real for a real field, so it takes a full-variance draw
  const auto g0 = rng::gauss4({step_index, mode_id(0, 0, n), 0, 0}, key);
  out.w1.c(0, 0) = spectral::Complex(std::sqrt(dt) * g0[0], 0.0);
  out.w2.c(0, 0) = spectral::Complex(std::sqrt(dt) * g0[2], 0.0);
  return out;
}

spectral::SpectralField divergence_noise(const NoisePair& noise) {
  const int n = noise.w1.cutoff();
  const double side = noise.w1.side();
  if (noise.w2.cutoff() != n || noise.w2.side() != side)
    throw std::invalid_argument("noise components disagree on layout");
  spectral::SpectralField out(n, side);
  constexpr double kTau = 6.283185307179586476925286766559;
  const double f = kTau / side;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      out.c(k1, k2) = spectral::Complex(0.0, f) *
                      (static_cast<double>(k1) * noise.w1.c(k1, k2) +
                       static_cast<double>(k2) * noise.w2.c(k1, k2));
  return out;
}

OuState make_ou_state(int cutoff, double side, std::uint64_t seed,
                      std::uint64_t instance) {
  OuState s;
  s.z = spectral::SpectralField(cutoff, side);
  s.key = rng::make_key(seed, rng::Stream::kOuNoise, instance);
  return s;
}

OuState ou_step(OuState state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const int n = state.z.cutoff();
  const double side = state.z.side();
  if (dt != state.cached_dt) {
    state.decay = Eigen::ArrayXXd::Zero(2 * n + 1, 2 * n + 1);
    state.step_std = Eigen::ArrayXXd::Zero(2 * n + 1, 2 * n + 1);
    for (int k1 = -n; k1 <= n; ++k1)
      for (int k2 = -n; k2 <= n; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        const double lambda = spectral::eigenvalue({k1, k2}, side);
        state.decay(k1 + n, k2 + n) = std::exp(-lambda * lambda * dt / 2.0);
        const double var = -std::expm1(-lambda * lambda * dt) / lambda;
        state.step_std(k1 + n, k2 + n) = std::sqrt(var / 2.0);
      }
    state.cached_dt = dt;
  }
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (!spectral::is_representative(k1, k2)) continue;
      const auto g =
          rng::gauss4({state.step_index, mode_id(k1, k2, n), 0, 0}, state.key);
      const double sd = state.step_std(k1 + n, k2 + n);
      const spectral::Complex eta(sd * g[0], sd * g[1]);
      state.z.c(k1, k2) =
          state.decay(k1 + n, k2 + n) * state.z.c(k1, k2) + eta;
      state.z.c(-k1, -k2) = std::conj(state.z.c(k1, k2));
    }
  // the mean mode never receives noise: the divergence annihilates it
  state.z.c(0, 0) = spectral::Complex(0.0, 0.0);
  state.t += dt;
  state.step_index += 1;
  return state;
}

spectral::SpectralField stationary_sample(int cutoff, double side, rng::Key key,
                                          std::uint64_t draw_index) {
  spectral::SpectralField z(cutoff, side);
  const int n = cutoff;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (!spectral::is_representative(k1, k2)) continue;
      const double lambda = spectral::eigenvalue({k1, k2}, side);
      const double sd = std::sqrt(1.0 / (2.0 * lambda));
      const auto g = rng::gauss4({draw_index, mode_id(k1, k2, n), 0, 0}, key);
      z.c(k1, k2) = spectral::Complex(sd * g[0], sd * g[1]);
      z.c(-k1, -k2) = std::conj(z.c(k1, k2));
    }
  return z;
}

}  // namespace chslab::ou
