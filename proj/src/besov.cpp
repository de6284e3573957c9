#include "chslab/besov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chslab/grid.hpp"
#include "chslab/rng.hpp"
#include "chslab/stats.hpp"

namespace chslab::besov {

namespace {

// exact integer shell classification on |k|^2
int block_of_sq(long long ksq) {
  if (ksq <= 1) return -1;
  int j = 0;
  while ((4LL << (2 * j)) <= ksq) ++j;  // smallest j with |k|^2 < 4^{j+1}
  return j;
}

double block_lp_on_grid(const spectral::SpectralField& block, double p) {
  // compact re-embedding: modes of shell j fit inside |k|_inf <= 2^{j+1}-1
  int max_k = 0;
  const int n = block.cutoff();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      if (std::abs(block.c(k1, k2)) > 0.0)
        max_k = std::max({max_k, std::abs(k1), std::abs(k2)});
  const int compact = std::max(1, max_k);
  spectral::SpectralField small(compact, block.side());
  for (int k1 = -compact; k1 <= compact; ++k1)
    for (int k2 = -compact; k2 <= compact; ++k2)
      small.c(k1, k2) = block.c(k1, k2);
  const int points = grid::next_pow2(4 * (compact + 1));
  const grid::TorusGrid g = grid::to_grid(small, points);
  if (std::isinf(p)) return g.values.abs().maxCoeff();
  stats::KahanSum s;
  const double* v = g.values.data();
  for (std::ptrdiff_t i = 0; i < g.values.size(); ++i)
    s.add(std::pow(std::abs(v[i]), p));
  const double h = block.side() / points;
  return std::pow(s.value() * h * h, 1.0 / p);
}

}  // namespace

int block_of(spectral::ModeIndex k) {
  return block_of_sq(static_cast<long long>(k.k1) * k.k1 +
                     static_cast<long long>(k.k2) * k.k2);
}

int top_block(int cutoff) { return block_of({cutoff, cutoff}); }

spectral::SpectralField lp_block(const spectral::SpectralField& u, int j) {
  if (j < -1) throw std::invalid_argument("block index must be >= -1");
  const int n = u.cutoff();
  spectral::SpectralField out(n, u.side());
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      if (block_of({k1, k2}) == j) out.c(k1, k2) = u.c(k1, k2);
  return out;
}

double besov_norm(const spectral::SpectralField& u, const BesovParams& params) {
  if (!(params.p >= 1.0) || !(params.q >= 1.0))
    throw std::invalid_argument("p and q must be >= 1");
  const int n = u.cutoff();
  const int jtop = top_block(n);

  std::vector<double> block_norms(static_cast<std::size_t>(jtop + 2), 0.0);
  if (params.p == 2.0) {
    // Parseval per shell; no grids needed
    std::vector<stats::KahanSum> sums(block_norms.size());
    for (int k1 = -n; k1 <= n; ++k1)
      for (int k2 = -n; k2 <= n; ++k2) {
        const int j = block_of({k1, k2});
        sums[static_cast<std::size_t>(j + 1)].add(std::norm(u.c(k1, k2)));
      }
    for (std::size_t i = 0; i < sums.size(); ++i)
      block_norms[i] = std::sqrt(sums[i].value());
  } else {
    for (int j = -1; j <= jtop; ++j)
      block_norms[static_cast<std::size_t>(j + 1)] =
          block_lp_on_grid(lp_block(u, j), params.p);
  }

  if (std::isinf(params.q)) {
    double best = 0.0;
    for (int j = -1; j <= jtop; ++j)
      best = std::max(best, std::pow(2.0, j * params.alpha) *
                                block_norms[static_cast<std::size_t>(j + 1)]);
    return best;
  }
  stats::KahanSum s;
  for (int j = -1; j <= jtop; ++j)
    s.add(std::pow(std::pow(2.0, j * params.alpha) *
                       block_norms[static_cast<std::size_t>(j + 1)],
                   params.q));
  return std::pow(s.value(), 1.0 / params.q);
}

std::pair<double, double> resolved_window(int cutoff, double side) {
  const double lam_max = spectral::eigenvalue({cutoff, cutoff}, side);
  const double lam_min = spectral::eigenvalue({1, 0}, side);
  return {10.0 / (lam_max * lam_max), 1.0 / (10.0 * lam_min * lam_min)};
}

double schauder_slope(const spectral::SpectralField& u, double alpha,
                      double delta, const std::vector<double>& t_grid) {
  if (t_grid.size() < 3)
    throw std::invalid_argument("need at least three sample times");
  const auto [lo, hi] = resolved_window(u.cutoff(), u.side());
  for (double t : t_grid)
    if (t < lo || t > hi)
      throw std::invalid_argument(
          "sample time outside the resolved window; the fitted decay would "
          "reflect truncation, not smoothing");

  int occupied = 0;
  for (int j = -1; j <= top_block(u.cutoff()); ++j) {
    const spectral::SpectralField b = lp_block(u, j);
    if (b.coeffs().abs().maxCoeff() > 0.0) ++occupied;
  }
  if (occupied < 3)
    throw std::invalid_argument(
        "field occupies fewer than three shells; exponential decay of a "
        "near-pure mode has no power law to fit");

  const BesovParams target{alpha + delta, 2.0, 2.0};
  std::vector<double> logt, logn;
  for (double t : t_grid) {
    const spectral::SpectralField ut =
        spectral::apply(spectral::LinearOperator::heat(t), u);
    logt.push_back(std::log(t));
    logn.push_back(std::log(besov_norm(ut, target)));
  }
  const double mt = stats::mean(logt);
  const double mn = stats::mean(logn);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < logt.size(); ++i) {
    sxx += (logt[i] - mt) * (logt[i] - mt);
    sxy += (logt[i] - mt) * (logn[i] - mn);
  }
  return sxy / sxx;
}

spectral::SpectralField rough_field(int cutoff, double side, double alpha,
                                    std::uint64_t seed,
                                    std::uint64_t instance) {
  spectral::SpectralField u(cutoff, side);
  const rng::Key key = rng::make_key(seed, rng::Stream::kRoughField, instance);
  const int n = cutoff;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (!spectral::is_representative(k1, k2)) continue;
      const double absk = std::sqrt(static_cast<double>(k1) * k1 +
                                    static_cast<double>(k2) * k2);
      const double amp = std::pow(absk, -(1.0 + alpha));
      const std::uint64_t id =
          static_cast<std::uint64_t>(k1 + n) * (2 * n + 1) +
          static_cast<std::uint64_t>(k2 + n);
      const auto g = rng::gauss4({0, id, 0, 0}, key);
      u.c(k1, k2) =
          amp / std::sqrt(2.0) * spectral::Complex(g[0], g[1]);
      u.c(-k1, -k2) = std::conj(u.c(k1, k2));
    }
  return u;
}

}  // namespace chslab::besov
