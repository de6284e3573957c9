#include "chslab/wick.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "chslab/stats.hpp"

namespace chslab::wick {

namespace {

constexpr int kMaxDegree = 8;

// coeff[n][j] multiplies x^{n-2j}: (-1)^j n! / ((n-2j)! j! 2^j).
constexpr std::array<std::array<long long, 5>, kMaxDegree + 1> kHermiteCoeff = {{
    {{1, 0, 0, 0, 0}},
    {{1, 0, 0, 0, 0}},
    {{1, -1, 0, 0, 0}},
    {{1, -3, 0, 0, 0}},
    {{1, -6, 3, 0, 0}},
    {{1, -10, 15, 0, 0}},
    {{1, -15, 45, -15, 0}},
    {{1, -21, 105, -105, 0}},
    {{1, -28, 210, -420, 105}},
}};

constexpr std::array<std::array<long long, kMaxDegree + 1>, kMaxDegree + 1>
    kBinomial = {{
        {{1, 0, 0, 0, 0, 0, 0, 0, 0}},
        {{1, 1, 0, 0, 0, 0, 0, 0, 0}},
        {{1, 2, 1, 0, 0, 0, 0, 0, 0}},
        {{1, 3, 3, 1, 0, 0, 0, 0, 0}},
        {{1, 4, 6, 4, 1, 0, 0, 0, 0}},
        {{1, 5, 10, 10, 5, 1, 0, 0, 0}},
        {{1, 6, 15, 20, 15, 6, 1, 0, 0}},
        {{1, 7, 21, 35, 35, 21, 7, 1, 0}},
        {{1, 8, 28, 56, 70, 56, 28, 8, 1}},
    }};

}  // namespace

double hermite(int n, double x) {
  if (n < 0 || n > kMaxDegree)
    throw std::invalid_argument("hermite degree out of range [0,8]");
  double acc = 0.0;
  for (int j = 0; 2 * j <= n; ++j)
    acc += static_cast<double>(kHermiteCoeff[n][j]) * std::pow(x, n - 2 * j);
  return acc;
}

double binomial_shift(int n, double s, double t) {
  if (n < 0 || n > kMaxDegree)
    throw std::invalid_argument("degree out of range [0,8]");
  double acc = 0.0;
  for (int m = 0; m <= n; ++m)
    acc += static_cast<double>(kBinomial[n][m]) * hermite(m, s) *
           std::pow(t, n - m);
  return acc;
}

double renorm_constant(int cutoff, double side, RenormMode mode, double t) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  if (mode == RenormMode::kVarianceExact && !(t >= 0.0))
    throw std::invalid_argument("variance-exact mode needs a time t >= 0");
  stats::KahanSum s;
  for (int k1 = -cutoff; k1 <= cutoff; ++k1)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double lambda = spectral::eigenvalue({k1, k2}, side);
      const double w = (mode == RenormMode::kCovariance)
                           ? 1.0 / lambda
                           : -std::expm1(-t * lambda * lambda) / lambda;
      s.add(w);
    }
  return s.value() / (side * side);
}

WickBundle make_wick_bundle(const spectral::SpectralField& z, double c,
                            int points) {
  if (c < 0.0)
    throw std::invalid_argument("renormalization constant must be >= 0");
  const int n = z.cutoff();
  if (points == 0) points = grid::dealias_points(n);
  WickBundle w;
  w.c = c;
  w.z = z;
  w.zg = grid::to_grid(z, points);
  w.z2g = grid::TorusGrid{points, z.side(), w.zg.values * w.zg.values - c};
  w.z3g = grid::TorusGrid{
      points, z.side(),
      w.zg.values * w.zg.values * w.zg.values - 3.0 * c * w.zg.values};
  w.z2 = grid::from_grid(w.z2g, n);
  w.z3 = grid::from_grid(w.z3g, n);
  return w;
}

spectral::SpectralField recombine(const spectral::SpectralField& y,
                                  const WickBundle& w, int n) {
  if (n != 2 && n != 3)
    throw std::invalid_argument("recombine supports n in {2,3}");
  if (y.cutoff() != w.z.cutoff() || y.side() != w.z.side())
    throw std::invalid_argument("field layouts differ");
  const int points = w.zg.points;
  const grid::TorusGrid yg = grid::to_grid(y, points);
  Eigen::ArrayXXd out;
  if (n == 2) {
    out = yg.values * yg.values + 2.0 * yg.values * w.zg.values + w.z2g.values;
  } else {
    out = yg.values * yg.values * yg.values +
          3.0 * yg.values * yg.values * w.zg.values +
          3.0 * yg.values * w.z2g.values + w.z3g.values;
  }
  return grid::from_grid({points, y.side(), std::move(out)}, y.cutoff());
}

}  // namespace chslab::wick
