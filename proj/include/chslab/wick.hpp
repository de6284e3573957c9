#pragma once

#include "chslab/grid.hpp"
#include "chslab/spectral.hpp"

namespace chslab::wick {

// Probabilists' Hermite polynomial P_n, exact integer coefficients, n <= 8.
double hermite(int n, double x);

// sum_m C(n,m) P_m(s) t^{n-m}; equals hermite(n, s+t) identically.
double binomial_shift(int n, double s, double t);

enum class RenormMode {
  kCovariance,     // weights 1/lambda_k: the stationary variance constant
  kVarianceExact,  // weights (1 - e^{-t lambda_k^2}) / lambda_k at a given t
};

// (1/L^2) sum over 0 < |k|_inf <= N of the mode weight; the spatially
// constant variance of the truncated field at any physical point.
double renorm_constant(int cutoff, double side, RenormMode mode,
                       double t = -1.0);

// The renormalized squares and cubes of z. z2 and z3 hold the cutoff-N
// projections; the grid caches hold the exact pointwise values z^2 - c and
// z^3 - 3 c z on the dealiased grid, which is what products against other
// fields must use (projecting first would break the pointwise identity).
struct WickBundle {
  spectral::SpectralField z, z2, z3;
  double c = 0.0;
  grid::TorusGrid zg, z2g, z3g;
};

// points == 0 derives the grid from the cutoff with cubic-safe oversampling.
WickBundle make_wick_bundle(const spectral::SpectralField& z, double c,
                            int points = 0);

// n=3: y^3 + 3 y^2 z + 3 y z2 + z3; n=2: y^2 + 2 y z + z2. Evaluated
// pointwise on the bundle grid, then projected to the cutoff of y.
spectral::SpectralField recombine(const spectral::SpectralField& y,
                                  const WickBundle& w, int n);

}  // namespace chslab::wick
