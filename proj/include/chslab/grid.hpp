#pragma once

#include <Eigen/Dense>

#include "chslab/spectral.hpp"

namespace chslab::grid {

// Physical-space samples of a field on the uniform M x M grid
// x = (m1, m2) * L / M.
struct TorusGrid {
  int points = 0;
  double side = 0.0;
  Eigen::ArrayXXd values;  // (m1, m2)
};

// Smallest power of two at or above n.
int next_pow2(int n);

// Grid size with full dealiasing for cubic products of cutoff-N fields
// (M > 4N also makes quartic integrals exact).
int dealias_points(int cutoff);

// Cheaper 3/2-style grid; quadratic products are exact, cubic ones keep a
// small aliasing residue.
int two_thirds_points(int cutoff);

spectral::SpectralField truncate(const spectral::SpectralField& u, int cutoff);

TorusGrid to_grid(const spectral::SpectralField& u, int points);
spectral::SpectralField from_grid(const TorusGrid& g, int cutoff);

// (L/M)^2 sum over grid points; exact for band-limited integrands whose
// bandwidth stays below M.
double integral(const TorusGrid& g);
double integral(const Eigen::ArrayXXd& values, int points, double side);

}  // namespace chslab::grid
