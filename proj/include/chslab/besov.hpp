#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chslab/spectral.hpp"

namespace chslab::besov {

struct BesovParams {
  double alpha = 0.0;
  double p = 2.0;  // INFINITY allowed
  double q = 2.0;  // INFINITY allowed
};

// Sharp dyadic shells on |k|: block -1 holds |k| <= 1, block j >= 0 holds
// 2^j <= |k| < 2^{j+1}. The boundary mode |k| = 1 lives in block -1 only, so
// the shells are disjoint and sum back to the identity exactly.
int block_of(spectral::ModeIndex k);

// Largest block index with support inside [-N,N]^2.
int top_block(int cutoff);

spectral::SpectralField lp_block(const spectral::SpectralField& u, int j);

double besov_norm(const spectral::SpectralField& u, const BesovParams& params);

// [10 / lambda_max^2, 1 / (10 lambda_min^2)]: the t-range in which the
// semigroup decay is governed by resolved modes rather than the truncation.
std::pair<double, double> resolved_window(int cutoff, double side);

// Least-squares slope of log |e^{-tA^2} u|_{B^{alpha+delta}_{2,2}} against
// log t. Requires t_grid inside the resolved window and a field whose
// support spans at least three shells (a pure mode has no power law).
double schauder_slope(const spectral::SpectralField& u, double alpha,
                      double delta, const std::vector<double>& t_grid);

// Synthetic field with |u_k| ~ |k|^{-(1+alpha)} Gaussian amplitudes: rough
// enough that smoothing rates are visible, regular enough to be
// resolution-stable.
spectral::SpectralField rough_field(int cutoff, double side, double alpha,
                                    std::uint64_t seed,
                                    std::uint64_t instance = 0);

}  // namespace chslab::besov
