#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace chslab::spectral {

using Complex = std::complex<double>;

struct ModeIndex {
  int k1 = 0;
  int k2 = 0;
};

// (2pi/L)^2 |k|^2; with the default side L=2 the axis mode (1,0) sits at pi^2.
double eigenvalue(ModeIndex k, double side);

// A real scalar field on the side-L torus, stored as Fourier coefficients on
// the full square [-N,N]^2 against the orthonormal basis
// (1/L) exp(i (2pi/L) k.x). Real-valuedness means c(-k) == conj(c(k)); the
// builders below maintain that and the tests assert it on random fields.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int cutoff, double side) : n_(cutoff), side_(side) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
    if (!(side > 0.0)) throw std::invalid_argument("side must be positive");
    a_ = Eigen::ArrayXXcd::Zero(2 * cutoff + 1, 2 * cutoff + 1);
  }

  int cutoff() const { return n_; }
  double side() const { return side_; }

  Complex c(int k1, int k2) const { return a_(k1 + n_, k2 + n_); }
  Complex& c(int k1, int k2) { return a_(k1 + n_, k2 + n_); }

  const Eigen::ArrayXXcd& coeffs() const { return a_; }
  Eigen::ArrayXXcd& coeffs() { return a_; }

  // m(u): the (0,0) coefficient, real for a real field.
  double mean_coeff() const { return a_(n_, n_).real(); }

 private:
  int n_ = 0;
  double side_ = 0.0;
  Eigen::ArrayXXcd a_;
};

// The representative of each +-k pair used when sampling Hermitian fields;
// exactly one of {k, -k} is a representative for k != 0.
inline bool is_representative(int k1, int k2) {
  return k2 > 0 || (k2 == 0 && k1 > 0);
}

bool is_hermitian(const SpectralField& u, double tol = 1e-12);

// Mirrors the representative half onto the conjugate half and forces the
// (0,0) coefficient real; used after constructions that fill one half.
void enforce_hermitian(SpectralField& u);

enum class OpTag { kA, kASquared, kQ, kQBar, kLambdaS, kPi, kHeatSemigroup };

// Diagonal mode multipliers. power is the exponent for Q, QBar and Lambda^s;
// time parametrizes the biharmonic heat semigroup exp(-t A^2).
struct LinearOperator {
  OpTag tag = OpTag::kPi;
  double power = 1.0;
  double time = 0.0;

  static LinearOperator a() { return {OpTag::kA}; }
  static LinearOperator a_squared() { return {OpTag::kASquared}; }
  static LinearOperator q(double s = 1.0) { return {OpTag::kQ, s}; }
  static LinearOperator q_bar(double s = 1.0) { return {OpTag::kQBar, s}; }
  static LinearOperator lambda_s(double s) { return {OpTag::kLambdaS, s}; }
  static LinearOperator pi() { return {OpTag::kPi}; }
  static LinearOperator heat(double t) {
    return {OpTag::kHeatSemigroup, 1.0, t};
  }
};

double multiplier(const LinearOperator& op, ModeIndex k, double side);

SpectralField apply(const LinearOperator& op, const SpectralField& u);

// sqrt( m(u)^2 + sum_{k != 0} lambda_k^alpha |u_k|^2 ).
double v_alpha_norm(const SpectralField& u, double alpha);

// Integral of u*v over the torus (Parseval; both fields share cutoff/side).
double l2_inner(const SpectralField& u, const SpectralField& v);

}  // namespace chslab::spectral
