#include "chslab/spectral.hpp"

#include <cmath>

#include "chslab/stats.hpp"

namespace chslab::spectral {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

double eigenvalue(ModeIndex k, double side) {
  if (!(side > 0.0)) throw std::invalid_argument("side must be positive");
  const double f = 2.0 * kPi / side;
  return f * f * (static_cast<double>(k.k1) * k.k1 +
                  static_cast<double>(k.k2) * k.k2);
}

bool is_hermitian(const SpectralField& u, double tol) {
  const int n = u.cutoff();
  if (std::abs(u.c(0, 0).imag()) > tol) return false;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      const Complex d = u.c(k1, k2) - std::conj(u.c(-k1, -k2));
      if (std::abs(d) > tol) return false;
    }
  return true;
}

void enforce_hermitian(SpectralField& u) {
  const int n = u.cutoff();
  u.c(0, 0) = Complex(u.c(0, 0).real(), 0.0);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      if (is_representative(k1, k2)) u.c(-k1, -k2) = std::conj(u.c(k1, k2));
}

double multiplier(const LinearOperator& op, ModeIndex k, double side) {
  const bool origin = (k.k1 == 0 && k.k2 == 0);
  const double lambda = eigenvalue(k, side);
  switch (op.tag) {
    case OpTag::kA:
      return -lambda;
    case OpTag::kASquared:
      return lambda * lambda;
    case OpTag::kQ:
      return origin ? 0.0 : std::pow(lambda, -op.power);
    case OpTag::kQBar:
      return origin ? 1.0 : std::pow(lambda, -op.power);
    case OpTag::kLambdaS:
      return std::pow(1.0 + lambda, op.power / 2.0);
    case OpTag::kPi:
      return origin ? 0.0 : 1.0;
    case OpTag::kHeatSemigroup:
      return std::exp(-op.time * lambda * lambda);
  }
  throw std::logic_error("unknown operator tag");
}

SpectralField apply(const LinearOperator& op, const SpectralField& u) {
  const int n = u.cutoff();
  SpectralField out(n, u.side());
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      out.c(k1, k2) = multiplier(op, {k1, k2}, u.side()) * u.c(k1, k2);
  return out;
}

double v_alpha_norm(const SpectralField& u, double alpha) {
  const int n = u.cutoff();
  stats::KahanSum s;
  const double m = u.mean_coeff();
  s.add(m * m);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double lambda = eigenvalue({k1, k2}, u.side());
      s.add(std::pow(lambda, alpha) * std::norm(u.c(k1, k2)));
    }
  return std::sqrt(s.value());
}

double l2_inner(const SpectralField& u, const SpectralField& v) {
  if (u.cutoff() != v.cutoff() || u.side() != v.side())
    throw std::invalid_argument("field layouts differ");
  const int n = u.cutoff();
  stats::KahanSum s;
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      s.add((u.c(k1, k2) * std::conj(v.c(k1, k2))).real());
  return s.value();
}

}  // namespace chslab::spectral
