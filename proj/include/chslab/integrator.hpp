#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chslab/ou.hpp"
#include "chslab/spectral.hpp"
#include "chslab/wick.hpp"

namespace chslab::dynamics {

enum class Scheme { kExponentialEuler, kSemiImplicitCn };
enum class Dealias { kOversample, kTwoThirds };

struct SimConfig {
  int cutoff = 8;
  double side = 2.0;
  int points = 0;  // 0 derives the grid from the dealias policy
  double dt = 1e-3;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  wick::RenormMode wick_mode = wick::RenormMode::kCovariance;
  Dealias dealias = Dealias::kOversample;
  Scheme scheme = Scheme::kExponentialEuler;
  double cubic = 1.0;  // nonlinearity coupling; 0 switches the cubic off

  int resolved_points() const;
  std::size_t step_count() const;
  void validate() const;
};

// Per-step records of every term in the dissipation balance
//   d/dt |Y|_{H^-1}^2 + |Y|_{H^1}^2 + |Y|_{L^4}^4 = pairing,
// with pairing = -<3 Y^2 Z + 3 Y z2 + z3, Y>. One row per grid time.
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> h_minus1_sq;
  std::vector<double> h1_sq;
  std::vector<double> l4_quad;
  std::vector<double> pairing;

  std::size_t size() const { return times.size(); }
};

struct BlowUpError : std::runtime_error {
  BlowUpError(std::size_t step_, double t_, double h_minus1_)
      : std::runtime_error("trajectory blew up"),
        step(step_),
        t(t_),
        h_minus1(h_minus1_) {}
  std::size_t step;
  double t;
  double h_minus1;
};

// Z evaluated at grid time index j; implementations may assume consecutive
// calls j = 0, 1, 2, ...
using ZPath = std::function<const spectral::SpectralField&(std::size_t)>;

ZPath zero_z_path(int cutoff, double side);

// OU path on the cfg time grid. When gen_dt > 0 the path is generated by
// exact stepping at gen_dt and observed every cfg.dt (cfg.dt must be an
// integer multiple), so runs at different dt share one noise realization.
ZPath ou_z_path(const SimConfig& cfg, double gen_dt = 0.0,
                std::uint64_t instance = 0);

// cubic * (y^3 + 3 y^2 z + 3 y z2 + z3) projected to the cutoff. The A/2
// factor of the drift lives in the stepper.
spectral::SpectralField nonlinearity(const spectral::SpectralField& y,
                                     const wick::WickBundle& w,
                                     double cubic = 1.0);

// One step of the shifted dynamics. The mean mode is never written, so it is
// conserved bitwise.
spectral::SpectralField step(const spectral::SpectralField& y,
                             const wick::WickBundle& w, double dt,
                             Scheme scheme = Scheme::kExponentialEuler,
                             double cubic = 1.0);

struct StepView {
  std::size_t index;
  double t;
  const spectral::SpectralField& y;
  const wick::WickBundle& w;
};
using StepObserver = std::function<void(const StepView&)>;

// Drives the trajectory and fills the ledger; the observer (optional) sees
// every grid time including t=0. Throws BlowUpError on NaN or on
// |Y|_{H^-1} > 1e6.
EnergyLedger integrate_observe(const SimConfig& cfg,
                               const spectral::SpectralField& y0,
                               const ZPath& z_path,
                               const StepObserver& observer = {});

std::pair<std::vector<spectral::SpectralField>, EnergyLedger> integrate(
    const SimConfig& cfg, const spectral::SpectralField& y0,
    const ZPath& z_path);

// Full solution X = Y + Z with Z freshly generated from cfg.seed and
// Y(0) = x0 (Z(0) = 0).
void solve_full_observe(
    const SimConfig& cfg, const spectral::SpectralField& x0,
    const std::function<void(std::size_t, double, const spectral::SpectralField&)>&
        on_x,
    std::uint64_t instance = 0);

std::vector<spectral::SpectralField> solve_full(
    const SimConfig& cfg, const spectral::SpectralField& x0,
    std::uint64_t instance = 0);

// Empirical linear-response factor: integrates twice with identical noise and
// initial data separated by delta in H^-1, returns sup_t |r|_{H^-1} / delta.
// delta == 0 returns 1 by convention (the two runs coincide bitwise).
double stability_probe(const SimConfig& cfg, const spectral::SpectralField& y0,
                       double delta);

}  // namespace chslab::dynamics
