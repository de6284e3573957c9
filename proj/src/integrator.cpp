#include "chslab/integrator.hpp"

#include <cmath>
#include <memory>

#include "chslab/grid.hpp"
#include "chslab/stats.hpp"

namespace chslab::dynamics {

namespace {

// phi1(z) = (e^z - 1)/z, with a series branch where the direct form would
// cancel catastrophically.
double phi1(double z) {
  if (std::abs(z) < 1e-4)
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return std::expm1(z) / z;
}

struct StepTables {
  Eigen::ArrayXXd propagate;  // multiplier on y
  Eigen::ArrayXXd gain;       // multiplier on the nonlinearity transform
};

StepTables make_tables(int n, double side, double dt, Scheme scheme) {
  StepTables t;
  t.propagate = Eigen::ArrayXXd::Zero(2 * n + 1, 2 * n + 1);
  t.gain = Eigen::ArrayXXd::Zero(2 * n + 1, 2 * n + 1);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (k1 == 0 && k2 == 0) continue;  // mean mode is never written
      const double lambda = spectral::eigenvalue({k1, k2}, side);
      if (scheme == Scheme::kExponentialEuler) {
        const double z = -lambda * lambda * dt / 2.0;
        t.propagate(k1 + n, k2 + n) = std::exp(z);
        t.gain(k1 + n, k2 + n) = dt * phi1(z) * (-lambda / 2.0);
      } else {
        const double a = dt * lambda * lambda / 4.0;
        t.propagate(k1 + n, k2 + n) = (1.0 - a) / (1.0 + a);
        t.gain(k1 + n, k2 + n) = dt * (-lambda / 2.0) / (1.0 + a);
      }
    }
  return t;
}

spectral::SpectralField apply_tables(const StepTables& t,
                                     const spectral::SpectralField& y,
                                     const spectral::SpectralField& nhat) {
  const int n = y.cutoff();
  spectral::SpectralField out(n, y.side());
  out.coeffs() = t.propagate.cast<spectral::Complex>() * y.coeffs() +
                 t.gain.cast<spectral::Complex>() * nhat.coeffs();
  out.c(0, 0) = y.c(0, 0);
  return out;
}

// Grid-level evaluation shared by the stepper and the ledger so the balance
// terms refer to exactly the nonlinearity that was applied.
struct NonlinearEval {
  Eigen::ArrayXXd total;  // cubic * (y^3 + cross terms)
  double l4 = 0.0;        // integral of y^4
  double pairing = 0.0;   // -cubic * <3 y^2 z + 3 y z2 + z3, y>
};

NonlinearEval eval_nonlinearity(const grid::TorusGrid& yg,
                                const wick::WickBundle& w, double cubic) {
  NonlinearEval e;
  const Eigen::ArrayXXd y2 = yg.values * yg.values;
  const Eigen::ArrayXXd cross =
      3.0 * y2 * w.zg.values + 3.0 * yg.values * w.z2g.values + w.z3g.values;
  e.total = cubic * (y2 * yg.values + cross);
  e.l4 = grid::integral(y2 * y2, yg.points, yg.side);
  e.pairing =
      -cubic * grid::integral(cross * yg.values, yg.points, yg.side);
  return e;
}

double h_norm_sq(const spectral::SpectralField& u, double alpha) {
  const double v = spectral::v_alpha_norm(u, alpha);
  return v * v;
}

}  // namespace

int SimConfig::resolved_points() const {
  if (points > 0) return points;
  return dealias == Dealias::kOversample ? grid::dealias_points(cutoff)
                                         : grid::two_thirds_points(cutoff);
}

std::size_t SimConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

void SimConfig::validate() const {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("side must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("horizon must be >= dt");
  if (resolved_points() < 2 * cutoff + 1)
    throw std::invalid_argument("grid too small for the cutoff");
}

ZPath zero_z_path(int cutoff, double side) {
  auto zero = std::make_shared<spectral::SpectralField>(cutoff, side);
  return [zero](std::size_t) -> const spectral::SpectralField& {
    return *zero;
  };
}

ZPath ou_z_path(const SimConfig& cfg, double gen_dt, std::uint64_t instance) {
  if (gen_dt <= 0.0) gen_dt = cfg.dt;
  const auto ratio = std::llround(cfg.dt / gen_dt);
  if (ratio < 1 || std::abs(cfg.dt - ratio * gen_dt) > 1e-12 * cfg.dt)
    throw std::invalid_argument("cfg.dt must be an integer multiple of gen_dt");
  struct Lane {
    ou::OuState state;
    std::uint64_t fine = 0;
  };
  auto lane = std::make_shared<Lane>(
      Lane{ou::make_ou_state(cfg.cutoff, cfg.side, cfg.seed, instance), 0});
  const double fine_dt = gen_dt;
  return [lane, ratio, fine_dt](std::size_t j) -> const spectral::SpectralField& {
    const std::uint64_t target = static_cast<std::uint64_t>(j) * ratio;
    if (target < lane->fine)
      throw std::logic_error("z path must be consumed forward in time");
    while (lane->fine < target) {
      lane->state = ou::ou_step(std::move(lane->state), fine_dt);
      ++lane->fine;
    }
    return lane->state.z;
  };
}

spectral::SpectralField nonlinearity(const spectral::SpectralField& y,
                                     const wick::WickBundle& w, double cubic) {
  const grid::TorusGrid yg = grid::to_grid(y, w.zg.points);
  NonlinearEval e = eval_nonlinearity(yg, w, cubic);
  return grid::from_grid({yg.points, y.side(), std::move(e.total)},
                         y.cutoff());
}

spectral::SpectralField step(const spectral::SpectralField& y,
                             const wick::WickBundle& w, double dt,
                             Scheme scheme, double cubic) {
  const StepTables tables = make_tables(y.cutoff(), y.side(), dt, scheme);
  return apply_tables(tables, y, nonlinearity(y, w, cubic));
}

EnergyLedger integrate_observe(const SimConfig& cfg,
                               const spectral::SpectralField& y0,
                               const ZPath& z_path,
                               const StepObserver& observer) {
  cfg.validate();
  if (y0.cutoff() != cfg.cutoff || y0.side() != cfg.side)
    throw std::invalid_argument("initial data does not match the config");
  const int n = cfg.cutoff;
  const int points = cfg.resolved_points();
  const std::size_t steps = cfg.step_count();
  const StepTables tables = make_tables(n, cfg.side, cfg.dt, cfg.scheme);
  const double c_fixed =
      (cfg.wick_mode == wick::RenormMode::kCovariance)
          ? wick::renorm_constant(n, cfg.side, wick::RenormMode::kCovariance)
          : 0.0;

  EnergyLedger ledger;
  ledger.times.reserve(steps + 1);
  ledger.h_minus1_sq.reserve(steps + 1);
  ledger.h1_sq.reserve(steps + 1);
  ledger.l4_quad.reserve(steps + 1);
  ledger.pairing.reserve(steps + 1);

  spectral::SpectralField y = y0;
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * cfg.dt;
    const double c =
        (cfg.wick_mode == wick::RenormMode::kCovariance)
            ? c_fixed
            : wick::renorm_constant(n, cfg.side,
                                    wick::RenormMode::kVarianceExact, t);
    const wick::WickBundle w = wick::make_wick_bundle(z_path(j), c, points);
    const grid::TorusGrid yg = grid::to_grid(y, points);
    const NonlinearEval e = eval_nonlinearity(yg, w, cfg.cubic);

    ledger.times.push_back(t);
    ledger.h_minus1_sq.push_back(h_norm_sq(y, -1.0));
    ledger.h1_sq.push_back(h_norm_sq(y, 1.0));
    ledger.l4_quad.push_back(e.l4);
    ledger.pairing.push_back(e.pairing);
    if (observer) observer({j, t, y, w});
    if (j == steps) break;

    const spectral::SpectralField nhat =
        grid::from_grid({points, cfg.side, e.total}, n);
    y = apply_tables(tables, y, nhat);

    const double h = spectral::v_alpha_norm(y, -1.0);
    if (!std::isfinite(h) || h > 1e6)
      throw BlowUpError(j + 1, t + cfg.dt, h);
  }
  return ledger;
}

std::pair<std::vector<spectral::SpectralField>, EnergyLedger> integrate(
    const SimConfig& cfg, const spectral::SpectralField& y0,
    const ZPath& z_path) {
  std::vector<spectral::SpectralField> path;
  path.reserve(cfg.step_count() + 1);
  EnergyLedger ledger = integrate_observe(
      cfg, y0, z_path, [&path](const StepView& v) { path.push_back(v.y); });
  return {std::move(path), std::move(ledger)};
}

void solve_full_observe(
    const SimConfig& cfg, const spectral::SpectralField& x0,
    const std::function<void(std::size_t, double,
                             const spectral::SpectralField&)>& on_x,
    std::uint64_t instance) {
  // Z(0) = 0, so the shifted component starts at the full initial data.
  const ZPath z_path = ou_z_path(cfg, 0.0, instance);
  integrate_observe(cfg, x0, z_path, [&](const StepView& v) {
    spectral::SpectralField x = v.y;
    x.coeffs() += v.w.z.coeffs();  // the bundle carries Z at this grid time
    on_x(v.index, v.t, x);
  });
}

std::vector<spectral::SpectralField> solve_full(
    const SimConfig& cfg, const spectral::SpectralField& x0,
    std::uint64_t instance) {
  std::vector<spectral::SpectralField> xs;
  xs.reserve(cfg.step_count() + 1);
  solve_full_observe(
      cfg, x0,
      [&xs](std::size_t, double, const spectral::SpectralField& x) {
        xs.push_back(x);
      },
      instance);
  return xs;
}

double stability_probe(const SimConfig& cfg, const spectral::SpectralField& y0,
                       double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  if (delta == 0.0) return 1.0;  // identical seeds, identical data, r == 0

  // unit-H^-1 perturbation on the lowest mode pair
  spectral::SpectralField p(cfg.cutoff, cfg.side);
  const double lambda = spectral::eigenvalue({1, 0}, cfg.side);
  const double amp = std::sqrt(lambda / 2.0);
  p.c(1, 0) = spectral::Complex(amp, 0.0);
  p.c(-1, 0) = spectral::Complex(amp, 0.0);

  spectral::SpectralField y0b = y0;
  y0b.coeffs() += delta * p.coeffs();

  std::vector<spectral::SpectralField> base;
  base.reserve(cfg.step_count() + 1);
  integrate_observe(cfg, y0, ou_z_path(cfg), [&base](const StepView& v) {
    base.push_back(v.y);
  });
  double sup = 0.0;
  integrate_observe(cfg, y0b, ou_z_path(cfg), [&](const StepView& v) {
    spectral::SpectralField r = v.y;
    r.coeffs() -= base[v.index].coeffs();
    sup = std::max(sup, spectral::v_alpha_norm(r, -1.0) / delta);
  });
  return sup;
}

}  // namespace chslab::dynamics
