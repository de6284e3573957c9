#include "chslab/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "chslab/grid.hpp"
#include "chslab/ou.hpp"
#include "chslab/stats.hpp"
#include "chslab/wick.hpp"

namespace chslab::gibbs {

using spectral::ModeIndex;
using spectral::SpectralField;

double potential_of(const SpectralField& phi, double c, double quartic,
                    int points) {
  if (c < 0.0) throw std::invalid_argument("renormalization constant negative");
  if (points == 0) points = grid::dealias_points(phi.cutoff());
  const grid::TorusGrid g = grid::to_grid(phi, points);
  const double area = phi.side() * phi.side();

  stats::KahanSum s;
  const double* p = g.values.data();
  const std::size_t count = static_cast<std::size_t>(points) * points;
  for (std::size_t i = 0; i < count; ++i) {
    const double x2 = p[i] * p[i];
    s.add(x2 * x2 - 6.0 * c * x2 + 3.0 * c * c);
  }
  const double h = phi.side() / points;
  const double value = 0.25 * quartic * s.value() * h * h;

  // x^4 - 6cx^2 + 3c^2 has its minimum -6c^2 at x^2 = 3c, so the potential
  // can never drop below -(3/2) quartic c^2 L^2; a violation means the
  // quadrature itself is broken.
  if (quartic >= 0.0) {
    const double floor = -1.5 * quartic * c * c * area;
    if (!(value >= floor - 1e-8 * (1.0 + std::abs(floor))))
      throw std::logic_error("potential fell below its coercivity bound");
  }
  return value;
}

GibbsChainState make_chain(int cutoff, double side, double beta,
                           std::uint64_t seed, std::uint64_t instance,
                           double quartic) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in (0,1]");
  GibbsChainState s;
  s.phi = ou::stationary_sample(cutoff, side,
                                rng::make_key(seed, rng::Stream::kFreeField,
                                              instance),
                                0);
  s.beta = beta;
  s.quartic = quartic;
  s.c = wick::renorm_constant(cutoff, side, wick::RenormMode::kCovariance);
  s.potential = potential_of(s.phi, s.c, s.quartic);
  s.proposal_key = rng::make_key(seed, rng::Stream::kPcnProposal, instance);
  s.accept_key = rng::make_key(seed, rng::Stream::kPcnAccept, instance);
  return s;
}

GibbsChainState pcn_step(GibbsChainState state) {
  const SpectralField xi = ou::stationary_sample(
      state.phi.cutoff(), state.phi.side(), state.proposal_key,
      state.step_index);
  SpectralField proposal = state.phi;
  proposal.coeffs() = std::sqrt(1.0 - state.beta * state.beta) *
                          state.phi.coeffs() +
                      state.beta * xi.coeffs();
  const double proposed_potential =
      potential_of(proposal, state.c, state.quartic);

  const double log_ratio = state.potential - proposed_potential;
  const auto bits =
      rng::philox({state.step_index, 0, 0, 0}, state.accept_key);
  const double u = rng::u01(bits[0]);
  if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
    state.phi = std::move(proposal);
    state.potential = proposed_potential;
    ++state.accepted;
  }
  ++state.proposed;
  ++state.step_index;
  return state;
}

namespace {

// The observable panel shared by both estimators: H^-1 norm squared, the
// renormalized square and quartic integrals, and the low-mode power spectrum.
struct Panel {
  std::vector<std::string> names;
  std::vector<ModeIndex> modes;  // representatives with |k|_inf <= 2
  double c = 0.0;
  int points = 0;

  std::size_t size() const { return 3 + modes.size(); }

  void evaluate(const SpectralField& phi, std::vector<double>& out) const {
    out.clear();
    out.push_back(std::pow(spectral::v_alpha_norm(phi, -1.0), 2));

    stats::KahanSum power;
    const auto& a = phi.coeffs();
    for (Eigen::Index i = 0; i < a.size(); ++i)
      power.add(std::norm(a(i)));
    const double area = phi.side() * phi.side();
    out.push_back(power.value() - c * area);

    out.push_back(4.0 * potential_of(phi, c, 1.0, points));

    for (const ModeIndex& k : modes) out.push_back(std::norm(phi.c(k.k1, k.k2)));
  }
};

Panel make_panel(int cutoff, double c, int points) {
  Panel p;
  p.c = c;
  p.points = points;
  p.names = {"h_minus1_sq", "wick2_integral", "wick4_integral"};
  const int reach = std::min(cutoff, 2);
  for (int k2 = 0; k2 <= reach; ++k2)
    for (int k1 = -reach; k1 <= reach; ++k1) {
      if (!spectral::is_representative(k1, k2)) continue;
      p.modes.push_back({k1, k2});
      char buf[48];
      std::snprintf(buf, sizeof buf, "mode_sq_%d_%d", k1, k2);
      p.names.emplace_back(buf);
    }
  return p;
}

// Free-field expectations, attached to the report when the quartic coupling
// is off so the crosscheck has an external target.
double free_field_value(const Panel& p, std::size_t i, int cutoff,
                        double side) {
  if (p.names[i] == "h_minus1_sq") {
    stats::KahanSum s;
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
      for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        const double lam = spectral::eigenvalue({k1, k2}, side);
        s.add(1.0 / (lam * lam));
      }
    return s.value();
  }
  if (p.names[i] == "wick2_integral" || p.names[i] == "wick4_integral")
    return 0.0;
  const ModeIndex k = p.modes[i - 3];
  return 1.0 / spectral::eigenvalue(k, side);
}

}  // namespace

InvarianceReport invariance_crosscheck(const dynamics::SimConfig& cfg,
                                       const InvarianceBudget& budget) {
  cfg.validate();
  const double c = wick::renorm_constant(cfg.cutoff, cfg.side,
                                         wick::RenormMode::kCovariance);
  const Panel panel = make_panel(cfg.cutoff, c, cfg.resolved_points());

  GibbsChainState chain =
      make_chain(cfg.cutoff, cfg.side, 0.5, cfg.seed, 0, cfg.cubic);

  // Burn-in with step-size adaptation toward ~0.3 acceptance; beta is frozen
  // before any samples are recorded.
  const std::size_t block = 200;
  std::uint64_t block_accepted = 0;
  for (std::size_t i = 0; i < budget.chain_burnin; ++i) {
    chain = pcn_step(std::move(chain));
    if ((i + 1) % block == 0) {
      const double rate =
          static_cast<double>(chain.accepted - block_accepted) / block;
      if (rate > 0.35)
        chain.beta = std::min(1.0, chain.beta * 1.2);
      else if (rate < 0.25)
        chain.beta = std::max(1e-3, chain.beta / 1.2);
      block_accepted = chain.accepted;
    }
  }
  chain.accepted = 0;
  chain.proposed = 0;

  std::vector<std::vector<double>> chain_series(panel.size());
  std::vector<double> row;
  for (std::size_t i = 0; i < budget.chain_steps; ++i) {
    chain = pcn_step(std::move(chain));
    if ((i + 1) % budget.chain_thin) continue;
    panel.evaluate(chain.phi, row);
    for (std::size_t j = 0; j < panel.size(); ++j)
      chain_series[j].push_back(row[j]);
  }

  // Time averages of the full dynamics, started from the chain's final state
  // so the initial law is (approximately) the target measure.
  dynamics::SimConfig dcfg = cfg;
  dcfg.horizon = static_cast<double>(budget.dyn_steps) * cfg.dt;
  std::vector<std::vector<double>> dyn_series(panel.size());
  dynamics::solve_full_observe(
      dcfg, chain.phi,
      [&](std::size_t index, double, const SpectralField& x) {
        if (index < budget.dyn_burnin || index % budget.dyn_thin) return;
        panel.evaluate(x, row);
        for (std::size_t j = 0; j < panel.size(); ++j)
          dyn_series[j].push_back(row[j]);
      });

  InvarianceReport report;
  report.beta = chain.beta;
  report.acceptance_rate = chain.acceptance_rate();
  report.ess_chain_min = INFINITY;
  report.ess_dyn_min = INFINITY;
  for (std::size_t j = 0; j < panel.size(); ++j) {
    PanelEntry e;
    e.name = panel.names[j];
    e.chain_mean = stats::mean(chain_series[j]);
    e.chain_se = stats::batch_means_se(chain_series[j]);
    e.dyn_mean = stats::mean(dyn_series[j]);
    e.dyn_se = stats::batch_means_se(dyn_series[j]);
    e.z = stats::z_score(e.chain_mean, e.chain_se, e.dyn_mean, e.dyn_se);
    if (cfg.cubic == 0.0) {
      e.has_closed_form = true;
      e.closed_form = free_field_value(panel, j, cfg.cutoff, cfg.side);
    }
    report.panel.push_back(std::move(e));
    report.ess_chain_min = std::min(
        report.ess_chain_min, stats::effective_sample_size(chain_series[j]));
    report.ess_dyn_min = std::min(report.ess_dyn_min,
                                  stats::effective_sample_size(dyn_series[j]));
  }
  report.converged = report.ess_chain_min >= budget.ess_floor &&
                     report.ess_dyn_min >= budget.ess_floor;
  report.chain_series = std::move(chain_series);
  report.dyn_series = std::move(dyn_series);
  return report;
}

}  // namespace chslab::gibbs
