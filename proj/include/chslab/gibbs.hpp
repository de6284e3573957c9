#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chslab/integrator.hpp"
#include "chslab/rng.hpp"
#include "chslab/spectral.hpp"

namespace chslab::gibbs {

// quartic * (1/4) integral of (phi^4 - 6 c phi^2 + 3 c^2) over the torus,
// by alias-free quadrature. points == 0 derives the exact-quartic grid.
double potential_of(const spectral::SpectralField& phi, double c,
                    double quartic = 1.0, int points = 0);

struct GibbsChainState {
  spectral::SpectralField phi;  // zero-mean
  double potential = 0.0;       // cached potential_of(phi)
  double beta = 0.5;            // proposal mixing in (0,1]
  double c = 0.0;               // shared with the dynamics' renormalization
  double quartic = 1.0;         // coupling; 0 targets the free field
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;
  std::uint64_t step_index = 0;
  rng::Key proposal_key;
  rng::Key accept_key;

  double acceptance_rate() const {
    return proposed ? static_cast<double>(accepted) / proposed : 0.0;
  }
};

// Chain starts from a free-field draw; the target is the quartic-tilted
// measure (the free field itself when quartic == 0).
GibbsChainState make_chain(int cutoff, double side, double beta,
                           std::uint64_t seed, std::uint64_t instance = 0,
                           double quartic = 1.0);

// Preconditioned Crank-Nicolson: propose sqrt(1-beta^2) phi + beta xi with
// xi a free-field draw, accept with min(1, exp(U(phi) - U(phi')))  -- the
// proposal is reversible for the free field, so the accept ratio involves
// only the potential and the chain is exactly invariant for the target.
GibbsChainState pcn_step(GibbsChainState state);

struct PanelEntry {
  std::string name;
  double chain_mean = 0.0;
  double chain_se = 0.0;
  double dyn_mean = 0.0;
  double dyn_se = 0.0;
  double z = 0.0;
  bool has_closed_form = false;
  double closed_form = 0.0;  // free-field value, attached when quartic == 0
};

struct InvarianceReport {
  std::vector<PanelEntry> panel;
  double beta = 0.0;             // frozen proposal size after adaptation
  double acceptance_rate = 0.0;  // measured over the sampling phase
  double ess_chain_min = 0.0;
  double ess_dyn_min = 0.0;
  bool converged = true;  // false when any effective sample size is too low

  // raw recorded series, one inner vector per panel entry, so callers can
  // persist the evidence behind the aggregates
  std::vector<std::vector<double>> chain_series;
  std::vector<std::vector<double>> dyn_series;
};

struct InvarianceBudget {
  std::size_t chain_steps = 200000;
  std::size_t chain_burnin = 20000;
  std::size_t dyn_steps = 2000000;  // horizon = dyn_steps * cfg.dt
  std::size_t dyn_burnin = 10000;   // steps discarded before recording
  std::size_t dyn_thin = 20;        // record every thin-th step
  std::size_t chain_thin = 1;
  double ess_floor = 50.0;
};

// Estimates a fixed observable panel (|phi|_{H^-1}^2, the renormalized square
// and quartic integrals, and |phi_k|^2 for |k|_inf <= 2) two ways: chain
// averages of the sampler, and time averages of the full dynamics started
// from the chain's final state. cfg supplies cutoff, side, dt, seed and the
// coupling; the same renormalization constant feeds both estimators.
InvarianceReport invariance_crosscheck(const dynamics::SimConfig& cfg,
                                       const InvarianceBudget& budget);

}  // namespace chslab::gibbs
