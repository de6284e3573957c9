#include <cmath>
#include <vector>

#include "chslab/gibbs.hpp"
#include "chslab/integrator.hpp"
#include "chslab/ou.hpp"
#include "chslab/rng.hpp"
#include "chslab/spectral.hpp"
#include "chslab/stats.hpp"
#include "chslab/wick.hpp"
#include "doctest.h"

namespace gibbs = chslab::gibbs;
namespace ou = chslab::ou;
namespace rng = chslab::rng;
namespace spectral = chslab::spectral;
namespace wick = chslab::wick;
using spectral::SpectralField;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_SUITE("gibbs") {

TEST_CASE("potential of simple fields, closed forms") {
  const double c = 0.15;
  // phi = 0: (1/4) * 3 c^2 L^2
  const SpectralField zero(3, 2.0);
  CHECK(gibbs::potential_of(zero, c) ==
        doctest::Approx(0.75 * c * c * 4.0).epsilon(1e-13));

  // phi = a cos(pi x1): integral phi^4 = 6 a^4 / L^2, integral phi^2 = 2 a^2
  const double a = 0.9;
  SpectralField cosine(3, 2.0);
  cosine.c(1, 0) = {a, 0.0};
  cosine.c(-1, 0) = {a, 0.0};
  const double want =
      0.25 * (1.5 * a * a * a * a - 12.0 * c * a * a + 12.0 * c * c);
  CHECK(gibbs::potential_of(cosine, c) ==
        doctest::Approx(want).epsilon(1e-12));

  // the coupling is an overall factor
  CHECK(gibbs::potential_of(cosine, c, 2.5) ==
        doctest::Approx(2.5 * want).epsilon(1e-12));
}

TEST_CASE("coercivity floor is attained by the constant minimizer") {
  const double c = 0.21;
  // phi == sqrt(3c) minimizes x^4 - 6cx^2 + 3c^2 pointwise at -6c^2
  SpectralField flat(2, 2.0);
  flat.c(0, 0) = {std::sqrt(3.0 * c) * 2.0, 0.0};  // constant v has coeff v*L
  CHECK(gibbs::potential_of(flat, c) ==
        doctest::Approx(-1.5 * c * c * 4.0).epsilon(1e-12));

  // random fields never go below the floor
  const rng::Key key = rng::make_key(50, rng::Stream::kFreeField);
  for (int i = 0; i < 50; ++i)
    CHECK(gibbs::potential_of(
              ou::stationary_sample(4, 2.0, key, static_cast<std::uint64_t>(i)),
              c) >= -1.5 * c * c * 4.0 - 1e-12);
}

TEST_CASE("free-field expectation of the potential vanishes") {
  const int cutoff = 4;
  const double c =
      wick::renorm_constant(cutoff, 2.0, wick::RenormMode::kCovariance);
  const rng::Key key = rng::make_key(808, rng::Stream::kFreeField);
  const int n = 3000;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i)
    u[i] = gibbs::potential_of(
        ou::stationary_sample(cutoff, 2.0, key, static_cast<std::uint64_t>(i)),
        c);
  const double mean = chslab::stats::mean(u);
  const double se = chslab::stats::std_error(u);
  CHECK(std::abs(mean) < 5.0 * se);
}

TEST_CASE("with the quartic off every proposal is accepted") {
  gibbs::GibbsChainState s = gibbs::make_chain(3, 2.0, 0.4, 11, 0, 0.0);
  for (int i = 0; i < 200; ++i) s = gibbs::pcn_step(std::move(s));
  CHECK(s.proposed == 200);
  CHECK(s.accepted == 200);
  CHECK(s.acceptance_rate() == 1.0);
}

TEST_CASE("at beta = 1 the proposal forgets the current state") {
  gibbs::GibbsChainState a = gibbs::make_chain(3, 2.0, 1.0, 21, 0, 0.0);
  gibbs::GibbsChainState b = a;
  b.phi.coeffs() *= 2.0;
  b.potential = gibbs::potential_of(b.phi, b.c, b.quartic);
  a = gibbs::pcn_step(std::move(a));
  b = gibbs::pcn_step(std::move(b));
  CHECK((a.phi.coeffs() - b.phi.coeffs()).abs().maxCoeff() == 0.0);
}

TEST_CASE("cached potential stays coherent with the state") {
  gibbs::GibbsChainState s = gibbs::make_chain(3, 2.0, 0.5, 33, 0, 1.0);
  for (int i = 0; i < 300; ++i) s = gibbs::pcn_step(std::move(s));
  CHECK(s.proposed == 300);
  CHECK(s.accepted <= s.proposed);
  const double recomputed =
      gibbs::potential_of(s.phi, s.c, s.quartic);
  CHECK(s.potential == doctest::Approx(recomputed).epsilon(1e-12));
  CHECK(s.phi.mean_coeff() == 0.0);
  CHECK(spectral::is_hermitian(s.phi));
}

TEST_CASE("free-field chain reproduces the mode law") {
  const int cutoff = 2;
  gibbs::GibbsChainState s = gibbs::make_chain(cutoff, 2.0, 0.6, 91, 0, 0.0);
  const int burn = 500, keep = 20000;
  for (int i = 0; i < burn; ++i) s = gibbs::pcn_step(std::move(s));
  std::vector<double> m10(keep), m11(keep);
  for (int i = 0; i < keep; ++i) {
    s = gibbs::pcn_step(std::move(s));
    m10[i] = std::norm(s.phi.c(1, 0));
    m11[i] = std::norm(s.phi.c(1, 1));
  }
  const double l10 = kPi * kPi, l11 = 2.0 * kPi * kPi;
  const double se10 = chslab::stats::batch_means_se(m10);
  const double se11 = chslab::stats::batch_means_se(m11);
  CHECK(std::abs(chslab::stats::mean(m10) - 1.0 / l10) < 5.0 * se10);
  CHECK(std::abs(chslab::stats::mean(m11) - 1.0 / l11) < 5.0 * se11);
}

TEST_CASE("determinism of the chain") {
  gibbs::GibbsChainState a = gibbs::make_chain(3, 2.0, 0.5, 7, 2, 1.0);
  gibbs::GibbsChainState b = gibbs::make_chain(3, 2.0, 0.5, 7, 2, 1.0);
  for (int i = 0; i < 100; ++i) {
    a = gibbs::pcn_step(std::move(a));
    b = gibbs::pcn_step(std::move(b));
  }
  CHECK((a.phi.coeffs() - b.phi.coeffs()).abs().maxCoeff() == 0.0);
  CHECK(a.accepted == b.accepted);

  gibbs::GibbsChainState c = gibbs::make_chain(3, 2.0, 0.5, 7, 3, 1.0);
  for (int i = 0; i < 100; ++i) c = gibbs::pcn_step(std::move(c));
  CHECK((a.phi.coeffs() - c.phi.coeffs()).abs().maxCoeff() > 0.0);
}

TEST_CASE("crosscheck machinery at a tiny budget") {
  chslab::dynamics::SimConfig cfg;
  cfg.cutoff = 2;
  cfg.dt = 5e-4;
  cfg.seed = 1234;
  cfg.cubic = 0.0;
  gibbs::InvarianceBudget budget;
  budget.chain_steps = 4000;
  budget.chain_burnin = 500;
  budget.chain_thin = 1;
  budget.dyn_steps = 30000;
  budget.dyn_burnin = 1000;
  budget.dyn_thin = 10;
  budget.ess_floor = 5.0;
  const gibbs::InvarianceReport rep = gibbs::invariance_crosscheck(cfg, budget);

  // 3 functionals plus |k|_inf <= 2 representatives
  CHECK(rep.panel.size() == 15);
  CHECK(rep.chain_series.size() == rep.panel.size());
  CHECK(rep.dyn_series.size() == rep.panel.size());
  CHECK(rep.chain_series[0].size() == 4000);
  CHECK(rep.dyn_series[0].size() == 2901);
  for (const auto& e : rep.panel) {
    CHECK(std::isfinite(e.z));
    CHECK(e.chain_se > 0.0);
    CHECK(e.dyn_se > 0.0);
    CHECK(e.has_closed_form);  // quartic off: every entry has one
  }
  CHECK(rep.beta > 0.0);
  CHECK(rep.acceptance_rate == 1.0);  // free-field target accepts everything
}

}  // TEST_SUITE
