#include <doctest.h>

#include <cmath>
#include <random>

#include "liscrb/errors.hpp"
#include "liscrb/estimator.hpp"
#include "liscrb/phase.hpp"
#include "test_support.hpp"

using namespace liscrb;

namespace {

EtaMatrix crlb_sigma(const Scenario& s) {
  const ChannelParams p = channel_params_from_geometry(s);
  BoundsOptions closed;
  closed.source = FimSource::closed_form;
  const FimMatrix j = fim_channel(s, p, incremental_phase(s, p), test::seeded_precoder(s.n_b), closed);
  return invert_information(j.entries).covariance;
}

}  // namespace

TEST_CASE("init_from_los") {
  const Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  const KnownGeometry known = KnownGeometry::from(s);
  const PositionState z = init_from_los(p.eta(), known);
  CHECK((z.m - s.m).norm() < 1e-9);
  CHECK(std::abs(z.alpha - s.alpha) < 1e-12);

  // First-order sensitivity to theta: |dm| = c tau delta.
  const double delta = 1e-6;
  EtaVector e = p.eta();
  e[kThetaBM] += delta;
  const double moved = (init_from_los(e, known).m - s.m).norm();
  CHECK(moved == doctest::Approx(s.c * p.tau_bm * delta).epsilon(1e-4));

  // NLoS entries are ignored.
  e = p.eta();
  e[kTauLM] *= 2.0;
  e[kPhiLM] += 1.0;
  CHECK((init_from_los(e, known).m - s.m).norm() < 1e-9);

  e[kTauBM] = 0.0;
  CHECK_THROWS_AS(init_from_los(e, known), InvalidInputError);
}

TEST_CASE("noiseless problem is a fixed point") {
  const Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  const EstimationProblem problem{p.eta(), crlb_sigma(s), KnownGeometry::from(s)};
  const EstimationResult r = solve_wls(problem);
  CHECK(r.converged);
  CHECK((r.state.m - s.m).norm() < 1e-8);
  CHECK(std::abs(r.state.alpha - s.alpha) < 1e-8);
  CHECK(r.cost < 1e-16);
}

TEST_CASE("cost is monotone and the solver recovers a perturbed seed") {
  const Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  EtaVector e = p.eta();
  e[kRhoBM] *= 1.01;
  e[kRhoLM] *= 0.99;
  e[kThetaBM] += 2e-3;
  const EstimationProblem problem{e, EtaMatrix::Identity(), KnownGeometry::from(s)};
  const EstimationResult r = solve_wls(problem);
  CHECK(r.converged);
  for (std::size_t k = 1; k < r.cost_trace.size(); ++k) CHECK(r.cost_trace[k] <= r.cost_trace[k - 1]);
  CHECK(r.cost == doctest::Approx(wls_residual(problem, r.state).squaredNorm()));
  CHECK(r.cost >= 0.0);
}

TEST_CASE("residual wraps angles") {
  const Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  EtaVector e = p.eta();
  e[kPhiBM] += 2.0 * test::kPi;
  const EstimationProblem problem{e, EtaMatrix::Identity(), KnownGeometry::from(s)};
  CHECK(wls_residual(problem, {s.m, s.alpha}).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("estimator is translation equivariant") {
  Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  const EtaMatrix sigma = crlb_sigma(s);
  const EtaMatrix factor = covariance_factor(sigma);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> g;
  EtaVector z;
  for (int i = 0; i < kEtaSize; ++i) z[i] = g(gen);
  const EtaVector eta_hat = p.eta() + factor * z;
  const EstimationResult a = solve_wls({eta_hat, sigma, KnownGeometry::from(s)});

  const Vec2 shift(-7.0, 3.5);
  KnownGeometry moved = KnownGeometry::from(s);
  moved.b += shift;
  moved.l += shift;
  const EstimationResult b = solve_wls({eta_hat, sigma, moved});
  CHECK((b.state.m - a.state.m - shift).norm() < 1e-7);
  CHECK(std::abs(b.state.alpha - a.state.alpha) < 1e-9);
}

TEST_CASE("covariance factor") {
  const EtaMatrix sigma = crlb_sigma(Scenario::paper_default());
  const EtaMatrix l = covariance_factor(sigma);
  const EtaMatrix back = l * l.transpose();
  for (int i = 0; i < kEtaSize; ++i)
    for (int j = 0; j < kEtaSize; ++j)
      CHECK(std::abs(back(i, j) - sigma(i, j)) <= 1e-9 * std::sqrt(sigma(i, i) * sigma(j, j)));
  CHECK(covariance_factor(EtaMatrix::Zero()).isZero(0.0));
}

TEST_CASE("monte carlo with zero covariance") {
  const Scenario s = Scenario::paper_default();
  const ChannelParams p = channel_params_from_geometry(s);
  MonteCarloOptions options;
  options.trials = 20;
  options.sigma = EtaMatrix::Zero();
  const MonteCarloResult r = monte_carlo_rmse(s, incremental_phase(s, p), test::seeded_precoder(s.n_b), options);
  CHECK(r.rmse_pos < 1e-8);
  CHECK(r.rmse_alpha < 1e-8);
  CHECK(r.trials == 20);
  options.trials = 0;
  CHECK_THROWS_AS(monte_carlo_rmse(s, incremental_phase(s, p), test::seeded_precoder(s.n_b), options),
                  InvalidInputError);
}

TEST_CASE("monte carlo respects the bound and is reproducible") {
  const Scenario s = Scenario::paper_default().with_snr_db(5.0);
  const ChannelParams p = channel_params_from_geometry(s);
  const PhaseProfile omega = incremental_phase(s, p);
  const Precoder f = test::seeded_precoder(s.n_b);
  MonteCarloOptions options;
  options.trials = 400;
  options.bounds.source = FimSource::closed_form;
  const MonteCarloResult a = monte_carlo_rmse(s, omega, f, options);
  const MonteCarloResult b = monte_carlo_rmse(s, omega, f, options);
  CHECK(a.rmse_pos == b.rmse_pos);
  CHECK(a.nonconverged == 0);
  // rmse^2 is a mean of 400 squared errors: allow 3 standard errors.
  CHECK(a.rmse_pos >= a.peb * (1.0 - 3.0 / std::sqrt(400.0)));
  CHECK(a.rmse_alpha >= a.oeb * (1.0 - 3.0 / std::sqrt(400.0)));
}

TEST_CASE("standard error of rmse follows the square-root law") {
  const Scenario s = Scenario::paper_default().with_snr_db(5.0);
  const ChannelParams p = channel_params_from_geometry(s);
  const PhaseProfile omega = incremental_phase(s, p);
  const Precoder f = test::seeded_precoder(s.n_b);
  auto spread = [&](int trials) {
    std::vector<double> v;
    for (std::uint64_t rep = 0; rep < 60; ++rep) {
      MonteCarloOptions options;
      options.trials = trials;
      options.seed = 1000 + rep + static_cast<std::uint64_t>(trials) * 1000;
      options.bounds.source = FimSource::closed_form;
      v.push_back(monte_carlo_rmse(s, omega, f, options).rmse_pos);
    }
    double mean = 0.0;
    for (double x : v) mean += x / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean) / (v.size() - 1);
    return std::sqrt(var);
  };
  const double ratio = spread(50) / spread(200);
  // Expected 2; with 60 repetitions the ratio is 2*sqrt(F(59,59)), inside [1.41, 2.83] at 99%.
  CHECK(ratio > 1.2);
  CHECK(ratio < 3.3);
}
