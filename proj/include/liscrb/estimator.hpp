#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "liscrb/bounds.hpp"

namespace liscrb {

/// Second-stage input: eta_hat = eta + w with w ~ N(0, sigma).
struct EstimationProblem {
  EtaVector eta_hat;
  EtaMatrix sigma;
  KnownGeometry known;
};

struct EstimationResult {
  PositionState state;
  double cost = 0.0;  // (eta_hat - eta(zeta))^T sigma^-1 (eta_hat - eta(zeta))
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // cost after each accepted step, starting at the seed
};

struct WlsOptions {
  int max_iterations = 100;
  double step_tol = 1e-10;
  double grad_tol = 1e-12;
  // Also converged once the predicted cost decrease is below the cost rounding error.
  JacobianConvention convention = JacobianConvention::geometric;
};

/// m0 = b + c tau [cos theta, sin theta], alpha0 = pi + theta - phi from the
/// LoS triplet of eta_hat.
PositionState init_from_los(const EtaVector& eta_hat, const KnownGeometry& known);

/// Wrapped residual eta_hat - eta(zeta) (angles in (-pi, pi]).
EtaVector wls_residual(const EstimationProblem& problem, const PositionState& z);

/// Levenberg-Marquardt / Gauss-Newton on zeta = (m_x, m_y, alpha), seeded by
/// init_from_los.
EstimationResult solve_wls(const EstimationProblem& problem, const WlsOptions& options = {});

struct MonteCarloOptions {
  int trials = 1000;
  std::uint64_t seed = 42;
  BoundsOptions bounds{};
  /// Noise covariance; defaults to the inverse channel FIM.
  std::optional<EtaMatrix> sigma;
  WlsOptions wls{};
};

struct MonteCarloResult {
  double rmse_pos = 0.0;
  double rmse_alpha = 0.0;
  int trials = 0;
  int nonconverged = 0;
  double peb = 0.0;
  double oeb = 0.0;
};

/// Draws real Gaussian eta_hat around the true eta, solves every trial and
/// returns sqrt of the empirical position and orientation variances.
/// Trial t uses stream split(t) of (seed, 1).
MonteCarloResult monte_carlo_rmse(const Scenario& s, const PhaseProfile& omega, const Precoder& f,
                                  const MonteCarloOptions& options = {});

/// Factor L with L L^T = sigma, computed on the correlation matrix so that
/// widely different parameter scales survive. Tolerates PSD sigma.
EtaMatrix covariance_factor(const EtaMatrix& sigma);

}  // namespace liscrb
