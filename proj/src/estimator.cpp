#include "liscrb/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "liscrb/errors.hpp"
#include "liscrb/parallel.hpp"

namespace liscrb {

namespace {

constexpr double kLambdaStart = 1e-6;
constexpr double kLambdaFloor = 1e-12;
constexpr double kLambdaCeiling = 1e12;
constexpr double kCostRounding = 64 * std::numeric_limits<double>::epsilon();

bool is_angle(int i) { return i == kThetaBM || i == kPhiBM || i == kPhiLM; }

Eigen::Vector3d to_vec(const PositionState& z) { return {z.m.x(), z.m.y(), z.alpha}; }
PositionState from_vec(const Eigen::Vector3d& v) { return {Vec2(v[0], v[1]), v[2]}; }

double weighted(const EtaVector& r, const EtaMatrix& w) { return r.dot(w * r); }

// Rounding scale of the cost: |r|^T |W| |r| covers cancellation among large
// off-diagonal weights, |eta| |W r| the rounding of the residual itself.
double cost_rounding_scale(const EtaVector& r, const EtaVector& eta, const EtaMatrix& w) {
  return r.cwiseAbs().dot(w.cwiseAbs() * r.cwiseAbs()) + 2.0 * eta.cwiseAbs().dot((w * r).cwiseAbs());
}

}  // namespace

PositionState init_from_los(const EtaVector& eta_hat, const KnownGeometry& known) {
  if (!(eta_hat[kTauBM] > 0.0)) throw InvalidInputError("init_from_los needs tau_bm > 0");
  return reconstruct_from_los(known.b, known.c, eta_hat[kTauBM], eta_hat[kThetaBM],
                              eta_hat[kPhiBM]);
}

EtaVector wls_residual(const EstimationProblem& problem, const PositionState& z) {
  EtaVector r = problem.eta_hat - channel_params_from_geometry(problem.known, z).eta();
  for (int i = 0; i < kEtaSize; ++i)
    if (is_angle(i)) r[i] = wrap_angle(r[i]);
  return r;
}

EstimationResult solve_wls(const EstimationProblem& problem, const WlsOptions& options) {
  if (!problem.eta_hat.allFinite()) throw InvalidInputError("eta_hat is not finite");
  const EtaMatrix weight = invert_information(problem.sigma).covariance;

  EstimationResult out;
  out.state = init_from_los(problem.eta_hat, problem.known);
  EtaVector r = wls_residual(problem, out.state);
  out.cost = weighted(r, weight);
  out.cost_trace.push_back(out.cost);

  double lambda = kLambdaStart;
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const Jacobian73 t = jacobian_t1(problem.known, out.state, options.convention);
    const Eigen::Matrix3d a = t.transpose() * weight * t;
    const Eigen::Vector3d grad = t.transpose() * weight * r;
    if (grad.norm() < options.grad_tol) {
      out.converged = true;
      break;
    }
    // Tests on the undamped step. Near the optimum the predicted decrease
    // g^T step drops below the rounding error of the cost, after which cost
    // comparisons can no longer accept steps.
    const Eigen::LDLT<Eigen::Matrix3d> gn(a);
    if (gn.info() == Eigen::Success && gn.isPositive()) {
      const Eigen::Vector3d gn_step = gn.solve(grad);
      const double predicted = grad.dot(gn_step);
      if (gn_step.allFinite() &&
          (gn_step.norm() < options.step_tol || predicted <= kCostRounding * cost_rounding_scale(r, problem.eta_hat, weight))) {
        out.converged = true;
        break;
      }
    }

    bool accepted = false;
    while (!accepted && lambda <= kLambdaCeiling) {
      Eigen::Matrix3d damped = a;
      damped.diagonal() += lambda * a.diagonal();
      const Eigen::LDLT<Eigen::Matrix3d> ldlt(damped);
      const Eigen::Vector3d step = ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !step.allFinite()) {
        lambda = lambda == 0.0 ? kLambdaStart : lambda * 10.0;
        continue;
      }
      const PositionState trial = from_vec(to_vec(out.state) + step);
      const EtaVector r_trial = wls_residual(problem, trial);
      const double cost = weighted(r_trial, weight);
      if (cost <= out.cost) {
        out.state = trial;
        r = r_trial;
        out.cost = cost;
        out.cost_trace.push_back(cost);
        lambda /= 10.0;
        if (lambda < kLambdaFloor) lambda = 0.0;
        accepted = true;
      } else {
        lambda = lambda == 0.0 ? kLambdaStart : lambda * 10.0;
      }
    }
    if (!accepted) break;  // damping exhausted; best iterate kept
  }
  return out;
}

EtaMatrix covariance_factor(const EtaMatrix& sigma) {
  EtaVector scale;
  for (int i = 0; i < kEtaSize; ++i) {
    if (sigma(i, i) < 0.0) throw InvalidInputError("covariance has a negative diagonal entry");
    scale[i] = std::sqrt(sigma(i, i));
  }
  EtaMatrix corr = EtaMatrix::Identity();
  for (int i = 0; i < kEtaSize; ++i)
    for (int j = 0; j < kEtaSize; ++j)
      if (scale[i] > 0.0 && scale[j] > 0.0)
        corr(i, j) = 0.5 * (sigma(i, j) + sigma(j, i)) / (scale[i] * scale[j]);
  Eigen::SelfAdjointEigenSolver<EtaMatrix> eig(corr);
  const EtaVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return scale.asDiagonal() * eig.eigenvectors() * root.asDiagonal();
}

MonteCarloResult monte_carlo_rmse(const Scenario& s, const PhaseProfile& omega, const Precoder& f,
                                  const MonteCarloOptions& options) {
  if (options.trials < 1) throw InvalidInputError("monte_carlo_rmse needs trials >= 1");
  s.validate();
  const ChannelParams p = channel_params_from_geometry(s);
  const FimMatrix channel = fim_channel(s, p, omega, f, options.bounds);
  const BoundsReport bounds =
      bounds_from_fim(channel, jacobian_t1(s, options.bounds.convention), p, options.bounds.source);
  const EtaMatrix sigma =
      options.sigma ? *options.sigma : EtaMatrix(invert_information(channel.entries).covariance);
  const EtaMatrix factor = covariance_factor(sigma);
  const EtaVector eta = p.eta();
  const KnownGeometry known = KnownGeometry::from(s);
  const CounterRng root(options.seed, 1);

  struct Trial {
    double pos_sq = 0.0, alpha_sq = 0.0;
    bool converged = false;
  };
  const auto trials = parallel_map<Trial>(static_cast<std::size_t>(options.trials), [&](std::size_t t) {
    CounterRng rng = root.split(t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    EtaVector z;
    for (int i = 0; i < kEtaSize; ++i) z[i] = gauss(rng);
    const EstimationProblem problem{eta + factor * z, sigma, known};
    const EstimationResult est = solve_wls(problem, options.wls);
    Trial out;
    out.pos_sq = (est.state.m - s.m).squaredNorm();
    const double da = wrap_angle(est.state.alpha - s.alpha);
    out.alpha_sq = da * da;
    out.converged = est.converged;
    return out;
  });

  MonteCarloResult out;
  out.trials = options.trials;
  out.peb = bounds.peb_m;
  out.oeb = bounds.oeb_rad;
  double pos = 0.0, alpha = 0.0;
  for (const Trial& t : trials) {
    pos += t.pos_sq;
    alpha += t.alpha_sq;
    if (!t.converged) ++out.nonconverged;
  }
  out.rmse_pos = std::sqrt(pos / options.trials);
  out.rmse_alpha = std::sqrt(alpha / options.trials);
  return out;
}

}  // namespace liscrb
