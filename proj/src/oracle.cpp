#include "liscrb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "liscrb/errors.hpp"

namespace liscrb {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const CVec& v) {
  return std::all_of(v.data(), v.data() + v.size(),
                     [](const cdouble& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CVec evaluate(const ParamVector& pv, const Eigen::VectorXd& x, int n, int param) {
  CVec mu = pv.mu_builder(x, n);
  if (!all_finite(mu))
    throw OracleError(pv.names[static_cast<std::size_t>(param)],
                      "non-finite mean while perturbing '" + pv.names[static_cast<std::size_t>(param)] +
                          "' on subcarrier " + std::to_string(n));
  return mu;
}

CVec central_difference(const ParamVector& pv, int n, int i, double h) {
  Eigen::VectorXd plus = pv.values, minus = pv.values;
  plus[i] += h;
  minus[i] -= h;
  return (evaluate(pv, plus, n, i) - evaluate(pv, minus, n, i)) / (2.0 * h);
}

double checked_distance(const Vec2& a, const Vec2& b, const char* what) {
  const double r = (a - b).norm();
  if (!(r > 0.0)) throw DegenerateGeometryError(std::string("coincident nodes: ") + what);
  return r;
}

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

}  // namespace

void ParamVector::validate() const {
  const auto count = static_cast<std::size_t>(values.size());
  if (names.size() != count || static_cast<std::size_t>(steps.size()) != count)
    throw InvalidInputError("ParamVector names, values and steps differ in length");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    throw InvalidInputError("ParamVector names must be unique");
  if (!mu_builder) throw InvalidInputError("ParamVector has no mean builder");
  for (Eigen::Index i = 0; i < steps.size(); ++i)
    if (!(steps[i] > 0.0) || !std::isfinite(steps[i]))
      throw InvalidInputError("non-positive finite-difference step for " + names[static_cast<std::size_t>(i)]);
}

double default_step(double value) { return 1e-6 * (1.0 + std::abs(value)); }

double delay_step(double bandwidth_hz) { return 1e-3 / bandwidth_hz; }

FimMatrix fim_numeric(const ParamVector& pv, double snr_prefactor, int n,
                      const OracleOptions& options) {
  pv.validate();
  const int dim = pv.size();
  const CVec probe = evaluate(pv, pv.values, n, 0);
  CMat jac(probe.size(), dim);
  for (int i = 0; i < dim; ++i) {
    const double h = pv.steps[i] * options.step_scale;
    if (options.scheme == Difference::central) {
      jac.col(i) = central_difference(pv, n, i, h);
    } else {
      jac.col(i) = (4.0 * central_difference(pv, n, i, h / 2.0) - central_difference(pv, n, i, h)) / 3.0;
    }
  }
  Eigen::MatrixXd fim(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) fim(i, j) = fim(j, i) = snr_prefactor * jac.col(i).dot(jac.col(j)).real();
  return FimMatrix{std::move(fim), n};
}

FimMatrix fim_numeric_total(const ParamVector& pv, double snr_prefactor,
                            const std::vector<int>& subcarriers, const OracleOptions& options) {
  std::vector<Eigen::MatrixXd> terms;
  terms.reserve(subcarriers.size());
  for (int n : subcarriers) terms.push_back(fim_numeric(pv, snr_prefactor, n, options).entries);
  return FimMatrix{pairwise_sum(terms), std::nullopt};
}

ParamVector lis_param_vector(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                             const Precoder& f) {
  ParamVector pv;
  pv.names.assign(kEtaNames.begin(), kEtaNames.end());
  pv.values = p.eta();
  pv.steps.resize(kEtaSize);
  for (int i = 0; i < kEtaSize; ++i)
    pv.steps[i] = (i == kTauBM || i == kTauLM) ? delay_step(s.bandwidth_hz) : default_step(pv.values[i]);

  Scenario unit = s;
  unit.power = 1.0;
  pv.mu_builder = [unit, p, omega, f](const Eigen::VectorXd& eta, int n) {
    return received_mean(unit, p.with_eta(eta), omega, f, n);
  };
  return pv;
}

FimMatrix fim_channel_numeric(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                              const Precoder& f, const OracleOptions& options) {
  return fim_numeric_total(lis_param_vector(s, p, omega, f), s.snr(), s.subcarriers(), options);
}

BenchVector benchmark_params(const Scenario& s, const Vec2& m, double alpha, const Vec2& scatter) {
  const double r_bm = checked_distance(s.b, m, "BS and MS");
  const double r_bs = checked_distance(s.b, scatter, "BS and scatterer");
  const double r_sm = checked_distance(scatter, m, "scatterer and MS");
  const double theta_bm = clamped_acos((m.x() - s.b.x()) / r_bm);
  const double theta_bs = clamped_acos((scatter.x() - s.b.x()) / r_bs);
  const double theta_sm = -clamped_acos((m.x() - scatter.x()) / r_sm);

  BenchVector v;
  v << r_bm / s.c, theta_bm, kPi + theta_bm - alpha, std::pow(r_bm, -s.mu / 2.0),
      (r_bs + r_sm) / s.c, theta_bs, kPi + theta_sm - alpha, std::pow(r_bs * r_sm, -s.mu / 2.0);
  return v;
}

CVec benchmark_mean(const Scenario& s, const BenchVector& v, const Precoder& precoder, int n) {
  const CVec& f = precoder.at(n);
  if (f.size() != s.n_b) throw InvalidInputError("precoder length differs from n_b");
  const double d = s.d_spacing_m, lambda = s.wavelength();
  CVec y = v[kRhoBM] * delay_phasor(v[kTauBM], n, s) *
           steering_vector(v[kThetaBM], s.n_b, d, lambda).dot(f) *
           steering_vector(v[kPhiBM], s.n_m, d, lambda);
  y += v[kBRhoBSM] * delay_phasor(v[kBTauBSM], n, s) *
       steering_vector(v[kBThetaBSM], s.n_b, d, lambda).dot(f) *
       steering_vector(v[kBPhiBSM], s.n_m, d, lambda);
  return y;
}

FimMatrix benchmark_fim(const Scenario& s, const Vec2& scatter, const Precoder& f,
                        std::optional<double> scatter_gain, const OracleOptions& options) {
  BenchVector v = benchmark_params(s, s.m, s.alpha, scatter);
  if (scatter_gain) v[kBRhoBSM] = *scatter_gain;

  ParamVector pv;
  pv.names.assign(kBenchNames.begin(), kBenchNames.end());
  pv.values = v;
  pv.steps.resize(kBenchSize);
  for (int i = 0; i < kBenchSize; ++i)
    pv.steps[i] = (i == kTauBM || i == kBTauBSM) ? delay_step(s.bandwidth_hz) : default_step(v[i]);
  pv.mu_builder = [s, f](const Eigen::VectorXd& x, int n) {
    return benchmark_mean(s, BenchVector(x), f, n);
  };
  return fim_numeric_total(pv, s.snr(), s.subcarriers(), options);
}

Eigen::Matrix<double, kBenchSize, 5> benchmark_jacobian(const Scenario& s, const Vec2& scatter) {
  Eigen::Matrix<double, 5, 1> z;
  z << s.m.x(), s.m.y(), s.alpha, scatter.x(), scatter.y();
  auto eval = [&s](const Eigen::Matrix<double, 5, 1>& x) {
    return benchmark_params(s, Vec2(x[0], x[1]), x[2], Vec2(x[3], x[4]));
  };
  Eigen::Matrix<double, kBenchSize, 5> t;
  for (int j = 0; j < 5; ++j) {
    const double h = default_step(z[j]);
    Eigen::Matrix<double, 5, 1> plus = z, minus = z;
    plus[j] += h;
    minus[j] -= h;
    t.col(j) = (eval(plus) - eval(minus)) / (2.0 * h);
  }
  return t;
}

}  // namespace liscrb
