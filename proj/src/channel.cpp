#include "liscrb/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "liscrb/errors.hpp"

namespace liscrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_subcarrier(const Scenario& s, int n) {
  if (!s.valid_subcarrier(n))
    throw InvalidInputError("subcarrier index " + std::to_string(n) + " outside +-(N-1)/2 for N = " +
                            std::to_string(s.n_sub));
}

void require_sizes(const Scenario& s, const PhaseProfile& omega, const CVec& f) {
  if (omega.size() != s.n_l)
    throw InvalidInputError("phase profile has " + std::to_string(omega.size()) +
                            " entries, scenario has n_l = " + std::to_string(s.n_l));
  if (f.size() != s.n_b)
    throw InvalidInputError("precoder has " + std::to_string(f.size()) +
                            " entries, scenario has n_b = " + std::to_string(s.n_b));
}

}  // namespace

CVec PhaseProfile::diagonal() const {
  CVec out(omegas.size());
  for (Eigen::Index i = 0; i < omegas.size(); ++i) out[i] = std::polar(1.0, omegas[i]);
  return out;
}

Precoder Precoder::shared(CVec f) {
  Precoder p;
  p.vectors_.push_back(std::move(f));
  return p;
}

Precoder Precoder::per_subcarrier(std::vector<CVec> vectors) {
  if (vectors.empty() || vectors.size() % 2 == 0)
    throw InvalidInputError("per-subcarrier precoder needs an odd, nonzero number of vectors");
  for (const auto& v : vectors)
    if (v.size() != vectors.front().size())
      throw InvalidInputError("per-subcarrier precoder vectors differ in length");
  Precoder p;
  p.vectors_ = std::move(vectors);
  return p;
}

Precoder Precoder::random_phase(int n_b, CounterRng& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  CVec f(n_b);
  for (int i = 0; i < n_b; ++i) f[i] = std::polar(1.0, kTwoPi - u(rng));
  return shared(std::move(f));
}

Precoder Precoder::from_phases(const std::vector<double>& phases) {
  CVec f(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t i = 0; i < phases.size(); ++i) f[static_cast<Eigen::Index>(i)] = std::polar(1.0, phases[i]);
  return shared(std::move(f));
}

const CVec& Precoder::at(int n) const {
  if (vectors_.empty()) throw InvalidInputError("empty precoder");
  if (vectors_.size() == 1) return vectors_.front();
  const int half = static_cast<int>(vectors_.size() - 1) / 2;
  if (n < -half || n > half)
    throw InvalidInputError("precoder has no vector for subcarrier " + std::to_string(n));
  return vectors_[static_cast<std::size_t>(n + half)];
}

int Precoder::size() const {
  return vectors_.empty() ? 0 : static_cast<int>(vectors_.front().size());
}

CVec steering_vector(double angle, int count, double d, double lambda) {
  const double step = kTwoPi * (d / lambda) * std::sin(angle);
  CVec a(count);
  for (int i = 0; i < count; ++i) a[i] = std::polar(1.0, step * i);
  return a;
}

CVec steering_derivative(double angle, int count, double d, double lambda) {
  const cdouble scale(0.0, kTwoPi * (d / lambda) * std::cos(angle));
  CVec a = steering_vector(angle, count, d, lambda);
  for (int i = 0; i < count; ++i) a[i] *= scale * static_cast<double>(i);
  return a;
}

cdouble delay_phasor(double tau, int n, const Scenario& s) {
  return std::polar(1.0, -kTwoPi * tau * n * s.bandwidth_hz / s.n_sub);
}

CMat channel_matrix(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega, int n) {
  require_subcarrier(s, n);
  if (omega.size() != s.n_l) throw InvalidInputError("phase profile size differs from n_l");
  const double d = s.d_spacing_m, lambda = s.wavelength();

  const CMat h_bm = p.rho_bm * delay_phasor(p.tau_bm, n, s) *
                    steering_vector(p.phi_bm, s.n_m, d, lambda) *
                    steering_vector(p.theta_bm, s.n_b, d, lambda).adjoint();
  const CMat h_bl = p.rho_bl * delay_phasor(p.tau_bl, n, s) *
                    steering_vector(p.phi_bl, s.n_l, d, lambda) *
                    steering_vector(p.theta_bl, s.n_b, d, lambda).adjoint();
  const CMat h_lm = p.rho_lm * delay_phasor(p.tau_lm, n, s) *
                    steering_vector(p.phi_lm, s.n_m, d, lambda) *
                    steering_vector(p.theta_lm, s.n_l, d, lambda).adjoint();
  return h_bm + h_lm * omega.diagonal().asDiagonal() * h_bl;
}

CVec received_mean(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                   const Precoder& precoder, int n) {
  require_subcarrier(s, n);
  const CVec& f = precoder.at(n);
  require_sizes(s, omega, f);
  const double d = s.d_spacing_m, lambda = s.wavelength();

  // Each hop is rank one, so H x = rho e^{-j..} a_r (a_t^H x).
  const cdouble g_bm = steering_vector(p.theta_bm, s.n_b, d, lambda).dot(f);
  CVec y = p.rho_bm * delay_phasor(p.tau_bm, n, s) * g_bm * steering_vector(p.phi_bm, s.n_m, d, lambda);

  const cdouble g_bl = steering_vector(p.theta_bl, s.n_b, d, lambda).dot(f);
  CVec at_lis = p.rho_bl * delay_phasor(p.tau_bl, n, s) * g_bl * steering_vector(p.phi_bl, s.n_l, d, lambda);
  at_lis = at_lis.cwiseProduct(omega.diagonal());
  const cdouble g_lm = steering_vector(p.theta_lm, s.n_l, d, lambda).dot(at_lis);
  y += p.rho_lm * delay_phasor(p.tau_lm, n, s) * g_lm * steering_vector(p.phi_lm, s.n_m, d, lambda);

  return std::sqrt(s.power) * y;
}

CVec sample_received(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                     const Precoder& f, int n, CounterRng& rng) {
  CVec y = received_mean(s, p, omega, f, n);
  if (s.noise_var == 0.0) return y;
  // sigma^2 per real dimension, 2 sigma^2 per complex entry.
  std::normal_distribution<double> gauss(0.0, std::sqrt(s.noise_var));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    y[i] += cdouble(re, im);
  }
  return y;
}

}  // namespace liscrb
