#include "liscrb/fim.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "liscrb/errors.hpp"

namespace liscrb {

namespace {

constexpr cdouble kJ{0.0, 1.0};

Eigen::MatrixXd pairwise_range(const std::vector<Eigen::MatrixXd>& terms, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_range(terms, lo, mid) + pairwise_range(terms, mid, hi);
}

}  // namespace

double FimMatrix::relative_asymmetry() const {
  const double scale = entries.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (entries - entries.transpose()).cwiseAbs().maxCoeff() / scale;
}

double FimMatrix::min_eigen_ratio() const {
  const Eigen::MatrixXd sym = 0.5 * (entries + entries.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  if (hi <= 0.0) return eig.eigenvalues().minCoeff() < 0.0 ? -1.0 : 0.0;
  return eig.eigenvalues().minCoeff() / hi;
}

Eigen::MatrixXd pairwise_sum(const std::vector<Eigen::MatrixXd>& terms) {
  if (terms.empty()) throw InvalidInputError("pairwise_sum of an empty range");
  return pairwise_range(terms, 0, terms.size());
}

std::string fim_entry_name(int i, int j) {
  return "psi(" + std::string(kEtaNames.at(static_cast<std::size_t>(i))) + "," +
         std::string(kEtaNames.at(static_cast<std::size_t>(j))) + ")";
}

NlosScalars nlos_scalars(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                         const Precoder& f, int n) {
  if (!s.valid_subcarrier(n)) throw InvalidInputError("subcarrier index out of range");
  if (omega.size() != s.n_l) throw InvalidInputError("phase profile size differs from n_l");
  const double d = s.d_spacing_m, lambda = s.wavelength();
  const CVec a_lis_out = steering_vector(p.theta_lm, s.n_l, d, lambda);
  const CVec a_lis_in = steering_vector(p.phi_bl, s.n_l, d, lambda);
  const cdouble surface = a_lis_out.dot(omega.diagonal().cwiseProduct(a_lis_in));
  const cdouble bs_to_lis = steering_vector(p.theta_bl, s.n_b, d, lambda).dot(f.at(n));

  NlosScalars out;
  out.beta = surface * bs_to_lis;
  out.xi = std::polar(1.0, -2.0 * std::numbers::pi * (p.tau_bl + p.tau_lm - p.tau_bm) * n *
                               s.bandwidth_hz / s.n_sub);
  return out;
}

cdouble beta_hadamard_form(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                           const Precoder& f, int n) {
  const double d = s.d_spacing_m, lambda = s.wavelength();
  const CVec combined = steering_vector(p.theta_lm, s.n_l, d, lambda)
                            .cwiseProduct(steering_vector(p.phi_bl, s.n_l, d, lambda).conjugate());
  return combined.dot(omega.diagonal()) *
         steering_vector(p.theta_bl, s.n_b, d, lambda).dot(f.at(n));
}

FimMatrix fim_channel_subcarrier(const Scenario& s, const ChannelParams& p,
                                 const PhaseProfile& omega, const Precoder& precoder, int n,
                                 AppendixReading reading) {
  const CVec& f = precoder.at(n);
  if (f.size() != s.n_b) throw InvalidInputError("precoder length differs from n_b");
  const double d = s.d_spacing_m, lambda = s.wavelength();
  const double nm = s.n_m;
  const double k = 2.0 * std::numbers::pi * n * s.bandwidth_hz / s.n_sub;

  const cdouble g = steering_vector(p.theta_bm, s.n_b, d, lambda).dot(f);        // a_t^H f
  const cdouble gd = steering_derivative(p.theta_bm, s.n_b, d, lambda).dot(f);   // a_t_dot^H f
  const CVec a = steering_vector(p.phi_bm, s.n_m, d, lambda);
  const CVec ad = steering_derivative(p.phi_bm, s.n_m, d, lambda);
  const CVec a_l = steering_vector(p.phi_lm, s.n_m, d, lambda);
  const CVec ad_l = steering_derivative(p.phi_lm, s.n_m, d, lambda);
  const NlosScalars nl = nlos_scalars(s, p, omega, precoder, n);
  const cdouble bx = nl.beta * nl.xi;
  const double beta2 = std::norm(nl.beta);

  const double rbm = p.rho_bm, rbl = p.rho_bl, rlm = p.rho_lm;
  const double rrr = rbm * rbl * rlm;
  const cdouble gc = std::conj(g), gdc = std::conj(gd);

  const cdouble a_al = a.dot(a_l);       // a^H a_L
  const cdouble a_adl = a.dot(ad_l);     // a^H a_L_dot
  const cdouble ad_a = ad.dot(a);        // a_dot^H a
  const cdouble a_ad = a.dot(ad);        // a^H a_dot
  const cdouble ad_al = ad.dot(a_l);     // a_dot^H a_L
  const cdouble ad_adl = ad.dot(ad_l);   // a_dot^H a_L_dot
  const cdouble al_adl = a_l.dot(ad_l);  // a_L^H a_L_dot

  const double tau_theta_gain = reading == AppendixReading::corrected ? nm : 1.0;

  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(kEtaSize, kEtaSize);
  // Direct link.
  j(kTauBM, kTauBM) = nm * rbm * rbm * k * k * std::norm(g);
  j(kTauBM, kThetaBM) = tau_theta_gain * rbm * rbm * std::real(kJ * k * gc * gd);
  j(kTauBM, kPhiBM) = rbm * rbm * std::real(kJ * k * gc * a_ad * g);
  j(kTauBM, kRhoBM) = 0.0;
  j(kThetaBM, kThetaBM) = nm * rbm * rbm * std::norm(gd);
  j(kThetaBM, kPhiBM) = rbm * rbm * std::real(gdc * a_ad * g);
  j(kThetaBM, kRhoBM) = nm * rbm * std::real(gdc * g);
  j(kPhiBM, kPhiBM) = rbm * rbm * std::norm(g) * ad.squaredNorm();
  j(kPhiBM, kRhoBM) = rbm * std::real(gc * ad_a * g);
  j(kRhoBM, kRhoBM) = nm * std::norm(g);

  // Direct / reflected coupling.
  j(kTauBM, kTauLM) = rrr * k * k * std::real(bx * gc * a_al);
  j(kTauBM, kPhiLM) = rrr * std::real(kJ * k * bx * gc * a_adl);
  j(kTauBM, kRhoLM) = rbm * rbl * std::real(kJ * k * bx * gc * a_al);
  j(kThetaBM, kTauLM) = rrr * std::real(-kJ * k * bx * gdc * a_al);
  j(kThetaBM, kPhiLM) = rrr * std::real(bx * gdc * a_adl);
  j(kThetaBM, kRhoLM) = rbm * rbl * std::real(bx * gdc * a_al);
  j(kPhiBM, kTauLM) = rrr * std::real(-kJ * k * bx * gc * ad_al);
  j(kPhiBM, kPhiLM) = rrr * std::real(bx * gc * ad_adl);
  j(kPhiBM, kRhoLM) = rbm * rbl * std::real(bx * gc * ad_al);
  j(kRhoBM, kTauLM) = rbl * rlm * std::real(-kJ * k * bx * gc * a_al);
  j(kRhoBM, kPhiLM) = rbl * rlm * std::real(bx * gc * a_adl);
  j(kRhoBM, kRhoLM) = rbl * std::real(bx * gc * a_al);

  // Reflected link.
  j(kTauLM, kTauLM) = nm * rbl * rbl * rlm * rlm * k * k * beta2;
  j(kTauLM, kPhiLM) = rbl * rbl * rlm * rlm * std::real(kJ * k * std::conj(nl.beta) * al_adl * nl.beta);
  j(kTauLM, kRhoLM) = 0.0;
  j(kPhiLM, kPhiLM) = rbl * rbl * rlm * rlm * beta2 * ad_l.squaredNorm();
  j(kPhiLM, kRhoLM) = rbl * rbl * rlm * std::real(std::conj(nl.beta) * al_adl * nl.beta);
  j(kRhoLM, kRhoLM) = nm * rbl * rbl * beta2;

  j.triangularView<Eigen::StrictlyLower>() = j.transpose().triangularView<Eigen::StrictlyLower>();
  j *= s.snr();
  return FimMatrix{std::move(j), n};
}

FimMatrix fim_channel_total(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                            const Precoder& f, AppendixReading reading) {
  std::vector<Eigen::MatrixXd> terms;
  for (int n : s.subcarriers())
    terms.push_back(fim_channel_subcarrier(s, p, omega, f, n, reading).entries);
  return FimMatrix{pairwise_sum(terms), std::nullopt};
}

}  // namespace liscrb
