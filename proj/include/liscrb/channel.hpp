#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "liscrb/geometry.hpp"
#include "liscrb/rng.hpp"
#include "liscrb/scenario.hpp"

namespace liscrb {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// LIS phase shifts omega_1..omega_NL in radians, stored unwrapped.
struct PhaseProfile {
  Eigen::VectorXd omegas;

  int size() const { return static_cast<int>(omegas.size()); }
  /// Diagonal of Omega = diag(exp(j omega_i)).
  CVec diagonal() const;
};

/// Effective transmitted vector f = F x[n]. Shared across subcarriers unless
/// built with per_subcarrier().
class Precoder {
 public:
  Precoder() = default;
  static Precoder shared(CVec f);
  /// vectors[k] is used for subcarrier n = k - (vectors.size() - 1) / 2.
  static Precoder per_subcarrier(std::vector<CVec> vectors);
  /// Unit-modulus entries exp(j nu), nu ~ U(0, 2pi], shared across subcarriers.
  static Precoder random_phase(int n_b, CounterRng& rng);
  static Precoder from_phases(const std::vector<double>& phases);

  const CVec& at(int n) const;
  int size() const;
  bool is_shared() const { return vectors_.size() == 1; }

 private:
  std::vector<CVec> vectors_;
};

/// [a]_i = exp(j 2 pi (i-1) (d / lambda) sin(angle)).
CVec steering_vector(double angle, int count, double d, double lambda);

/// d a / d angle = D(angle) a(angle), D = j 2 pi (d / lambda) cos(angle) diag(0..count-1).
CVec steering_derivative(double angle, int count, double d, double lambda);

/// exp(-j 2 pi tau n B / N).
cdouble delay_phasor(double tau, int n, const Scenario& s);

/// Dense H[n] = H_BM[n] + H_LM[n] Omega H_BL[n], N_M x N_B.
CMat channel_matrix(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega, int n);

/// mu[n] = sqrt(P) H[n] f, evaluated hop by hop without forming H[n].
CVec received_mean(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                   const Precoder& f, int n);

/// mu[n] + w, w_i ~ CN(0, 2 noise_var).
CVec sample_received(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                     const Precoder& f, int n, CounterRng& rng);

}  // namespace liscrb
