#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liscrb/channel.hpp"

namespace liscrb {

/// Real symmetric positive semidefinite information matrix.
struct FimMatrix {
  Eigen::MatrixXd entries;
  std::optional<int> subcarrier;

  int dim() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }

  /// max |J - J^T| / max |J|.
  double relative_asymmetry() const;
  /// lambda_min / lambda_max of the symmetric part.
  double min_eigen_ratio() const;
  bool is_symmetric(double tol = 1e-9) const { return relative_asymmetry() < tol; }
  bool is_psd(double tol = 1e-9) const { return min_eigen_ratio() >= -tol; }
};

/// Effective LIS gain and the LoS/NLoS delay-difference phasor of subcarrier n.
struct NlosScalars {
  cdouble beta;  // a_t^H(theta_LM) Omega a_r(phi_BL) a_t^H(theta_BL) f
  cdouble xi;    // exp(-j 2 pi (tau_BL + tau_LM - tau_BM) n B / N)
};

NlosScalars nlos_scalars(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                         const Precoder& f, int n);
/// beta via the Hadamard form [a_t(theta_LM) .* conj(a_r(phi_BL))]^H omega a_t^H(theta_BL) f.
cdouble beta_hadamard_form(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                           const Precoder& f, int n);

/// How to read the printed appendix entries. `as_printed` keeps the missing
/// N_M factor in Psi(tau_BM, theta_BM); `corrected` restores it.
enum class AppendixReading { as_printed, corrected };

/// Closed-form 7x7 channel-parameter FIM of one subcarrier, scaled by P / sigma^2.
FimMatrix fim_channel_subcarrier(const Scenario& s, const ChannelParams& p,
                                 const PhaseProfile& omega, const Precoder& f, int n,
                                 AppendixReading reading = AppendixReading::as_printed);

/// Sum of fim_channel_subcarrier over all subcarriers (pairwise summation).
FimMatrix fim_channel_total(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                            const Precoder& f,
                            AppendixReading reading = AppendixReading::as_printed);

/// "psi(tau_bm,theta_bm)" style label of entry (i, j) of a 7x7 channel FIM.
std::string fim_entry_name(int i, int j);

/// Pairwise (cascade) summation of equally sized matrices.
Eigen::MatrixXd pairwise_sum(const std::vector<Eigen::MatrixXd>& terms);

}  // namespace liscrb
