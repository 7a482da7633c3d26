#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "liscrb/scenario.hpp"

namespace liscrb {

/// Index of each unknown channel parameter inside eta. Every FIM consumer
/// uses this ordering.
enum EtaIndex : int {
  kTauBM = 0,
  kThetaBM = 1,
  kPhiBM = 2,
  kRhoBM = 3,
  kTauLM = 4,
  kPhiLM = 5,
  kRhoLM = 6,
};
inline constexpr int kEtaSize = 7;
inline constexpr std::array<std::string_view, kEtaSize> kEtaNames = {
    "tau_bm", "theta_bm", "phi_bm", "rho_bm", "tau_lm", "phi_lm", "rho_lm"};

using EtaVector = Eigen::Matrix<double, kEtaSize, 1>;
using EtaMatrix = Eigen::Matrix<double, kEtaSize, kEtaSize>;
using Jacobian73 = Eigen::Matrix<double, kEtaSize, 3>;

/// Channel parameters of the direct link, the BS->LIS hop and the LIS->MS hop.
/// Delays in seconds, angles in radians, gains dimensionless.
struct ChannelParams {
  double tau_bm = 0, theta_bm = 0, phi_bm = 0, rho_bm = 0;
  double tau_lm = 0, phi_lm = 0, rho_lm = 0;
  // Known once b and l are known (theta_lm also depends on m but is not
  // part of the unknown vector).
  double tau_bl = 0, theta_bl = 0, phi_bl = 0, rho_bl = 0;
  double theta_lm = 0;

  EtaVector eta() const;
  /// Copy with the seven unknowns replaced; known-side fields untouched.
  ChannelParams with_eta(const EtaVector& eta) const;
};

/// zeta = [m_x, m_y, alpha].
struct PositionState {
  Vec2 m{0.0, 0.0};
  double alpha = 0.0;
};

/// Positions and constants the second estimation stage treats as known.
struct KnownGeometry {
  Vec2 b;
  Vec2 l;
  double mu;
  double c;

  static KnownGeometry from(const Scenario& s) { return {s.b, s.l, s.mu, s.c}; }
};

ChannelParams channel_params_from_geometry(const Scenario& s);
ChannelParams channel_params_from_geometry(const KnownGeometry& g, const PositionState& z);

/// Inverse of the LoS relations: m = b + c tau [cos theta, sin theta],
/// alpha = pi + theta - phi.
PositionState reconstruct_from_los(const Vec2& b, double c, double tau_bm, double theta_bm,
                                   double phi_bm);

/// One message per violated angular-sector constraint. The paper scenario
/// itself violates the phi_BM sector, so these are advisory.
std::vector<std::string> validate_angular_sector(const ChannelParams& p, double alpha);

/// Largest N_L strictly below the far-field bound
/// sqrt(lambda) / (sqrt(2) d) * min(sqrt|b-l|, sqrt|l-m|).
int max_far_field_elements(const Scenario& s);
double far_field_bound(const Scenario& s);

/// Which alpha column to use in T1. The printed derivative list claims
/// d theta_BM / d alpha = -1 and d phi_BM / d alpha = +1; the geometry map
/// gives 0 and -1. `geometric` is the derivative of
/// channel_params_from_geometry and is what the estimator and the bounds use.
enum class JacobianConvention { geometric, as_printed };

/// [T1]_{ij} = d eta_i / d zeta_j, rows in EtaIndex order, columns
/// (m_x, m_y, alpha). Spatial columns follow the printed closed forms, which
/// are exact derivatives of the geometry map whenever b_y <= m_y <= l_y.
Jacobian73 jacobian_t1(const Scenario& s,
                       JacobianConvention convention = JacobianConvention::geometric);
Jacobian73 jacobian_t1(const KnownGeometry& g, const PositionState& z,
                       JacobianConvention convention = JacobianConvention::geometric);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace liscrb
