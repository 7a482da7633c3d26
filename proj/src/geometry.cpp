#include "liscrb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "liscrb/errors.hpp"

namespace liscrb {

namespace {

constexpr double kPi = std::numbers::pi;

// arccos with rounding slack on collinear geometries.
double clamped_acos(double x) {
  constexpr double kSlack = 1e-12;
  if (!(std::abs(x) <= 1.0 + kSlack))
    throw std::logic_error("arccos argument outside [-1, 1]: " + std::to_string(x));
  return std::acos(std::clamp(x, -1.0, 1.0));
}

double checked_distance(const Vec2& a, const Vec2& b, const char* what) {
  const double r = (a - b).norm();
  if (!(r > 0.0)) throw DegenerateGeometryError(std::string("coincident nodes: ") + what);
  return r;
}

bool inside(double v, double lo, double hi) { return v > lo && v < hi; }

}  // namespace

EtaVector ChannelParams::eta() const {
  EtaVector e;
  e << tau_bm, theta_bm, phi_bm, rho_bm, tau_lm, phi_lm, rho_lm;
  return e;
}

ChannelParams ChannelParams::with_eta(const EtaVector& e) const {
  ChannelParams p = *this;
  p.tau_bm = e[kTauBM];
  p.theta_bm = e[kThetaBM];
  p.phi_bm = e[kPhiBM];
  p.rho_bm = e[kRhoBM];
  p.tau_lm = e[kTauLM];
  p.phi_lm = e[kPhiLM];
  p.rho_lm = e[kRhoLM];
  return p;
}

ChannelParams channel_params_from_geometry(const KnownGeometry& g, const PositionState& z) {
  const double r_bm = checked_distance(g.b, z.m, "BS and MS");
  const double r_bl = checked_distance(g.b, g.l, "BS and LIS");
  const double r_lm = checked_distance(g.l, z.m, "LIS and MS");

  ChannelParams p;
  p.tau_bm = r_bm / g.c;
  p.tau_bl = r_bl / g.c;
  p.tau_lm = r_lm / g.c;

  p.theta_bm = clamped_acos((z.m.x() - g.b.x()) / r_bm);
  p.theta_bl = clamped_acos((g.l.x() - g.b.x()) / r_bl);
  p.theta_lm = -clamped_acos((z.m.x() - g.l.x()) / r_lm);

  p.phi_bm = kPi + p.theta_bm - z.alpha;
  p.phi_bl = -kPi + p.theta_bl;
  p.phi_lm = kPi + p.theta_lm - z.alpha;

  p.rho_bm = std::pow(r_bm, -g.mu / 2.0);
  p.rho_bl = std::pow(r_bl, -g.mu / 2.0);
  p.rho_lm = std::pow(r_lm, -g.mu / 2.0);
  return p;
}

ChannelParams channel_params_from_geometry(const Scenario& s) {
  return channel_params_from_geometry(KnownGeometry::from(s), PositionState{s.m, s.alpha});
}

PositionState reconstruct_from_los(const Vec2& b, double c, double tau_bm, double theta_bm,
                                   double phi_bm) {
  PositionState z;
  const double range = c * tau_bm;
  z.m = b + range * Vec2(std::cos(theta_bm), std::sin(theta_bm));
  z.alpha = kPi + theta_bm - phi_bm;
  return z;
}

std::vector<std::string> validate_angular_sector(const ChannelParams& p, double alpha) {
  std::vector<std::string> warnings;
  auto check = [&](const char* name, double v, double lo, double hi, const char* range) {
    if (!inside(v, lo, hi))
      warnings.push_back(std::string(name) + " = " + std::to_string(v) + " rad outside " + range);
  };
  check("theta_bm", p.theta_bm, 0.0, kPi / 2, "(0, pi/2)");
  check("theta_bl", p.theta_bl, 0.0, kPi / 2, "(0, pi/2)");
  check("theta_lm", p.theta_lm, -kPi / 2, 0.0, "(-pi/2, 0)");
  check("phi_bl", p.phi_bl, -kPi, -kPi / 2, "(-pi, -pi/2)");
  check("phi_bm", p.phi_bm, kPi / 2, kPi, "(pi/2, pi)");
  check("phi_lm", p.phi_lm, kPi / 2, kPi, "(pi/2, pi)");
  check("alpha", alpha, 0.0, kPi / 2, "(0, pi/2)");
  return warnings;
}

double far_field_bound(const Scenario& s) {
  const double lambda = s.wavelength();
  const double r_bl = checked_distance(s.b, s.l, "BS and LIS");
  const double r_lm = checked_distance(s.l, s.m, "LIS and MS");
  return std::sqrt(lambda) / (std::sqrt(2.0) * s.d_spacing_m) *
         std::min(std::sqrt(r_bl), std::sqrt(r_lm));
}

int max_far_field_elements(const Scenario& s) {
  const double bound = far_field_bound(s);
  // Strict inequality: an integral bound is itself not admissible.
  return static_cast<int>(std::ceil(bound)) - 1;
}

Jacobian73 jacobian_t1(const KnownGeometry& g, const PositionState& z,
                       JacobianConvention convention) {
  const ChannelParams p = channel_params_from_geometry(g, z);
  const double r_bm = (g.b - z.m).norm();
  const double r_lm = (g.l - z.m).norm();
  const double c_bm = std::cos(p.theta_bm), s_bm = std::sin(p.theta_bm);
  const double c_lm = std::cos(p.theta_lm), s_lm = std::sin(p.theta_lm);
  const double gain_bm = -g.mu / 2.0 * std::pow(r_bm, -g.mu / 2.0 - 1.0);
  const double gain_lm = -g.mu / 2.0 * std::pow(r_lm, -g.mu / 2.0 - 1.0);

  Jacobian73 t = Jacobian73::Zero();
  t.row(kTauBM) << c_bm / g.c, s_bm / g.c, 0.0;
  t.row(kThetaBM) << -s_bm / r_bm, c_bm / r_bm, 0.0;
  t.row(kPhiBM) << -s_bm / r_bm, c_bm / r_bm, -1.0;
  t.row(kRhoBM) << gain_bm * c_bm, gain_bm * s_bm, 0.0;
  t.row(kTauLM) << c_lm / g.c, s_lm / g.c, 0.0;
  t.row(kPhiLM) << -s_lm / r_lm, c_lm / r_lm, -1.0;
  t.row(kRhoLM) << gain_lm * c_lm, gain_lm * s_lm, 0.0;

  if (convention == JacobianConvention::as_printed) {
    t(kThetaBM, 2) = -1.0;
    t(kPhiBM, 2) = 1.0;
  }
  return t;
}

Jacobian73 jacobian_t1(const Scenario& s, JacobianConvention convention) {
  return jacobian_t1(KnownGeometry::from(s), PositionState{s.m, s.alpha}, convention);
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace liscrb
