#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace liscrb {

using Vec2 = Eigen::Vector2d;

inline constexpr double kSpeedOfLight = 299792458.0;

/// Physical scenario: node placements, array sizes and the OFDM/link budget.
///
/// Positions are in meters, angles in radians, all other quantities SI.
/// The noise model is per-entry complex variance 2 * noise_var, so the
/// signal-to-noise ratio is power / noise_var.
struct Scenario {
  Vec2 b{0.0, 0.0};               // BS array center
  Vec2 l{160.0 / 3.0, 80.0};      // LIS center
  Vec2 m{80.0, 40.0};             // MS array center
  double alpha = 0.1 * 3.14159265358979323846;  // MS rotation
  double mu = 2.08;               // path-loss exponent
  int n_b = 128;
  int n_m = 32;
  int n_l = 100;
  int n_sub = 31;                 // odd subcarrier count
  double bandwidth_hz = 100e6;
  double fc_hz = 60e9;
  double d_spacing_m = 0.0;       // set to lambda / 2 by paper_default()
  double power = 1.0;
  double noise_var = 1.0;
  double c = kSpeedOfLight;

  /// The simulation setup the library reproduces by default (N_L = 100,
  /// SNR 0 dB, half-wavelength spacing).
  static Scenario paper_default();

  double wavelength() const { return c / fc_hz; }
  double snr() const { return power / noise_var; }
  double snr_db() const;
  /// Sets power = 10^(snr_db / 10) with unit noise variance.
  Scenario with_snr_db(double snr_db) const;
  Scenario with_n_l(int n_l) const;

  /// Subcarrier indices -(N-1)/2 ... (N-1)/2.
  std::vector<int> subcarriers() const;
  bool valid_subcarrier(int n) const;

  /// Throws InvalidInputError / DegenerateGeometryError on violated invariants.
  void validate() const;
};

/// Reads a JSON object whose keys are the Scenario field names. Absent keys
/// keep the paper_default() values; an absent d_spacing_m becomes lambda / 2
/// of the loaded carrier.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

}  // namespace liscrb
