#pragma once

#include <filesystem>
#include <vector>

#include "liscrb/channel.hpp"

namespace liscrb {

/// omega_i = 2 pi (i-1) (d / lambda) [sin(theta_LM) - sin(phi_BL)]: aligns
/// every LIS element so |beta| reaches N_L |a_t^H(theta_BL) f|.
PhaseProfile incremental_phase(const Scenario& s, const ChannelParams& p);

/// i.i.d. uniform phases on (0, 2pi].
PhaseProfile random_phase(int n_l, CounterRng& rng);

struct BetaGain {
  double abs_beta;     // |beta[0]|
  double upper_bound;  // N_L |a_t^H(theta_BL) f|
};
BetaGain beta_gain(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                   const Precoder& f);

// Plain-text list of radians, one value per line, '#' starts a comment.
std::vector<double> read_radians(const std::filesystem::path& path);
void write_radians(const std::filesystem::path& path, const std::vector<double>& values);
PhaseProfile load_phase_profile(const std::filesystem::path& path);
void save_phase_profile(const std::filesystem::path& path, const PhaseProfile& omega);

}  // namespace liscrb
