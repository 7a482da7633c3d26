#include "liscrb/phase.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "liscrb/errors.hpp"
#include "liscrb/fim.hpp"

namespace liscrb {

PhaseProfile incremental_phase(const Scenario& s, const ChannelParams& p) {
  const double step = 2.0 * std::numbers::pi * (s.d_spacing_m / s.wavelength()) *
                      (std::sin(p.theta_lm) - std::sin(p.phi_bl));
  PhaseProfile out{Eigen::VectorXd(s.n_l)};
  for (int i = 0; i < s.n_l; ++i) out.omegas[i] = step * i;
  return out;
}

PhaseProfile random_phase(int n_l, CounterRng& rng) {
  if (n_l < 1) throw InvalidInputError("random_phase needs n_l >= 1");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  PhaseProfile out{Eigen::VectorXd(n_l)};
  for (int i = 0; i < n_l; ++i) out.omegas[i] = kTwoPi - u(rng);
  return out;
}

BetaGain beta_gain(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                   const Precoder& f) {
  const NlosScalars nl = nlos_scalars(s, p, omega, f, 0);
  const cdouble bs_to_lis =
      steering_vector(p.theta_bl, s.n_b, s.d_spacing_m, s.wavelength()).dot(f.at(0));
  return {std::abs(nl.beta), s.n_l * std::abs(bs_to_lis)};
}

std::vector<double> read_radians(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v))
        throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                                ": not a finite number: '" + token + "'");
      out.push_back(v);
    }
  }
  return out;
}

void write_radians(const std::filesystem::path& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << std::setprecision(17);
  for (double v : values) out << v << '\n';
  if (!out) throw InvalidInputError("write failed for " + path.string());
}

PhaseProfile load_phase_profile(const std::filesystem::path& path) {
  const auto values = read_radians(path);
  if (values.empty()) throw InvalidInputError(path.string() + " holds no phase values");
  return PhaseProfile{Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                        static_cast<Eigen::Index>(values.size()))};
}

void save_phase_profile(const std::filesystem::path& path, const PhaseProfile& omega) {
  write_radians(path, std::vector<double>(omega.omegas.begin(), omega.omegas.end()));
}

}  // namespace liscrb
