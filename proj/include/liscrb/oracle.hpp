#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "liscrb/fim.hpp"

namespace liscrb {

/// Real parameter vector with a deterministic map to the noise-free mean.
/// mu_builder(values, n) returns the unit-power mean H[n] f of subcarrier n;
/// the SNR enters only through the prefactor passed to fim_numeric.
struct ParamVector {
  std::vector<std::string> names;
  Eigen::VectorXd values;
  Eigen::VectorXd steps;  // central-difference step per parameter
  std::function<CVec(const Eigen::VectorXd&, int)> mu_builder;

  int size() const { return static_cast<int>(values.size()); }
  void validate() const;
};

/// 1e-6 (1 + |value|).
double default_step(double value);
/// 1e-3 / B: moves the delay phase 2 pi tau n B / N by a resolvable amount.
double delay_step(double bandwidth_hz);

enum class Difference { central, richardson };

struct OracleOptions {
  /// `richardson` combines steps h and h/2 as (4 D(h/2) - D(h)) / 3.
  Difference scheme = Difference::richardson;
  double step_scale = 1.0;
};

/// prefactor * Re{J^H J} with J the finite-difference Jacobian of mu[n].
FimMatrix fim_numeric(const ParamVector& pv, double snr_prefactor, int n,
                      const OracleOptions& options = {});
FimMatrix fim_numeric_total(const ParamVector& pv, double snr_prefactor,
                            const std::vector<int>& subcarriers, const OracleOptions& options = {});

/// eta parameterisation of the LIS scenario (beta held fixed, as in the
/// closed forms).
ParamVector lis_param_vector(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                             const Precoder& f);
FimMatrix fim_channel_numeric(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                              const Precoder& f, const OracleOptions& options = {});

// --- LoS + single scatterer benchmark (no LIS) ---

inline constexpr int kBenchSize = 8;
inline constexpr std::array<std::string_view, kBenchSize> kBenchNames = {
    "tau_bm", "theta_bm", "phi_bm", "rho_bm", "tau_bsm", "theta_bsm", "phi_bsm", "rho_bsm"};
enum BenchIndex : int { kBTauBSM = 4, kBThetaBSM = 5, kBPhiBSM = 6, kBRhoBSM = 7 };

using BenchVector = Eigen::Matrix<double, kBenchSize, 1>;

/// [tau, theta, phi, rho] of the direct path followed by the same for the
/// BS -> scatterer -> MS path. The scattered path gain mirrors the LIS
/// cascade, (|b - s| |s - m|)^(-mu/2).
BenchVector benchmark_params(const Scenario& s, const Vec2& m, double alpha, const Vec2& scatter);

/// Unit-power mean of the two-path benchmark channel.
CVec benchmark_mean(const Scenario& s, const BenchVector& params, const Precoder& f, int n);

/// 8x8 channel-domain FIM of the benchmark summed over subcarriers.
/// `scatter_gain` overrides rho_bsm.
FimMatrix benchmark_fim(const Scenario& s, const Vec2& scatter, const Precoder& f,
                        std::optional<double> scatter_gain = std::nullopt,
                        const OracleOptions& options = {});

/// d params / d [m_x, m_y, alpha, s_x, s_y] by central differences.
Eigen::Matrix<double, kBenchSize, 5> benchmark_jacobian(const Scenario& s, const Vec2& scatter);

}  // namespace liscrb
