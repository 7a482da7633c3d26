#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liscrb/oracle.hpp"

namespace liscrb {

enum class FimSource { closed_form, numeric };

const char* to_string(FimSource source);

struct BoundsOptions {
  FimSource source = FimSource::numeric;
  JacobianConvention convention = JacobianConvention::geometric;
  AppendixReading reading = AppendixReading::as_printed;
  OracleOptions oracle{};
};

struct BoundsReport {
  double peb_m = 0.0;
  double oeb_rad = 0.0;
  std::map<std::string, double> crb_std;
  std::map<std::string, double> normalized_crb_std;
  double condition_number = 0.0;  // of the equilibrated position FIM
  FimSource fim_source = FimSource::numeric;
};

/// Pseudo-inverse of an information matrix after symmetric diagonal
/// equilibration D^-1/2 J D^-1/2. Eigenvalues below floor_ratio * max are
/// dropped; their directions are kept in `null_directions`.
struct InverseResult {
  Eigen::MatrixXd covariance;
  std::vector<Eigen::VectorXd> null_directions;  // original coordinates, unit norm
  std::vector<Eigen::VectorXd> scaled_null_directions;  // equilibrated coordinates
  double condition_number = 0.0;                 // of the equilibrated matrix

  /// [J^-1]_ii, or +inf if a dropped direction touches parameter i.
  double variance(int i) const;
  /// Sum of variance(i) over `indices`, +inf if any is unbounded.
  double block_trace(const std::vector<int>& indices) const;
};

InverseResult invert_information(const Eigen::MatrixXd& fim, double floor_ratio = 1e-14);

/// 7x7 channel FIM summed over subcarriers, from the chosen source.
FimMatrix fim_channel(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                      const Precoder& f, const BoundsOptions& options = {});

/// T^T J T.
FimMatrix fim_position(const Eigen::MatrixXd& t, const FimMatrix& channel_fim);
FimMatrix fim_position(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                       const Precoder& f, const BoundsOptions& options = {});

/// Zeroes the rows and columns of the NLoS parameters.
FimMatrix los_only(const FimMatrix& channel_fim);

/// Bounds from an already computed 7x7 channel FIM.
BoundsReport bounds_from_fim(const FimMatrix& channel_fim, const Jacobian73& t1,
                             const ChannelParams& p, FimSource source);

BoundsReport bounds_report(const Scenario& s, const PhaseProfile& omega, const Precoder& f,
                           const BoundsOptions& options = {});

/// LoS + single scatterer benchmark. crb_std uses the kBenchNames labels.
BoundsReport benchmark_bounds(const Scenario& s, const Vec2& scatter, const Precoder& f,
                              const OracleOptions& options = {});

}  // namespace liscrb
