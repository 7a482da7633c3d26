#include "liscrb/bounds.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "liscrb/errors.hpp"

namespace liscrb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e12;
constexpr double kOverlapTol = 1e-8;

Eigen::VectorXd position_null_direction(const InverseResult& inv) {
  if (!inv.null_directions.empty()) return inv.null_directions.front();
  return Eigen::VectorXd();
}

// PEB / OEB from a position FIM whose first three coordinates are (m_x, m_y, alpha).
void position_bounds(const Eigen::MatrixXd& position_fim, BoundsReport& out) {
  const InverseResult inv = invert_information(position_fim);
  out.condition_number = inv.condition_number;
  if (!(inv.condition_number < kMaxCondition)) {
    Eigen::VectorXd dir = position_null_direction(inv);
    if (dir.size() == 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(position_fim);
      dir = eig.eigenvectors().col(0);
    }
    throw SingularFimError("position FIM is singular (condition number " +
                               std::to_string(inv.condition_number) + ")",
                           dir);
  }
  out.peb_m = std::sqrt(inv.block_trace({0, 1}));
  out.oeb_rad = std::sqrt(inv.variance(2));
}

}  // namespace

const char* to_string(FimSource source) {
  return source == FimSource::closed_form ? "closed_form" : "numeric";
}

double InverseResult::variance(int i) const {
  for (const auto& v : scaled_null_directions)
    if (std::abs(v[i]) > kOverlapTol) return kInf;
  return covariance(i, i);
}

double InverseResult::block_trace(const std::vector<int>& indices) const {
  double sum = 0.0;
  for (int i : indices) sum += variance(i);
  return sum;
}

InverseResult invert_information(const Eigen::MatrixXd& fim, double floor_ratio) {
  if (fim.rows() != fim.cols() || fim.rows() == 0)
    throw InvalidInputError("information matrix must be square and nonempty");
  const Eigen::Index dim = fim.rows();
  Eigen::VectorXd inv_sqrt(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    inv_sqrt[i] = fim(i, i) > 0.0 ? 1.0 / std::sqrt(fim(i, i)) : 1.0;

  const Eigen::MatrixXd sym = 0.5 * (fim + fim.transpose());
  const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * sym * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
  if (eig.info() != Eigen::Success) throw InvalidInputError("eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const double top = lambda.maxCoeff();
  const double floor = floor_ratio * top;

  InverseResult out;
  Eigen::MatrixXd scaled_cov = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (top > 0.0 && lambda[k] > floor) {
      scaled_cov += vecs.col(k) * vecs.col(k).transpose() / lambda[k];
    } else {
      out.scaled_null_directions.push_back(vecs.col(k));
      Eigen::VectorXd dir = inv_sqrt.asDiagonal() * vecs.col(k);
      out.null_directions.push_back(dir / dir.norm());
    }
  }
  out.covariance = inv_sqrt.asDiagonal() * scaled_cov * inv_sqrt.asDiagonal();
  const double bottom = lambda.minCoeff();
  out.condition_number = (top > 0.0 && bottom > 0.0) ? top / bottom : kInf;
  return out;
}

FimMatrix fim_channel(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                      const Precoder& f, const BoundsOptions& options) {
  if (options.source == FimSource::closed_form)
    return fim_channel_total(s, p, omega, f, options.reading);
  return fim_channel_numeric(s, p, omega, f, options.oracle);
}

FimMatrix fim_position(const Eigen::MatrixXd& t, const FimMatrix& channel_fim) {
  if (t.rows() != channel_fim.dim())
    throw InvalidInputError("Jacobian rows (" + std::to_string(t.rows()) +
                            ") differ from FIM dimension (" + std::to_string(channel_fim.dim()) + ")");
  Eigen::MatrixXd out = t.transpose() * channel_fim.entries * t;
  out = 0.5 * (out + out.transpose());
  return FimMatrix{std::move(out), channel_fim.subcarrier};
}

FimMatrix fim_position(const Scenario& s, const ChannelParams& p, const PhaseProfile& omega,
                       const Precoder& f, const BoundsOptions& options) {
  return fim_position(jacobian_t1(s, options.convention), fim_channel(s, p, omega, f, options));
}

FimMatrix los_only(const FimMatrix& channel_fim) {
  if (channel_fim.dim() != kEtaSize) throw InvalidInputError("los_only expects a 7x7 channel FIM");
  FimMatrix out = channel_fim;
  for (int i : {kTauLM, kPhiLM, kRhoLM}) {
    out.entries.row(i).setZero();
    out.entries.col(i).setZero();
  }
  return out;
}

BoundsReport bounds_from_fim(const FimMatrix& channel_fim, const Jacobian73& t1,
                             const ChannelParams& p, FimSource source) {
  BoundsReport out;
  out.fim_source = source;
  position_bounds(fim_position(t1, channel_fim).entries, out);

  const InverseResult inv = invert_information(channel_fim.entries);
  const EtaVector eta = p.eta();
  for (int i = 0; i < kEtaSize; ++i) {
    const std::string name(kEtaNames[static_cast<std::size_t>(i)]);
    const double sd = std::sqrt(inv.variance(i));
    out.crb_std[name] = sd;
    out.normalized_crb_std[name] = eta[i] != 0.0 ? sd / std::abs(eta[i]) : kInf;
  }
  return out;
}

BoundsReport bounds_report(const Scenario& s, const PhaseProfile& omega, const Precoder& f,
                           const BoundsOptions& options) {
  s.validate();
  const ChannelParams p = channel_params_from_geometry(s);
  return bounds_from_fim(fim_channel(s, p, omega, f, options), jacobian_t1(s, options.convention),
                         p, options.source);
}

BoundsReport benchmark_bounds(const Scenario& s, const Vec2& scatter, const Precoder& f,
                              const OracleOptions& options) {
  s.validate();
  const FimMatrix channel = benchmark_fim(s, scatter, f, std::nullopt, options);
  BoundsReport out;
  out.fim_source = FimSource::numeric;
  position_bounds(fim_position(benchmark_jacobian(s, scatter), channel).entries, out);

  const InverseResult inv = invert_information(channel.entries);
  const BenchVector truth = benchmark_params(s, s.m, s.alpha, scatter);
  for (int i = 0; i < kBenchSize; ++i) {
    const std::string name(kBenchNames[static_cast<std::size_t>(i)]);
    const double sd = std::sqrt(inv.variance(i));
    out.crb_std[name] = sd;
    out.normalized_crb_std[name] = truth[i] != 0.0 ? sd / std::abs(truth[i]) : kInf;
  }
  return out;
}

}  // namespace liscrb
