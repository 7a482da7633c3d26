#include "liscrb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "liscrb/errors.hpp"
#include "liscrb/phase.hpp"

namespace liscrb {

ValidationCase random_validation_case(CounterRng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  Scenario s = Scenario::paper_default();
  s.b = Vec2(between(0.0, 20.0), between(0.0, 10.0));
  s.l = Vec2(between(30.0, 80.0), between(60.0, 100.0));
  s.m = Vec2(between(40.0, 120.0), between(15.0, 55.0));
  s.alpha = between(0.0, std::numbers::pi / 4.0);
  s.n_b = pick(2, 32);
  s.n_m = pick(2, 8);
  s.n_l = pick(1, 16);
  s.n_sub = 2 * pick(0, 3) + 1;
  s = s.with_snr_db(between(-10.0, 20.0));
  s.validate();

  ValidationCase out{s, random_phase(s.n_l, rng), Precoder::random_phase(s.n_b, rng)};
  return out;
}

double normalized_entry_error(const Eigen::MatrixXd& closed, const Eigen::MatrixXd& oracle, int i,
                              int j) {
  const double scale = std::sqrt(std::abs(oracle(i, i) * oracle(j, j)));
  const double diff = std::abs(closed(i, j) - oracle(i, j));
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

ValidationSummary validate_closed_form(int scenarios, std::uint64_t seed, AppendixReading reading,
                                       double tolerance) {
  if (scenarios < 1) throw InvalidInputError("validation needs at least one scenario");
  ValidationSummary out;
  out.scenarios = scenarios;
  out.tolerance = tolerance;
  std::map<std::pair<int, int>, DiscrepancyRecord> flagged;

  const CounterRng root(seed, 2);
  for (int k = 0; k < scenarios; ++k) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(k));
    const ValidationCase vc = random_validation_case(rng);
    out.cases += vc.scenario.n_sub;
    const ChannelParams p = channel_params_from_geometry(vc.scenario);
    const ParamVector pv = lis_param_vector(vc.scenario, p, vc.omega, vc.precoder);
    // Per subcarrier: with a shared precoder the entries odd in n cancel in
    // the sum, which would hide errors in them.
    for (int n : vc.scenario.subcarriers()) {
      const Eigen::MatrixXd closed =
          fim_channel_subcarrier(vc.scenario, p, vc.omega, vc.precoder, n, reading).entries;
      const Eigen::MatrixXd oracle = fim_numeric(pv, vc.scenario.snr(), n).entries;

      for (int i = 0; i < kEtaSize; ++i) {
        for (int j = i; j < kEtaSize; ++j) {
          ++out.entries_checked;
          const double err = normalized_entry_error(closed, oracle, i, j);
          if (err < tolerance) {
            out.max_error_unflagged = std::max(out.max_error_unflagged, err);
            continue;
          }
          DiscrepancyRecord& rec = flagged[{i, j}];
          rec.entry = fim_entry_name(i, j);
          rec.i = i;
          rec.j = j;
          ++rec.cases_flagged;
          if (err > rec.worst_error) {
            rec.worst_error = err;
            rec.closed_value = closed(i, j);
            rec.oracle_value = oracle(i, j);
            rec.ratio = oracle(i, j) != 0.0 ? closed(i, j) / oracle(i, j) : 0.0;
          }
        }
      }
    }
  }
  for (auto& [key, rec] : flagged) out.discrepancies.push_back(rec);
  return out;
}

void write_discrepancy_report(std::ostream& out, const ValidationSummary& summary) {
  for (const DiscrepancyRecord& rec : summary.discrepancies) {
    nlohmann::json line = {
        {"entry", rec.entry},
        {"i", rec.i},
        {"j", rec.j},
        {"cases_flagged", rec.cases_flagged},
        {"cases", summary.cases},
        {"worst_normalized_error", rec.worst_error},
        {"closed_form", rec.closed_value},
        {"oracle", rec.oracle_value},
        {"ratio", rec.ratio},
        {"adopted", "oracle"},
    };
    out << line.dump() << '\n';
  }
}

}  // namespace liscrb
