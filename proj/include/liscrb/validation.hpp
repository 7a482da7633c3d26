#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "liscrb/oracle.hpp"

namespace liscrb {

/// One randomized validation case: small arrays, positions drawn inside the
/// paper's coordinate box with b_y <= m_y <= l_y.
struct ValidationCase {
  Scenario scenario;
  PhaseProfile omega;
  Precoder precoder;
};

ValidationCase random_validation_case(CounterRng& rng);

/// |closed - oracle| / sqrt(oracle_ii oracle_jj).
double normalized_entry_error(const Eigen::MatrixXd& closed, const Eigen::MatrixXd& oracle, int i,
                              int j);

/// Aggregate over all (scenario, subcarrier) cases of one flagged FIM entry
/// (upper triangle).
struct DiscrepancyRecord {
  std::string entry;
  int i = 0, j = 0;
  int cases_flagged = 0;
  double worst_error = 0.0;
  double closed_value = 0.0;  // at the worst case
  double oracle_value = 0.0;
  double ratio = 0.0;         // closed / oracle at the worst case
};

struct ValidationSummary {
  int scenarios = 0;
  int cases = 0;  // scenario x subcarrier pairs
  int entries_checked = 0;
  double tolerance = 1e-6;
  double max_error_unflagged = 0.0;
  std::vector<DiscrepancyRecord> discrepancies;

  bool clean() const { return discrepancies.empty(); }
};

ValidationSummary validate_closed_form(int scenarios, std::uint64_t seed, AppendixReading reading,
                                       double tolerance = 1e-6);

/// One JSON object per line; oracle values are the adopted ones.
void write_discrepancy_report(std::ostream& out, const ValidationSummary& summary);

}  // namespace liscrb
