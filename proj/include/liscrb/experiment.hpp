#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liscrb/bounds.hpp"

namespace liscrb {

enum class SweepKind { snr, n_l, phase_mode, validate };
enum class PhaseMode { incremental, random };

const char* to_string(SweepKind kind);
const char* to_string(PhaseMode mode);
SweepKind parse_sweep_kind(const std::string& text);
PhaseMode parse_phase_mode(const std::string& text);

struct SweepSpec {
  SweepKind kind = SweepKind::snr;
  std::vector<double> grid;  // SNR in dB, or N_L values for kind = n_l
  PhaseMode phase = PhaseMode::incremental;
  int trials = 1;            // random profiles per grid point (median reported)
  std::uint64_t seed = 42;
  FimSource fim_source = FimSource::numeric;
  bool benchmark = false;    // add LoS + scatterer rows
  int n_l = 100;             // fixed N_L for the SNR-type sweeps
  double snr_db = 5.0;       // fixed SNR for kind = n_l
  std::optional<Vec2> scatter;  // benchmark scatterer, defaults to the LIS center
  JacobianConvention convention = JacobianConvention::geometric;
  AppendixReading reading = AppendixReading::as_printed;

  /// Throws InvalidInputError; far-field violations name the element cap.
  void validate(const Scenario& s) const;
};

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

struct SweepRow {
  std::string sweep_kind;
  double grid_value = 0.0;
  std::string variant;
  int n_l = 0;
  double snr_db = 0.0;
  std::string phase_mode;
  double peb_m = 0.0;
  double oeb_rad = 0.0;
  std::array<double, kEtaSize> crb_std{};  // EtaIndex order
  std::array<double, 3> norm_crb{};        // tau_lm, phi_lm, rho_lm
  double condition_number = 0.0;
  std::string fim_source;
  std::uint64_t seed = 0;
  int bench = 0;
};

/// Rows in grid order; for each grid point the LIS variant(s) precede the
/// benchmark row.
std::vector<SweepRow> run_sweep(const Scenario& s, const SweepSpec& spec);

std::string csv_header();
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_csv(std::istream& in);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

struct VariantSummary {
  std::string variant;
  int rows = 0;
  double peb_min = 0.0, peb_max = 0.0;
  double oeb_min = 0.0, oeb_max = 0.0;
  std::optional<double> oeb_crossing_snr_db;
};

struct VariantGap {
  std::string first, second;
  double gap_db = 0.0;  // crossing(second) - crossing(first)
};

struct SweepSummary {
  double oeb_level = 1e-2;
  std::vector<VariantSummary> variants;  // first-appearance order
  std::vector<VariantGap> gaps;
};

/// SNR (dB) where OEB first falls to `level`, by linear interpolation of
/// log10(OEB) between adjacent grid points. Points are taken in SNR order.
std::optional<double> oeb_crossing(const std::vector<double>& snr_db,
                                   const std::vector<double>& oeb, double level);

SweepSummary summarize(const std::vector<SweepRow>& rows, double oeb_level = 1e-2);
std::string format_summary(const SweepSummary& summary);

}  // namespace liscrb
