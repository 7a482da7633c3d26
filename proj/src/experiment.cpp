#include "liscrb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "liscrb/errors.hpp"
#include "liscrb/parallel.hpp"
#include "liscrb/phase.hpp"

namespace liscrb {

namespace {

constexpr std::uint64_t kPrecoderStream = 3;
constexpr std::uint64_t kPhaseStream = 4;

const std::vector<std::string> kColumns = {
    "sweep_kind",      "grid_value",      "variant",         "n_l",
    "snr_db",          "phase_mode",      "peb_m",           "oeb_rad",
    "crb_std_tau_bm",  "crb_std_theta_bm", "crb_std_phi_bm", "crb_std_rho_bm",
    "crb_std_tau_lm",  "crb_std_phi_lm",  "crb_std_rho_lm",  "norm_crb_tau_lm",
    "norm_crb_phi_lm", "norm_crb_rho_lm", "condition_number", "fim_source",
    "seed",            "bench"};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Point {
  int n_l;
  double snr_db;
};

SweepRow lis_row(const BoundsReport& r) {
  SweepRow row;
  row.peb_m = r.peb_m;
  row.oeb_rad = r.oeb_rad;
  for (int i = 0; i < kEtaSize; ++i)
    row.crb_std[static_cast<std::size_t>(i)] = r.crb_std.at(std::string(kEtaNames[static_cast<std::size_t>(i)]));
  row.norm_crb = {r.normalized_crb_std.at("tau_lm"), r.normalized_crb_std.at("phi_lm"),
                  r.normalized_crb_std.at("rho_lm")};
  row.condition_number = r.condition_number;
  row.fim_source = to_string(r.fim_source);
  return row;
}

SweepRow benchmark_row(const BoundsReport& r) {
  SweepRow row;
  row.peb_m = r.peb_m;
  row.oeb_rad = r.oeb_rad;
  const char* names[kEtaSize] = {"tau_bm", "theta_bm", "phi_bm", "rho_bm",
                                 "tau_bsm", "phi_bsm", "rho_bsm"};
  for (std::size_t i = 0; i < kEtaSize; ++i) row.crb_std[i] = r.crb_std.at(names[i]);
  row.norm_crb = {r.normalized_crb_std.at("tau_bsm"), r.normalized_crb_std.at("phi_bsm"),
                  r.normalized_crb_std.at("rho_bsm")};
  row.condition_number = r.condition_number;
  row.fim_source = to_string(r.fim_source);
  row.bench = 1;
  return row;
}

// Element-wise median of the numeric columns.
SweepRow median_row(const std::vector<SweepRow>& rows) {
  SweepRow out = rows.front();
  auto column = [&rows](auto get) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(get(r));
    return median(std::move(v));
  };
  out.peb_m = column([](const SweepRow& r) { return r.peb_m; });
  out.oeb_rad = column([](const SweepRow& r) { return r.oeb_rad; });
  for (std::size_t i = 0; i < out.crb_std.size(); ++i)
    out.crb_std[i] = column([i](const SweepRow& r) { return r.crb_std[i]; });
  for (std::size_t i = 0; i < out.norm_crb.size(); ++i)
    out.norm_crb[i] = column([i](const SweepRow& r) { return r.norm_crb[i]; });
  out.condition_number = column([](const SweepRow& r) { return r.condition_number; });
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw InvalidInputError("CSV line " + std::to_string(line_no) + ": not a number: '" + text + "'");
  return v;
}

}  // namespace

const char* to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::snr: return "snr";
    case SweepKind::n_l: return "nl";
    case SweepKind::phase_mode: return "phase";
    case SweepKind::validate: return "validate";
  }
  return "?";
}

const char* to_string(PhaseMode mode) {
  return mode == PhaseMode::incremental ? "incremental" : "random";
}

SweepKind parse_sweep_kind(const std::string& text) {
  if (text == "snr") return SweepKind::snr;
  if (text == "nl" || text == "n_l") return SweepKind::n_l;
  if (text == "phase" || text == "phase_mode") return SweepKind::phase_mode;
  if (text == "validate") return SweepKind::validate;
  throw InvalidInputError("unknown sweep kind '" + text + "'");
}

PhaseMode parse_phase_mode(const std::string& text) {
  if (text == "incremental") return PhaseMode::incremental;
  if (text == "random") return PhaseMode::random;
  throw InvalidInputError("unknown phase mode '" + text + "'");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw InvalidInputError("grid must be a:b:step, got '" + text + "'");
    const double a = parse_double(parts[0], 0), b = parse_double(parts[1], 0),
                 step = parse_double(parts[2], 0);
    if (!(step > 0.0) || b < a) throw InvalidInputError("grid needs a <= b and step > 0");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
  } else {
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) out.push_back(parse_double(part, 0));
  }
  if (out.empty()) throw InvalidInputError("empty grid");
  return out;
}

void SweepSpec::validate(const Scenario& s) const {
  s.validate();
  if (kind == SweepKind::validate) {
    if (trials < 1) throw InvalidInputError("validate needs at least one scenario");
    return;
  }
  if (grid.empty()) throw InvalidInputError("sweep grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInputError("sweep grid must be sorted");
  if (trials < 1) throw InvalidInputError("trials must be >= 1");

  const int cap = max_far_field_elements(s);
  auto check_nl = [cap](double v) {
    if (v < 1.0 || v != std::floor(v))
      throw InvalidInputError("N_L must be a positive integer, got " + format_number(v));
    if (v > cap)
      throw InvalidInputError("N_L = " + format_number(v) + " violates the far-field condition: at most " +
                              std::to_string(cap) + " elements for this scenario");
  };
  if (kind == SweepKind::n_l) {
    for (double v : grid) check_nl(v);
  } else {
    check_nl(n_l);
  }
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec) {
  spec.validate(base);
  if (spec.kind == SweepKind::validate)
    throw InvalidInputError("validate sweeps produce a discrepancy report, not CSV rows");

  CounterRng precoder_rng(spec.seed, kPrecoderStream);
  const Precoder f = Precoder::random_phase(base.n_b, precoder_rng);
  const CounterRng phase_root(spec.seed, kPhaseStream);
  const Vec2 scatter = spec.scatter.value_or(base.l);
  BoundsOptions options;
  options.source = spec.fim_source;
  options.convention = spec.convention;
  options.reading = spec.reading;

  std::vector<PhaseMode> modes;
  if (spec.kind == SweepKind::phase_mode)
    modes = {PhaseMode::incremental, PhaseMode::random};
  else
    modes = {spec.phase};

  auto rows_for = [&](std::size_t g) {
    const double value = spec.grid[g];
    const Point pt = spec.kind == SweepKind::n_l ? Point{static_cast<int>(value), spec.snr_db}
                                                 : Point{spec.n_l, value};
    const Scenario s = base.with_n_l(pt.n_l).with_snr_db(pt.snr_db);
    const ChannelParams p = channel_params_from_geometry(s);
    const Jacobian73 t1 = jacobian_t1(s, spec.convention);

    std::vector<SweepRow> rows;
    for (PhaseMode mode : modes) {
      SweepRow row;
      if (mode == PhaseMode::incremental) {
        row = lis_row(bounds_from_fim(fim_channel(s, p, incremental_phase(s, p), f, options), t1, p,
                                      spec.fim_source));
      } else {
        std::vector<SweepRow> draws;
        for (int t = 0; t < spec.trials; ++t) {
          CounterRng rng = phase_root.split(static_cast<std::uint64_t>(t));
          const PhaseProfile omega = random_phase(s.n_l, rng);
          draws.push_back(lis_row(bounds_from_fim(fim_channel(s, p, omega, f, options), t1, p,
                                                  spec.fim_source)));
        }
        row = median_row(draws);
      }
      row.variant = std::string("lis_") + to_string(mode);
      row.phase_mode = to_string(mode);
      row.n_l = pt.n_l;
      rows.push_back(row);
    }
    if (spec.benchmark) {
      SweepRow row = benchmark_row(benchmark_bounds(s, scatter, f, options.oracle));
      row.variant = "los_scatter";
      row.phase_mode = "none";
      row.n_l = 0;
      rows.push_back(row);
    }
    for (SweepRow& row : rows) {
      row.sweep_kind = to_string(spec.kind);
      row.grid_value = value;
      row.snr_db = pt.snr_db;
      row.seed = spec.seed;
    }
    return rows;
  };

  const auto per_point = parallel_map<std::vector<SweepRow>>(spec.grid.size(), rows_for);
  std::vector<SweepRow> out;
  for (const auto& rows : per_point) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << csv_header() << '\n';
  for (const SweepRow& r : rows) {
    out << r.sweep_kind << ',' << format_number(r.grid_value) << ',' << r.variant << ',' << r.n_l
        << ',' << format_number(r.snr_db) << ',' << r.phase_mode << ',' << format_number(r.peb_m)
        << ',' << format_number(r.oeb_rad);
    for (double v : r.crb_std) out << ',' << format_number(v);
    for (double v : r.norm_crb) out << ',' << format_number(v);
    out << ',' << format_number(r.condition_number) << ',' << r.fim_source << ',' << r.seed << ','
        << r.bench << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  write_csv(out, rows);
  out.flush();
  if (!out) throw InvalidInputError("write failed for " + path.string());
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw InvalidInputError("CSV header does not match the sweep schema");

  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kColumns.size())
      throw InvalidInputError("CSV line " + std::to_string(line_no) + ": expected " +
                              std::to_string(kColumns.size()) + " fields, got " +
                              std::to_string(f.size()));
    SweepRow r;
    std::size_t k = 0;
    r.sweep_kind = f[k++];
    r.grid_value = parse_double(f[k++], line_no);
    r.variant = f[k++];
    r.n_l = static_cast<int>(parse_double(f[k++], line_no));
    r.snr_db = parse_double(f[k++], line_no);
    r.phase_mode = f[k++];
    r.peb_m = parse_double(f[k++], line_no);
    r.oeb_rad = parse_double(f[k++], line_no);
    for (double& v : r.crb_std) v = parse_double(f[k++], line_no);
    for (double& v : r.norm_crb) v = parse_double(f[k++], line_no);
    r.condition_number = parse_double(f[k++], line_no);
    r.fim_source = f[k++];
    r.seed = static_cast<std::uint64_t>(std::stoull(f[k++]));
    r.bench = static_cast<int>(parse_double(f[k++], line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  return read_csv(in);
}

std::optional<double> oeb_crossing(const std::vector<double>& snr_db, const std::vector<double>& oeb,
                                   double level) {
  if (snr_db.size() != oeb.size()) throw InvalidInputError("crossing inputs differ in length");
  std::vector<std::size_t> order(snr_db.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return snr_db[a] < snr_db[b]; });
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double x0 = snr_db[order[k]], x1 = snr_db[order[k + 1]];
    const double y0 = oeb[order[k]], y1 = oeb[order[k + 1]];
    if (x1 == x0 || !(y0 > 0.0) || !(y1 > 0.0)) continue;
    if (y0 >= level && y1 <= level) {
      const double l0 = std::log10(y0), l1 = std::log10(y1), lt = std::log10(level);
      if (l0 == l1) return x0;
      return x0 + (x1 - x0) * (l0 - lt) / (l0 - l1);
    }
  }
  return std::nullopt;
}

SweepSummary summarize(const std::vector<SweepRow>& rows, double oeb_level) {
  if (rows.empty()) throw InvalidInputError("CSV holds no rows");
  SweepSummary out;
  out.oeb_level = oeb_level;
  std::vector<std::string> order;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), r.variant) == order.end()) order.push_back(r.variant);

  for (const auto& name : order) {
    VariantSummary v;
    v.variant = name;
    std::vector<double> snr, oeb;
    for (const auto& r : rows) {
      if (r.variant != name) continue;
      if (v.rows == 0) {
        v.peb_min = v.peb_max = r.peb_m;
        v.oeb_min = v.oeb_max = r.oeb_rad;
      }
      ++v.rows;
      v.peb_min = std::min(v.peb_min, r.peb_m);
      v.peb_max = std::max(v.peb_max, r.peb_m);
      v.oeb_min = std::min(v.oeb_min, r.oeb_rad);
      v.oeb_max = std::max(v.oeb_max, r.oeb_rad);
      snr.push_back(r.snr_db);
      oeb.push_back(r.oeb_rad);
    }
    v.oeb_crossing_snr_db = oeb_crossing(snr, oeb, oeb_level);
    out.variants.push_back(v);
  }
  for (std::size_t i = 0; i < out.variants.size(); ++i)
    for (std::size_t j = i + 1; j < out.variants.size(); ++j) {
      const auto& a = out.variants[i];
      const auto& b = out.variants[j];
      if (a.oeb_crossing_snr_db && b.oeb_crossing_snr_db)
        out.gaps.push_back({a.variant, b.variant, *b.oeb_crossing_snr_db - *a.oeb_crossing_snr_db});
    }
  return out;
}

std::string format_summary(const SweepSummary& summary) {
  std::ostringstream out;
  out.precision(6);
  for (const auto& v : summary.variants) {
    out << v.variant << " (" << v.rows << " rows)\n"
        << "  PEB [m]   min " << v.peb_min << "  max " << v.peb_max << '\n'
        << "  OEB [rad] min " << v.oeb_min << "  max " << v.oeb_max << '\n'
        << "  SNR at OEB = " << summary.oeb_level << ": ";
    if (v.oeb_crossing_snr_db)
      out << *v.oeb_crossing_snr_db << " dB\n";
    else
      out << "not reached\n";
  }
  for (const auto& g : summary.gaps)
    out << "gap " << g.first << " -> " << g.second << ": " << g.gap_db << " dB\n";
  return out.str();
}

}  // namespace liscrb
