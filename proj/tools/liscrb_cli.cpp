#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "liscrb/errors.hpp"
#include "liscrb/experiment.hpp"
#include "liscrb/parallel.hpp"
#include "liscrb/phase.hpp"
#include "liscrb/validation.hpp"

namespace {

using namespace liscrb;

struct RunArgs {
  std::string scenario;
  std::string sweep = "snr";
  std::string grid;
  std::string phase = "incremental";
  int n_l = 100;
  double snr_db = 5.0;
  std::optional<int> trials;
  std::uint64_t seed = 42;
  std::string fim = "numeric";
  bool benchmark = false;
  std::string out;
  std::string jacobian = "geometric";
  std::string appendix = "printed";
  std::vector<double> scatter;
};

Scenario load_or_default(const std::string& path) {
  return path.empty() ? Scenario::paper_default() : load_scenario(path);
}

std::string default_grid(SweepKind kind) {
  return kind == SweepKind::n_l ? "10,20,40,80,100,130" : "-20:20:2.5";
}

int run_validate(const RunArgs& args, AppendixReading reading) {
  const int count = args.trials.value_or(50);
  const ValidationSummary summary = validate_closed_form(count, args.seed, reading);
  if (args.out.empty()) {
    write_discrepancy_report(std::cout, summary);
  } else {
    std::ofstream out(args.out);
    if (!out) throw InvalidInputError("cannot write " + args.out);
    write_discrepancy_report(out, summary);
  }
  std::cerr << summary.scenarios << " scenarios, " << summary.cases << " subcarrier cases, " << summary.entries_checked
            << " entries checked, " << summary.discrepancies.size()
            << " entries flagged (tolerance " << summary.tolerance
            << "), max unflagged error " << summary.max_error_unflagged << '\n';
  return summary.clean() ? 0 : 1;
}

int run_command(const RunArgs& args) {
  SweepSpec spec;
  spec.kind = parse_sweep_kind(args.sweep);
  const AppendixReading reading =
      args.appendix == "corrected" ? AppendixReading::corrected : AppendixReading::as_printed;
  if (spec.kind == SweepKind::validate) return run_validate(args, reading);

  const Scenario s = load_or_default(args.scenario);
  spec.grid = parse_grid(args.grid.empty() ? default_grid(spec.kind) : args.grid);
  spec.phase = parse_phase_mode(args.phase);
  spec.trials = args.trials.value_or(spec.kind == SweepKind::phase_mode ? 100 : 1);
  spec.seed = args.seed;
  spec.fim_source = args.fim == "closed" ? FimSource::closed_form : FimSource::numeric;
  spec.benchmark = args.benchmark;
  spec.n_l = args.n_l;
  spec.snr_db = args.snr_db;
  spec.convention =
      args.jacobian == "printed" ? JacobianConvention::as_printed : JacobianConvention::geometric;
  spec.reading = reading;
  if (!args.scatter.empty()) spec.scatter = Vec2(args.scatter[0], args.scatter[1]);

  const auto rows = run_sweep(s, spec);
  if (args.out.empty()) {
    write_csv(std::cout, rows);
  } else {
    write_csv(args.out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position and orientation error bounds for LIS-aided mmWave MIMO"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a sweep and write CSV rows");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file (default: built-in paper scenario)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--sweep", run.sweep, "Sweep kind")
      ->check(CLI::IsMember({"snr", "nl", "phase", "validate"}));
  run_cmd->add_option("--grid", run.grid, "a:b:step or comma list (SNR dB, or N_L for --sweep nl)");
  run_cmd->add_option("--phase", run.phase, "LIS phase profile")
      ->check(CLI::IsMember({"incremental", "random"}));
  run_cmd->add_option("--nl", run.n_l, "LIS elements for SNR sweeps");
  run_cmd->add_option("--snr-db", run.snr_db, "SNR for N_L sweeps");
  run_cmd->add_option("--trials", run.trials,
                      "Random profiles per point (median reported), or scenarios for validate");
  run_cmd->add_option("--seed", run.seed, "Random seed");
  run_cmd->add_option("--fim", run.fim, "Channel FIM source")->check(CLI::IsMember({"closed", "numeric"}));
  run_cmd->add_flag("--benchmark", run.benchmark, "Add LoS + scatterer benchmark rows");
  run_cmd->add_option("--scatter", run.scatter, "Benchmark scatterer x y (default: LIS center)")
      ->expected(2);
  run_cmd->add_option("--jacobian", run.jacobian, "alpha column of T1")
      ->check(CLI::IsMember({"geometric", "printed"}));
  run_cmd->add_option("--appendix", run.appendix, "Closed-form entry reading")
      ->check(CLI::IsMember({"printed", "corrected"}));
  run_cmd->add_option("--out", run.out, "Output file (default: stdout)");

  std::string csv_path;
  double level = 1e-2;
  auto* summary_cmd = app.add_subcommand("summary", "Summarize a sweep CSV");
  summary_cmd->add_option("--csv", csv_path, "CSV produced by run")->required()->check(CLI::ExistingFile);
  summary_cmd->add_option("--oeb-level", level, "OEB level for the SNR crossing");

  std::string bounds_scenario, bounds_phase = "incremental", bounds_profile;
  std::uint64_t bounds_seed = 42;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print PEB, OEB and channel CRBs for one scenario");
  bounds_cmd->add_option("--scenario", bounds_scenario, "Scenario JSON file")->check(CLI::ExistingFile);
  bounds_cmd->add_option("--phase", bounds_phase)->check(CLI::IsMember({"incremental", "random"}));
  bounds_cmd->add_option("--profile", bounds_profile, "LIS phases in radians, one per line")
      ->check(CLI::ExistingFile);
  bounds_cmd->add_option("--seed", bounds_seed);

  CLI11_PARSE(app, argc, argv);
  parallel_workers() = threads;

  try {
    if (*run_cmd) return run_command(run);
    if (*summary_cmd) {
      std::cout << format_summary(summarize(read_csv(csv_path), level));
      return 0;
    }
    if (*bounds_cmd) {
      const Scenario s = load_or_default(bounds_scenario);
      CounterRng f_rng(bounds_seed, 3);
      const Precoder f = Precoder::random_phase(s.n_b, f_rng);
      const ChannelParams p = channel_params_from_geometry(s);
      PhaseProfile omega;
      if (!bounds_profile.empty()) {
        omega = load_phase_profile(bounds_profile);
      } else if (bounds_phase == "random") {
        CounterRng rng(bounds_seed, 4);
        omega = random_phase(s.n_l, rng);
      } else {
        omega = incremental_phase(s, p);
      }
      for (const auto& w : validate_angular_sector(p, s.alpha)) std::cerr << "warning: " << w << '\n';
      const BoundsReport r = bounds_report(s, omega, f);
      std::cout.precision(10);
      std::cout << "peb_m " << r.peb_m << "\noeb_rad " << r.oeb_rad << "\ncondition_number "
                << r.condition_number << '\n';
      for (const auto& [name, sd] : r.crb_std)
        std::cout << "crb_std_" << name << ' ' << sd << "  (normalized " << r.normalized_crb_std.at(name)
                  << ")\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
