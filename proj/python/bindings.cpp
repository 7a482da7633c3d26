#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "liscrb/errors.hpp"
#include "liscrb/estimator.hpp"
#include "liscrb/experiment.hpp"
#include "liscrb/phase.hpp"
#include "liscrb/validation.hpp"

namespace py = pybind11;
using namespace liscrb;

namespace {

FimSource parse_source(const std::string& s) {
  if (s == "numeric") return FimSource::numeric;
  if (s == "closed" || s == "closed_form") return FimSource::closed_form;
  throw InvalidInputError("fim source must be 'numeric' or 'closed', got '" + s + "'");
}

AppendixReading parse_reading(const std::string& s) {
  if (s == "printed") return AppendixReading::as_printed;
  if (s == "corrected") return AppendixReading::corrected;
  throw InvalidInputError("appendix reading must be 'printed' or 'corrected', got '" + s + "'");
}

Precoder precoder_for(const Scenario& s, std::uint64_t seed) {
  CounterRng rng(seed, 3);
  return Precoder::random_phase(s.n_b, rng);
}

py::dict report_dict(const BoundsReport& r) {
  py::dict d;
  d["peb_m"] = r.peb_m;
  d["oeb_rad"] = r.oeb_rad;
  d["crb_std"] = r.crb_std;
  d["normalized_crb_std"] = r.normalized_crb_std;
  d["condition_number"] = r.condition_number;
  d["fim_source"] = to_string(r.fim_source);
  return d;
}

BoundsOptions options_for(const std::string& source, const std::string& appendix) {
  BoundsOptions o;
  o.source = parse_source(source);
  o.reading = parse_reading(appendix);
  return o;
}

}  // namespace

PYBIND11_MODULE(_liscrb, m) {
  m.doc() = "Cramer-Rao bounds for LIS-aided mmWave MIMO positioning";

  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", PyExc_ValueError);
  py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<OracleError>(m, "OracleError", PyExc_ArithmeticError);
  py::register_exception<SingularFimError>(m, "SingularFimError", PyExc_ArithmeticError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&Scenario::paper_default))
      .def_static("paper_default", &Scenario::paper_default)
      .def_static("from_json", &parse_scenario)
      .def_static("load", [](const std::string& path) { return load_scenario(path); })
      .def("to_json", &scenario_to_json)
      .def_readwrite("b", &Scenario::b)
      .def_readwrite("l", &Scenario::l)
      .def_readwrite("m", &Scenario::m)
      .def_readwrite("alpha", &Scenario::alpha)
      .def_readwrite("mu", &Scenario::mu)
      .def_readwrite("n_b", &Scenario::n_b)
      .def_readwrite("n_m", &Scenario::n_m)
      .def_readwrite("n_l", &Scenario::n_l)
      .def_readwrite("n_sub", &Scenario::n_sub)
      .def_readwrite("bandwidth_hz", &Scenario::bandwidth_hz)
      .def_readwrite("fc_hz", &Scenario::fc_hz)
      .def_readwrite("d_spacing_m", &Scenario::d_spacing_m)
      .def_readwrite("power", &Scenario::power)
      .def_readwrite("noise_var", &Scenario::noise_var)
      .def_readwrite("c", &Scenario::c)
      .def("wavelength", &Scenario::wavelength)
      .def("snr_db", &Scenario::snr_db)
      .def("with_snr_db", &Scenario::with_snr_db)
      .def("with_n_l", &Scenario::with_n_l)
      .def("validate", &Scenario::validate);

  m.attr("ETA_NAMES") = std::vector<std::string>(kEtaNames.begin(), kEtaNames.end());

  m.def("channel_params", [](const Scenario& s) { return EtaVector(channel_params_from_geometry(s).eta()); },
        "Unknown channel parameters eta in ETA_NAMES order.");
  m.def("max_far_field_elements", &max_far_field_elements);
  m.def("far_field_bound", &far_field_bound);
  m.def(
      "jacobian_t1",
      [](const Scenario& s, const std::string& convention) {
        return Eigen::MatrixXd(jacobian_t1(
            s, convention == "printed" ? JacobianConvention::as_printed : JacobianConvention::geometric));
      },
      py::arg("scenario"), py::arg("convention") = "geometric");

  m.def(
      "incremental_phase",
      [](const Scenario& s) { return incremental_phase(s, channel_params_from_geometry(s)).omegas; },
      py::arg("scenario"));
  m.def(
      "random_phase",
      [](int n_l, std::uint64_t seed) {
        CounterRng rng(seed, 4);
        return random_phase(n_l, rng).omegas;
      },
      py::arg("n_l"), py::arg("seed") = 42);
  m.def(
      "beta_gain",
      [](const Scenario& s, const Eigen::VectorXd& omegas, std::uint64_t seed) {
        const BetaGain g =
            beta_gain(s, channel_params_from_geometry(s), PhaseProfile{omegas}, precoder_for(s, seed));
        return py::make_tuple(g.abs_beta, g.upper_bound);
      },
      py::arg("scenario"), py::arg("omegas"), py::arg("seed") = 42);

  m.def(
      "fim_channel",
      [](const Scenario& s, const Eigen::VectorXd& omegas, const std::string& source,
         const std::string& appendix, std::uint64_t seed) {
        return fim_channel(s, channel_params_from_geometry(s), PhaseProfile{omegas}, precoder_for(s, seed),
                           options_for(source, appendix))
            .entries;
      },
      py::arg("scenario"), py::arg("omegas"), py::arg("source") = "numeric", py::arg("appendix") = "printed",
      py::arg("seed") = 42, "7x7 channel FIM summed over subcarriers; precoder drawn from `seed`.");

  m.def(
      "bounds_report",
      [](const Scenario& s, const Eigen::VectorXd& omegas, const std::string& source,
         const std::string& appendix, std::uint64_t seed) {
        return report_dict(
            bounds_report(s, PhaseProfile{omegas}, precoder_for(s, seed), options_for(source, appendix)));
      },
      py::arg("scenario"), py::arg("omegas"), py::arg("source") = "numeric", py::arg("appendix") = "printed",
      py::arg("seed") = 42);

  m.def(
      "benchmark_bounds",
      [](const Scenario& s, const Vec2& scatter, std::uint64_t seed) {
        return report_dict(benchmark_bounds(s, scatter, precoder_for(s, seed)));
      },
      py::arg("scenario"), py::arg("scatter"), py::arg("seed") = 42);

  m.def(
      "monte_carlo_rmse",
      [](const Scenario& s, const Eigen::VectorXd& omegas, int trials, std::uint64_t seed) {
        MonteCarloOptions o;
        o.trials = trials;
        o.seed = seed;
        const MonteCarloResult r = monte_carlo_rmse(s, PhaseProfile{omegas}, precoder_for(s, seed), o);
        py::dict d;
        d["rmse_pos"] = r.rmse_pos;
        d["rmse_alpha"] = r.rmse_alpha;
        d["peb"] = r.peb;
        d["oeb"] = r.oeb;
        d["nonconverged"] = r.nonconverged;
        return d;
      },
      py::arg("scenario"), py::arg("omegas"), py::arg("trials") = 1000, py::arg("seed") = 42);

  m.def(
      "validate_closed_form",
      [](int scenarios, std::uint64_t seed, const std::string& appendix) {
        const ValidationSummary v = validate_closed_form(scenarios, seed, parse_reading(appendix));
        std::ostringstream report;
        write_discrepancy_report(report, v);
        py::dict d;
        d["clean"] = v.clean();
        d["cases"] = v.cases;
        d["entries_checked"] = v.entries_checked;
        d["max_error_unflagged"] = v.max_error_unflagged;
        d["report"] = report.str();
        return d;
      },
      py::arg("scenarios") = 50, py::arg("seed") = 42, py::arg("appendix") = "printed");

  m.def(
      "run_sweep",
      [](const Scenario& s, const std::string& kind, const std::vector<double>& grid, const std::string& phase,
         int trials, std::uint64_t seed, const std::string& source, bool benchmark, int n_l, double snr_db) {
        SweepSpec spec;
        spec.kind = parse_sweep_kind(kind);
        spec.grid = grid;
        spec.phase = parse_phase_mode(phase);
        spec.trials = trials;
        spec.seed = seed;
        spec.fim_source = parse_source(source);
        spec.benchmark = benchmark;
        spec.n_l = n_l;
        spec.snr_db = snr_db;
        std::ostringstream out;
        write_csv(out, run_sweep(s, spec));
        return out.str();
      },
      py::arg("scenario"), py::arg("kind"), py::arg("grid"), py::arg("phase") = "incremental",
      py::arg("trials") = 1, py::arg("seed") = 42, py::arg("source") = "numeric", py::arg("benchmark") = false,
      py::arg("n_l") = 100, py::arg("snr_db") = 5.0, "Runs a sweep and returns the CSV text.");
}
