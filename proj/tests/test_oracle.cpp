#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "liscrb/errors.hpp"
#include "liscrb/oracle.hpp"
#include "liscrb/phase.hpp"
#include "liscrb/validation.hpp"
#include "test_support.hpp"

using namespace liscrb;

TEST_CASE("oracle on a linear model is exact") {
  // mu = A x: FIM = SNR Re{A^H A}.
  CMat a(3, 2);
  a << cdouble(1, 2), cdouble(0, 1), cdouble(-1, 0), cdouble(2, -1), cdouble(0.5, 0.5), cdouble(3, 0);
  ParamVector pv;
  pv.names = {"x0", "x1"};
  pv.values = Eigen::Vector2d(0.3, -1.2);
  pv.steps = Eigen::Vector2d(1e-3, 1e-3);
  pv.mu_builder = [a](const Eigen::VectorXd& x, int) { return CVec(a * x.cast<cdouble>()); };
  const FimMatrix j = fim_numeric(pv, 2.5, 0);
  const Eigen::MatrixXd expected = 2.5 * (a.adjoint() * a).real();
  CHECK((j.entries - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(j.relative_asymmetry() == 0.0);
}

TEST_CASE("oracle on a quadratic model: richardson beats plain central differences") {
  // mu = [exp(j k x^3)]: derivative 3 j k x^2 exp(...), third derivative nonzero.
  ParamVector pv;
  pv.names = {"x"};
  pv.values = Eigen::VectorXd::Constant(1, 1.3);
  pv.steps = Eigen::VectorXd::Constant(1, 1e-2);
  pv.mu_builder = [](const Eigen::VectorXd& x, int) {
    CVec v(1);
    v[0] = std::polar(1.0, 2.0 * x[0] * x[0] * x[0]);
    return v;
  };
  const double exact = std::pow(6.0 * 1.3 * 1.3, 2);
  const double central = fim_numeric(pv, 1.0, 0, {Difference::central, 1.0})(0, 0);
  const double rich = fim_numeric(pv, 1.0, 0, {Difference::richardson, 1.0})(0, 0);
  CHECK(std::abs(rich - exact) < std::abs(central - exact));
  CHECK(std::abs(rich - exact) / exact < 1e-6);
}

TEST_CASE("oracle reports the parameter behind a non-finite mean") {
  ParamVector pv;
  pv.names = {"good", "bad"};
  pv.values = Eigen::Vector2d(1.0, 0.0);
  pv.steps = Eigen::Vector2d(1e-3, 1e-3);
  pv.mu_builder = [](const Eigen::VectorXd& x, int) {
    CVec v(1);
    v[0] = x[1] > 0.0 ? cdouble(std::numeric_limits<double>::quiet_NaN(), 0) : cdouble(x[0], 0);
    return v;
  };
  try {
    fim_numeric(pv, 1.0, 0);
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.parameter() == "bad");
  }
}

TEST_CASE("param vector validation") {
  ParamVector pv;
  pv.names = {"a", "a"};
  pv.values = Eigen::Vector2d(1, 2);
  pv.steps = Eigen::Vector2d(1, 1);
  pv.mu_builder = [](const Eigen::VectorXd&, int) { return CVec(1); };
  CHECK_THROWS_AS(pv.validate(), InvalidInputError);
  pv.names = {"a", "b"};
  pv.steps[1] = 0.0;
  CHECK_THROWS_AS(pv.validate(), InvalidInputError);
}

TEST_CASE("LIS oracle agrees with the test-side dense FIM") {
  const Scenario s = test::small_scenario();
  const ChannelParams p = channel_params_from_geometry(s);
  CounterRng rng(12);
  const PhaseProfile omega = random_phase(s.n_l, rng);
  const Precoder f = test::seeded_precoder(s.n_b);
  const Eigen::MatrixXd oracle = fim_channel_numeric(s, p, omega, f).entries;
  const Eigen::MatrixXd ref = test::dense_fim(s, p, omega, f);
  for (int i = 0; i < kEtaSize; ++i)
    for (int j = 0; j < kEtaSize; ++j) CHECK(test::normalized_error(oracle, ref, i, j) < 1e-6);
}

TEST_CASE("benchmark parameters") {
  const Scenario s = Scenario::paper_default();
  const Vec2 sc = s.l;
  const BenchVector v = benchmark_params(s, s.m, s.alpha, sc);
  const ChannelParams p = channel_params_from_geometry(s);
  CHECK(v[kTauBM] == p.tau_bm);
  CHECK(v[kPhiBM] == doctest::Approx(p.phi_bm));
  CHECK(v[kBTauBSM] == doctest::Approx(p.tau_bl + p.tau_lm));
  CHECK(v[kBThetaBSM] == doctest::Approx(p.theta_bl));
  CHECK(v[kBPhiBSM] == doctest::Approx(p.phi_lm));
  CHECK(v[kBRhoBSM] == doctest::Approx(p.rho_bl * p.rho_lm));
  CHECK_THROWS_AS(benchmark_params(s, s.m, s.alpha, s.m), DegenerateGeometryError);
}

TEST_CASE("benchmark FIM against a dense two-path oracle") {
  Scenario s = test::small_scenario();
  const Vec2 sc(50.0, 70.0);
  const Precoder f = test::seeded_precoder(s.n_b);
  const BenchVector v = benchmark_params(s, s.m, s.alpha, sc);
  const Eigen::MatrixXd fim = benchmark_fim(s, sc, f).entries;

  // Independent mean: rank-one outer products, dense.
  auto mean = [&](const BenchVector& x, int n) {
    const double d = s.d_spacing_m, lambda = s.wavelength();
    CMat h = x[kRhoBM] * delay_phasor(x[kTauBM], n, s) * steering_vector(x[kPhiBM], s.n_m, d, lambda) *
             steering_vector(x[kThetaBM], s.n_b, d, lambda).adjoint();
    h += x[kBRhoBSM] * delay_phasor(x[kBTauBSM], n, s) * steering_vector(x[kBPhiBSM], s.n_m, d, lambda) *
         steering_vector(x[kBThetaBSM], s.n_b, d, lambda).adjoint();
    return CVec(std::sqrt(s.power) * h * f.at(n));
  };
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(kBenchSize, kBenchSize);
  for (int n : s.subcarriers()) {
    CMat jac(s.n_m, kBenchSize);
    for (int i = 0; i < kBenchSize; ++i) {
      const double h = (i == kTauBM || i == kBTauBSM) ? 1e-4 / s.bandwidth_hz : 1e-5 * (1 + std::abs(v[i]));
      BenchVector up = v, dn = v;
      up[i] += h;
      dn[i] -= h;
      jac.col(i) = (mean(up, n) - mean(dn, n)) / (2 * h);
    }
    ref += (jac.adjoint() * jac).real() / s.noise_var;
  }
  for (int i = 0; i < kBenchSize; ++i)
    for (int j = 0; j < kBenchSize; ++j) CHECK(test::normalized_error(fim, ref, i, j) < 1e-6);
}

TEST_CASE("benchmark scatter gain override") {
  const Scenario s = test::small_scenario();
  const Precoder f = test::seeded_precoder(s.n_b);
  const Eigen::MatrixXd a = benchmark_fim(s, s.l, f).entries;
  const Eigen::MatrixXd b = benchmark_fim(s, s.l, f, 0.0).entries;
  CHECK(b.row(kBTauBSM).isZero(0.0));
  CHECK(b(kBRhoBSM, kBRhoBSM) > 0.0);
  CHECK(a(kTauBM, kTauBM) == doctest::Approx(b(kTauBM, kTauBM)));
}

TEST_CASE("benchmark jacobian") {
  const Scenario s = Scenario::paper_default();
  const auto t = benchmark_jacobian(s, s.l);
  const Jacobian73 t1 = jacobian_t1(s);
  CHECK(t(kTauBM, 0) == doctest::Approx(t1(kTauBM, 0)).epsilon(1e-6));
  CHECK(t(kPhiBM, 2) == doctest::Approx(-1.0));
  CHECK(t(kBThetaBSM, 0) == doctest::Approx(0.0));
}

TEST_CASE("validation report") {
  const ValidationSummary printed = validate_closed_form(6, 1, AppendixReading::as_printed);
  REQUIRE(printed.discrepancies.size() == 1);
  const auto& rec = printed.discrepancies.front();
  CHECK(rec.entry == "psi(tau_bm,theta_bm)");
  std::ostringstream out;
  write_discrepancy_report(out, printed);
  CHECK(out.str().find("\"adopted\":\"oracle\"") != std::string::npos);
  const ValidationSummary corrected = validate_closed_form(6, 1, AppendixReading::corrected);
  CHECK(corrected.clean());
  CHECK(corrected.max_error_unflagged < 1e-6);
  CHECK(corrected.entries_checked == 28 * corrected.cases);
}
