#include <doctest.h>

#include <cmath>
#include <random>

#include "shs/helmholtz.hpp"
#include "test_support.hpp"

using namespace shs;

TEST_CASE("check_conditions_at: generated fields satisfy all groups") {
  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  const ConditionResiduals r = check_conditions_at(kubo, {{1.0}, {2.0}});
  CHECK(r.trace_D <= 1e-15);
  CHECK(r.sym_QD <= 1e-15);
  CHECK(r.sym_PD <= 1e-15);
  REQUIRE(r.trace_S.size() == 1);
  CHECK(r.trace_S[0] <= 1e-15);
  CHECK(r.sym_QS[0] <= 1e-15);
  CHECK(r.sym_PS[0] <= 1e-15);
}

TEST_CASE("check_conditions_at: trace violation is the derivative it should be") {
  const StochasticField f = parse_field("dim 1\nQD[0]=q0\nPD[0]=0\n", "mem", "broken");
  const ConditionResiduals r = check_conditions_at(f, {{0.3}, {-0.2}});
  CHECK(r.trace_D == 1.0);
  CHECK(r.sym_QD == 0.0);
  CHECK(r.sym_PD == 0.0);
  CHECK(r.trace_S.empty());
}

TEST_CASE("check_conditions_at: symmetric cross-couplings pass") {
  const StochasticField f =
      parse_field("dim 2\nQD[0]=p1\nQD[1]=p0\nPD[0]=0\nPD[1]=0\n", "mem", "swap");
  const ConditionResiduals r = check_conditions_at(f, {{0.1, 0.7}, {0.4, -0.9}});
  CHECK(r.sym_QD == 0.0);  // [[0,1],[1,0]] is symmetric
  CHECK(r.trace_D == 0.0);
}

TEST_CASE("check_field: kubo verdict at defaults") {
  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  const HelmholtzReport report = check_field(kubo, SamplingConfig{});
  CHECK(report.hamiltonian);
  CHECK(report.points_checked == 128);
  CHECK(report.skipped.empty());
  CHECK(report.max_residuals.overall() <= 1e-12);
  CHECK(report.tol == 1e-9);
}

TEST_CASE("check_field: quadratic drift term breaks the trace condition near the corner") {
  const StochasticField f = parse_field("dim 1\nQD[0]=p0+q0^2\nPD[0]=-q0\n", "mem", "bent");
  const HelmholtzReport report = check_field(f, SamplingConfig{});
  CHECK(!report.hamiltonian);
  // residual is exactly |2 q0|, so the max is close to 2R and at least R
  CHECK(report.max_residuals.trace_D > 2.0);
  CHECK(report.max_residuals.trace_D <= 4.0);
  CHECK(std::abs(report.worst_point.q[0]) > 1.0);
  CHECK(report.max_residuals.sym_QD == 0.0);
}

TEST_CASE("check_field: n=0 reduction equals the classical checker") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = testsup::random_poly_hamiltonian(rng, 3, 0, 4);
    const StochasticField f = field_from_hamiltonian(h.h_d, h.h_s, h.d);
    for (const PhasePoint& z : sample_points(SamplingConfig{2.0, 16, 9}, f.d)) {
      const ConditionResiduals r = check_conditions_at(f, z);
      const testsup::ClassicalResiduals c = testsup::classical_conditions_at(f, z);
      CHECK(std::abs(r.trace_D - c.trace) <= 1e-14);
      CHECK(std::abs(r.sym_QD - c.sym_q) <= 1e-14);
      CHECK(std::abs(r.sym_PD - c.sym_p) <= 1e-14);
      CHECK(r.trace_S.empty());
    }
  }
}

TEST_CASE("check_field: soundness and sensitivity on generated systems") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = testsup::random_poly_hamiltonian(rng);
    const StochasticField f = field_from_hamiltonian(h.h_d, h.h_s, h.d);
    SamplingConfig sampling;
    sampling.seed = trial;
    const HelmholtzReport good = check_field(f, sampling);
    CHECK(good.hamiltonian);
    CHECK(good.max_residuals.overall() <= 1e-9);

    const StochasticField broken = testsup::perturb_qd0(f, 1e-3);
    const HelmholtzReport bad = check_field(broken, sampling);
    CHECK(!bad.hamiltonian);
    CHECK(bad.max_residuals.trace_D >= 1e-3);
  }
}

TEST_CASE("check_field: determinism") {
  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  SamplingConfig sampling;
  sampling.seed = 123;
  const std::string r1 = report_to_text(check_field(kubo, sampling));
  const std::string r2 = report_to_text(check_field(kubo, sampling));
  CHECK(r1 == r2);
}

TEST_CASE("check_field: user points participate") {
  const StochasticField f = parse_field("dim 1\nQD[0]=p0+q0^2\nPD[0]=-q0\n", "mem", "bent");
  SamplingConfig sampling;
  sampling.count = 0;
  sampling.user_points = {{{3.0}, {0.0}}};  // outside the default box
  const HelmholtzReport report = check_field(f, sampling);
  CHECK(report.points_checked == 1);
  CHECK(report.max_residuals.trace_D == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("check_field: ill-defined fields") {
  // log(q0) fails on half the box: the whole check errors
  const StochasticField f = parse_field("dim 1\nQD[0]=log(q0)\nPD[0]=0\n", "mem", "halfbad");
  CHECK_THROWS_AS(check_field(f, SamplingConfig{}), SamplingError);

  // a field failing on a thin sliver only: points are skipped, check stands
  const StochasticField g =
      parse_field("dim 1\nQD[0]=p0+log(q0+1.9)\nPD[0]=-q0\n", "mem", "sliver");
  const HelmholtzReport report = check_field(g, SamplingConfig{});
  CHECK(report.points_checked + static_cast<int>(report.skipped.size()) == 128);
  CHECK(report.skipped.size() * 10 <= 128);
}
