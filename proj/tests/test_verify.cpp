#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "shs/verify.hpp"
#include "test_support.hpp"

using namespace shs;

TEST_CASE("symplectic_matrix: structure self-check") {
  for (int d : {1, 2, 3}) {
    const Mat j = symplectic_matrix(d);
    CHECK(j.rows() == 2 * d);
    const Mat jj = j * j;
    for (int r = 0; r < 2 * d; ++r)
      for (int c = 0; c < 2 * d; ++c) CHECK(jj(r, c) == (r == c ? -1.0 : 0.0));
  }
}

TEST_CASE("symplectic_defect: hand values") {
  const Mat j = symplectic_matrix(1);
  CHECK(symplectic_defect(Mat::identity(2), j) == 0.0);

  Mat scaling(2, 2);
  scaling(0, 0) = 2.0;
  scaling(1, 1) = 0.5;
  CHECK(symplectic_defect(scaling, j) == 0.0);  // det 1 in 2x2 is symplectic

  Mat stretch(2, 2);
  stretch(0, 0) = 2.0;
  stretch(1, 1) = 2.0;
  CHECK(symplectic_defect(stretch, j) == 3.0);  // U^T J U = 4J
}

TEST_CASE("tangent_flow: zero field keeps U = I") {
  const StochasticField zero = parse_field("dim 1\nnoise 1\nQD[0]=0\nPD[0]=0\n", "mem", "zero");
  const BrownianPath bp = sample_brownian(1, 0.0, 1.0, 50, 1, 0);
  IntegratorConfig cfg;
  cfg.h = bp.h();
  for (Scheme s : {Scheme::Heun, Scheme::Midpoint}) {
    cfg.scheme = s;
    const TangentFlow tf = tangent_flow(zero, {{1.0}, {0.0}}, cfg, bp);
    REQUIRE(tf.U.size() == 51);
    for (const Mat& u : tf.U) {
      CHECK(u(0, 0) == 1.0);
      CHECK(u(0, 1) == 0.0);
      CHECK(u(1, 0) == 0.0);
      CHECK(u(1, 1) == 1.0);
    }
  }
}

TEST_CASE("tangent_flow: deterministic harmonic midpoint flow stays orthogonal") {
  const StochasticField rot = load_field(testsup::field_path("harmonic.field"));
  BrownianPath grid;
  grid.t0 = 0.0;
  grid.t1 = 1.0;
  grid.steps = 1000;
  grid.channels = 0;
  IntegratorConfig cfg;
  cfg.h = grid.h();
  const TangentFlow tf = tangent_flow(rot, {{1.0}, {0.0}}, cfg, grid);
  for (std::size_t k = 0; k < tf.U.size(); k += 100) {
    const Mat utu = tf.U[k].transposed() * tf.U[k];
    CHECK(std::abs(utu(0, 0) - 1.0) <= 1e-10);
    CHECK(std::abs(utu(1, 1) - 1.0) <= 1e-10);
    CHECK(std::abs(utu(0, 1)) <= 1e-10);
  }
}

TEST_CASE("tangent_flow: kubo midpoint symplectic to solver tolerance") {
  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  const BrownianPath bp = sample_brownian(1, 0.0, 1.0, 1000, 3, 0);
  IntegratorConfig cfg;
  cfg.h = bp.h();
  const TangentFlow tf = tangent_flow(kubo, {{1.0}, {0.0}}, cfg, bp);
  CHECK(symplectic_residual(tf) <= 1000 * 1e-12 + 1e-10);
}

TEST_CASE("tangent_flow: heun on the harmonic oscillator drifts at O(h)") {
  const StochasticField rot = load_field(testsup::field_path("harmonic.field"));
  BrownianPath grid;
  grid.t0 = 0.0;
  grid.t1 = 1.0;
  grid.steps = 1000;
  grid.channels = 0;
  IntegratorConfig cfg;
  cfg.scheme = Scheme::Heun;
  cfg.h = grid.h();
  const double heun_residual = symplectic_residual(tangent_flow(rot, {{1.0}, {0.0}}, cfg, grid));
  CHECK(heun_residual > 1e-12);   // not symplectic
  CHECK(heun_residual < 1e-2);    // but consistent
  cfg.scheme = Scheme::Midpoint;
  CHECK(symplectic_residual(tangent_flow(rot, {{1.0}, {0.0}}, cfg, grid)) <= 1e-10);
}

TEST_CASE("tangent_flow: linear systems from random quadratic pairs") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = testsup::random_poly_hamiltonian(rng, 2, 2, 2);
    const StochasticField f = field_from_hamiltonian(h.h_d, h.h_s, h.d);
    const int steps = 1000;
    const BrownianPath bp = sample_brownian(f.n, 0.0, 1.0, steps, 100 + trial, 0);
    IntegratorConfig cfg;
    cfg.h = bp.h();
    const TangentFlow tf = tangent_flow(f, PhasePoint::zero(f.d), cfg, bp);
    CHECK(symplectic_residual(tf) <= steps * (1e-12 + 1e-14) * 10);
  }
}

TEST_CASE("energy_drift: kubo midpoint conserves the reconstructed H_D") {
  const auto kubo =
      std::make_shared<const StochasticField>(load_field(testsup::field_path("kubo.field")));
  const Hamiltonian h(kubo, gauss_legendre(20));
  const BrownianPath bp = sample_brownian(1, 0.0, 1.0, 1000, 21, 0);
  IntegratorConfig cfg;
  cfg.h = bp.h();
  const SDEPath path = integrate(*kubo, {{1.0}, {0.0}}, cfg, bp);
  const auto drift = energy_drift(h, path);
  CHECK(drift.front() == 0.0);
  double worst = 0.0;
  for (double v : drift) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-8);

  // Heun drifts, and the drift shrinks with h on the same noise
  cfg.scheme = Scheme::Heun;
  const SDEPath heun_path = integrate(*kubo, {{1.0}, {0.0}}, cfg, bp);
  double heun_worst = 0.0;
  for (double v : energy_drift(h, heun_path)) heun_worst = std::max(heun_worst, std::abs(v));
  CHECK(heun_worst > worst);

  const BrownianPath fine = sample_brownian(1, 0.0, 1.0, 2000, 21, 0);
  IntegratorConfig fine_cfg = cfg;
  fine_cfg.h = fine.h();
  // same underlying noise: bp must be the pairwise coarsening of fine
  const BrownianPath coarse = coarsen_pairwise(fine);
  IntegratorConfig coarse_cfg = cfg;
  coarse_cfg.h = coarse.h();
  double drift_coarse = 0.0, drift_fine = 0.0;
  for (double v : energy_drift(h, integrate(*kubo, {{1.0}, {0.0}}, coarse_cfg, coarse)))
    drift_coarse = std::max(drift_coarse, std::abs(v));
  for (double v : energy_drift(h, integrate(*kubo, {{1.0}, {0.0}}, fine_cfg, fine)))
    drift_fine = std::max(drift_fine, std::abs(v));
  CHECK(drift_coarse > drift_fine);
}

TEST_CASE("energy_drift: no trend for the pathwise invariant under midpoint") {
  const auto kubo =
      std::make_shared<const StochasticField>(load_field(testsup::field_path("kubo.field")));
  const Hamiltonian h(kubo, gauss_legendre(20));
  double max_t = 0.0, max_2t = 0.0;
  for (int path = 0; path < 32; ++path) {
    const BrownianPath bp = sample_brownian(1, 0.0, 2.0, 2000, 33, path);
    IntegratorConfig cfg;
    cfg.h = bp.h();
    const SDEPath traj = integrate(*kubo, {{1.0}, {0.0}}, cfg, bp);
    const auto drift = energy_drift(h, traj);
    for (std::size_t k = 0; k <= 1000; ++k) max_t = std::max(max_t, std::abs(drift[k]));
    for (std::size_t k = 0; k < drift.size(); ++k) max_2t = std::max(max_2t, std::abs(drift[k]));
  }
  CHECK(max_2t <= 2.5 * max_t + 1e-13);
}

TEST_CASE("verify_field: kubo passes end to end") {
  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  VerifyConfig cfg;
  cfg.paths = 10;
  const VerificationReport report = verify_field(kubo, cfg);
  CHECK(report.passed);
  CHECK(report.failed_stage == "none");
  CHECK(report.check_pass);
  CHECK(report.roundtrip_pass);
  CHECK(report.energy_checked);
  CHECK(report.symplectic_residual_max <= 1e-8);
  CHECK(report.energy_drift_max <= 1e-8);
  CHECK(report.bracket_max <= 1e-9);
}

TEST_CASE("verify_field: trace violator fails at check but reports flow defects") {
  const StochasticField broken = load_field(testsup::field_path("kubo_broken.field"));
  VerifyConfig cfg;
  cfg.paths = 10;
  const VerificationReport report = verify_field(broken, cfg);
  CHECK(!report.passed);
  CHECK(report.failed_stage == "check");
  CHECK(!report.roundtrip_ran);
  CHECK(!report.energy_checked);
  // Liouville, contrapositive: the non-Hamiltonian flow is visibly
  // non-symplectic at T = 1
  CHECK(report.symplectic_residual_max >= 1e-3);
}

TEST_CASE("verify_field: noncommuting pair skips the energy assertion and passes") {
  const StochasticField f = load_field(testsup::field_path("noncommuting.field"));
  VerifyConfig cfg;
  cfg.paths = 5;
  const VerificationReport report = verify_field(f, cfg);
  CHECK(report.passed);
  CHECK(report.check_pass);
  CHECK(!report.energy_checked);
  CHECK(report.bracket_max > 0.1);  // {H_D, H_S} = -p, |p| reaches past 0.1 on the box
  CHECK(report.energy_skip_reason.find("brackets") != std::string::npos);
}

TEST_CASE("verify_field: non-symplectic flows on >= 90% of paths for a broken field") {
  const StochasticField broken = load_field(testsup::field_path("kubo_broken.field"));
  IntegratorConfig cfg;
  cfg.h = 1e-3;
  int bad = 0;
  const int paths = 8;
  for (int path = 0; path < paths; ++path) {
    const BrownianPath bp = sample_brownian(1, 0.0, 1.0, 1000, 77, path);
    const TangentFlow tf = tangent_flow(broken, {{1.0}, {0.0}}, cfg, bp);
    if (symplectic_residual(tf) >= 1e-3) ++bad;
  }
  CHECK(bad >= (9 * paths + 9) / 10);
}

TEST_CASE("verify report text carries the stage outcome") {
  const StochasticField f = load_field(testsup::field_path("noncommuting.field"));
  VerifyConfig cfg;
  cfg.paths = 2;
  const std::string text = report_to_text(verify_field(f, cfg));
  CHECK(text.find("schema: shs.verify.v1") != std::string::npos);
  CHECK(text.find("energy.skipped:") != std::string::npos);
  CHECK(text.find("verdict: pass") != std::string::npos);
}
