#include "shs/verify.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "shs/format.hpp"

namespace shs {

TangentFlow tangent_flow(const StochasticField& f, const PhasePoint& z0,
                         const IntegratorConfig& cfg, const BrownianPath& bp) {
  if (bp.channels != f.n) throw Error("tangent_flow: channel count mismatch");
  const int dim = 2 * f.d;
  const double h = bp.h();

  TangentFlow tf;
  tf.seed = bp.seed;
  tf.path_index = bp.path_index;
  tf.times.reserve(bp.steps + 1);
  tf.U.reserve(bp.steps + 1);
  tf.times.push_back(bp.t0);
  tf.U.push_back(Mat::identity(dim));

  PhasePoint z = z0;
  Mat u = Mat::identity(dim);
  for (int k = 0; k < bp.steps; ++k) {
    const std::span<const double> dB = bp.step_increments(k);
    if (cfg.scheme == Scheme::Heun) {
      // Discrete differentiation of the two-stage map: the predictor state
      // zb = z + phi(z) has tangent (I + A(z)) U.
      const Mat a0 = step_linearization(f, z, h, dB);
      const FieldValues v = eval_field(f, z);
      std::vector<double> zb = z.stacked();
      for (int i = 0; i < dim; ++i) {
        double acc = v.drift[i] * h;
        for (int j = 0; j < f.n; ++j) acc += v.diffusion[i][j] * dB[j];
        zb[i] += acc;
      }
      const Mat a1 = step_linearization(f, PhasePoint::from_stacked(zb), h, dB);
      const Mat ubar = u + a0 * u;
      Mat incr = a0 * u + a1 * ubar;
      incr *= 0.5;
      Mat next = u + incr;
      z = step_heun(f, z, h, dB, k);
      u = std::move(next);
    } else {
      const PhasePoint zp = step_midpoint(f, z, h, dB, cfg.newton_tol, cfg.max_iters, k);
      PhasePoint zbar = PhasePoint::zero(f.d);
      for (int i = 0; i < f.d; ++i) {
        zbar.q[i] = 0.5 * (z.q[i] + zp.q[i]);
        zbar.p[i] = 0.5 * (z.p[i] + zp.p[i]);
      }
      // Exact tangent of the implicit rule: (I - A/2) U' = (I + A/2) U.
      Mat a = step_linearization(f, zbar, h, dB);
      a *= 0.5;
      const Mat rhs = (Mat::identity(dim) + a) * u;
      u = solve(Mat::identity(dim) - a, rhs);
      z = zp;
    }
    if (!u.all_finite()) throw StepError("tangent flow diverged (non-finite)", k);
    tf.times.push_back(bp.t0 + (k + 1) * h);
    tf.U.push_back(u);
  }
  return tf;
}

double symplectic_defect(const Mat& u, const Mat& j) {
  const Mat defect = u.transposed() * j * u - j;
  return defect.max_abs();
}

double symplectic_residual(const TangentFlow& tf) {
  if (tf.U.empty()) return 0.0;
  const Mat j = symplectic_matrix(tf.U.front().rows() / 2);
  double m = 0.0;
  for (const Mat& u : tf.U) m = std::max(m, symplectic_defect(u, j));
  return m;
}

std::vector<double> energy_drift(const Hamiltonian& h, const SDEPath& path) {
  std::vector<double> drift;
  drift.reserve(path.states.size());
  const double h0 = h.h_d(path.states.front());
  for (const PhasePoint& z : path.states) drift.push_back(h.h_d(z) - h0);
  return drift;
}

namespace {

template <class F>
auto run_stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const VerifyStageError&) {
    throw;
  } catch (const StepError& e) {
    throw VerifyStageError(name, VerifyStageError::Kind::divergence, e.what());
  } catch (const Error& e) {
    throw VerifyStageError(name, VerifyStageError::Kind::input, e.what());
  } catch (const std::exception& e) {
    throw VerifyStageError(name, VerifyStageError::Kind::internal, e.what());
  }
}

}  // namespace

VerificationReport verify_field(const StochasticField& f, const VerifyConfig& cfg) {
  VerificationReport report;
  report.label = f.label;
  report.d = f.d;
  report.n = f.n;
  report.scheme = cfg.integrator.scheme;
  report.h = cfg.integrator.h;
  report.t_end = cfg.t_end;
  report.paths = cfg.paths;
  report.path_seed = cfg.path_seed;

  // Stage 1: integrability check.
  const HelmholtzReport check = run_stage("check", [&] {
    return check_field(f, cfg.sampling, cfg.tol);
  });
  report.check_pass = check.hamiltonian;
  report.check_worst_residual = check.worst_residual;

  // Stage 2: reconstruction round-trip and bracket gate. Skipped without
  // force when the check failed (the formula is off its hypothesis).
  const QuadratureRule rule = gauss_legendre(cfg.quad_nodes);
  const bool reconstruct_ok = check.hamiltonian || cfg.force;
  std::optional<Hamiltonian> hamiltonian;
  if (reconstruct_ok) {
    run_stage("roundtrip", [&] {
      report.roundtrip_residual = roundtrip_residual(f, cfg.sampling, rule);
      report.roundtrip_ran = true;
      report.roundtrip_pass = report.roundtrip_residual <= cfg.roundtrip_tol;
      return 0;
    });
    run_stage("brackets", [&] {
      auto field_copy = std::make_shared<const StochasticField>(f);
      hamiltonian.emplace(make_hamiltonian(std::move(field_copy), rule, check, cfg.force));
      double bracket_max = 0.0;
      for (const PhasePoint& z : sample_points(cfg.sampling, f.d)) {
        for (double b : poisson_brackets(*hamiltonian, z))
          bracket_max = std::max(bracket_max, std::abs(b));
      }
      report.bracket_max = bracket_max;
      return 0;
    });
    if (report.bracket_max <= cfg.bracket_gate) {
      report.energy_checked = true;
    } else {
      report.energy_skip_reason = "poisson brackets do not vanish (max " +
                                  fmt(report.bracket_max) + " > gate " +
                                  fmt(cfg.bracket_gate) + "); H_D is not a pathwise invariant";
    }
  } else {
    report.energy_skip_reason = "integrability check failed; reconstruction skipped";
  }

  // Stage 3: simulated flows.
  run_stage("flows", [&] {
    const PhasePoint z0 = cfg.z0.value_or(
        PhasePoint{std::vector<double>(f.d, 1.0), std::vector<double>(f.d, 0.0)});
    const int steps = std::max(1, static_cast<int>(std::llround(cfg.t_end / cfg.integrator.h)));
    IntegratorConfig icfg = cfg.integrator;
    icfg.h = cfg.t_end / steps;
    const Mat j = symplectic_matrix(f.d);

    for (int path = 0; path < cfg.paths; ++path) {
      const BrownianPath bp = sample_brownian(f.n, 0.0, cfg.t_end, steps, cfg.path_seed,
                                              static_cast<std::uint32_t>(path));
      const TangentFlow tf = tangent_flow(f, z0, icfg, bp);
      std::vector<double> symp;
      symp.reserve(tf.U.size());
      for (const Mat& u : tf.U) symp.push_back(symplectic_defect(u, j));
      for (double v : symp) report.symplectic_residual_max = std::max(report.symplectic_residual_max, v);

      std::vector<double> drift;
      if (hamiltonian && report.energy_checked) {
        const SDEPath sde_path = integrate(f, z0, icfg, bp);
        drift = energy_drift(*hamiltonian, sde_path);
        for (double v : drift)
          report.energy_drift_max = std::max(report.energy_drift_max, std::abs(v));
      }
      if (cfg.on_path_series)
        cfg.on_path_series(static_cast<std::uint32_t>(path), tf.times, symp, drift);
    }
    return 0;
  });

  report.symplectic_pass = report.symplectic_residual_max <= cfg.symplectic_tol;
  report.energy_pass = !report.energy_checked || report.energy_drift_max <= cfg.energy_tol;

  report.failed_stage = "none";
  if (!report.check_pass)
    report.failed_stage = "check";
  else if (!report.roundtrip_pass)
    report.failed_stage = "roundtrip";
  else if (!report.symplectic_pass)
    report.failed_stage = "symplectic";
  else if (!report.energy_pass)
    report.failed_stage = "energy";
  report.passed = report.failed_stage == "none";
  return report;
}

std::string report_to_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "schema: shs.verify.v1\n";
  out << "label: " << r.label << "\n";
  out << "d: " << r.d << "\n";
  out << "n: " << r.n << "\n";
  out << "scheme: " << scheme_name(r.scheme) << "\n";
  out << "h: " << fmt(r.h) << "\n";
  out << "T: " << fmt(r.t_end) << "\n";
  out << "paths: " << r.paths << "\n";
  out << "path_seed: " << r.path_seed << "\n";
  out << "check.verdict: " << (r.check_pass ? "hamiltonian" : "not_hamiltonian") << "\n";
  out << "check.worst_residual: " << fmt(r.check_worst_residual) << "\n";
  if (r.roundtrip_ran) {
    out << "roundtrip.residual: " << fmt(r.roundtrip_residual) << "\n";
    out << "roundtrip.pass: " << (r.roundtrip_pass ? "yes" : "no") << "\n";
  } else {
    out << "roundtrip.skipped: integrability check failed\n";
  }
  out << "brackets.max: " << fmt(r.bracket_max) << "\n";
  out << "symplectic.residual_max: " << fmt(r.symplectic_residual_max) << "\n";
  out << "symplectic.pass: " << (r.symplectic_pass ? "yes" : "no") << "\n";
  if (r.energy_checked) {
    out << "energy.drift_max: " << fmt(r.energy_drift_max) << "\n";
    out << "energy.pass: " << (r.energy_pass ? "yes" : "no") << "\n";
  } else {
    out << "energy.skipped: " << r.energy_skip_reason << "\n";
  }
  out << "failed.stage: " << r.failed_stage << "\n";
  out << "verdict: " << (r.passed ? "pass" : "fail") << "\n";
  return out.str();
}

}  // namespace shs
