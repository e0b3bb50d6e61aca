#include "shs/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shs/format.hpp"

namespace shs {

double ConditionResiduals::overall() const {
  double m = std::max({trace_D, sym_QD, sym_PD});
  for (double v : trace_S) m = std::max(m, v);
  for (double v : sym_QS) m = std::max(m, v);
  for (double v : sym_PS) m = std::max(m, v);
  return m;
}

ConditionResiduals check_conditions_at(const StochasticField& f, const PhasePoint& z) {
  const FieldJacobians J = jacobians(f, z);
  const int d = f.d, n = f.n;

  ConditionResiduals r;
  r.trace_S.assign(n, 0.0);
  r.sym_QS.assign(n, 0.0);
  r.sym_PS.assign(n, 0.0);

  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      r.trace_D = std::max(r.trace_D, std::abs(J.dQD_dQ[i][k] + J.dPD_dP[k][i]));
      r.sym_QD = std::max(r.sym_QD, std::abs(J.dQD_dP[i][k] - J.dQD_dP[k][i]));
      r.sym_PD = std::max(r.sym_PD, std::abs(J.dPD_dQ[i][k] - J.dPD_dQ[k][i]));
      for (int j = 0; j < n; ++j) {
        r.trace_S[j] = std::max(r.trace_S[j], std::abs(J.dQS_dQ[i][j][k] + J.dPS_dP[k][j][i]));
        r.sym_QS[j] = std::max(r.sym_QS[j], std::abs(J.dQS_dP[i][j][k] - J.dQS_dP[k][j][i]));
        r.sym_PS[j] = std::max(r.sym_PS[j], std::abs(J.dPS_dQ[i][j][k] - J.dPS_dQ[k][j][i]));
      }
    }
  }
  return r;
}

HelmholtzReport check_field(
    const StochasticField& f, const SamplingConfig& sampling, double tol,
    const std::function<void(const PhasePoint&, const ConditionResiduals&)>& on_point) {
  HelmholtzReport report;
  report.tol = tol;
  report.label = f.label;
  report.d = f.d;
  report.n = f.n;
  report.sampling = sampling;
  report.max_residuals.trace_S.assign(f.n, 0.0);
  report.max_residuals.sym_QS.assign(f.n, 0.0);
  report.max_residuals.sym_PS.assign(f.n, 0.0);
  report.worst_point = PhasePoint::zero(f.d);
  report.worst_residual = -1.0;

  const std::vector<PhasePoint> points = sample_points(sampling, f.d);
  for (const PhasePoint& z : points) {
    ConditionResiduals r;
    try {
      r = check_conditions_at(f, z);
    } catch (const EvalError& err) {
      report.skipped.push_back({z, err.what()});
      continue;
    }
    ++report.points_checked;
    if (on_point) on_point(z, r);

    auto fold = [](double& acc, double v) { acc = std::max(acc, v); };
    fold(report.max_residuals.trace_D, r.trace_D);
    fold(report.max_residuals.sym_QD, r.sym_QD);
    fold(report.max_residuals.sym_PD, r.sym_PD);
    for (int j = 0; j < f.n; ++j) {
      fold(report.max_residuals.trace_S[j], r.trace_S[j]);
      fold(report.max_residuals.sym_QS[j], r.sym_QS[j]);
      fold(report.max_residuals.sym_PS[j], r.sym_PS[j]);
    }
    const double here = r.overall();
    if (here > report.worst_residual) {
      report.worst_residual = here;
      report.worst_point = z;
    }
  }

  if (points.empty()) throw SamplingError("no points to check");
  if (report.skipped.size() * 10 > points.size())
    throw SamplingError("field is not well-defined on the sampling box: " +
                        std::to_string(report.skipped.size()) + " of " +
                        std::to_string(points.size()) + " points failed to evaluate");

  report.worst_residual = std::max(report.worst_residual, 0.0);
  report.hamiltonian = report.max_residuals.overall() <= tol;
  return report;
}

namespace {

std::string point_to_string(const PhasePoint& z) {
  std::string s;
  for (int i = 0; i < z.dim(); ++i) s += (i ? "," : "") + fmt(z.q[i]);
  for (int i = 0; i < z.dim(); ++i) s += "," + fmt(z.p[i]);
  return s;
}

}  // namespace

std::string report_to_text(const HelmholtzReport& r) {
  std::ostringstream out;
  out << "schema: shs.check.v1\n";
  out << "label: " << r.label << "\n";
  out << "d: " << r.d << "\n";
  out << "n: " << r.n << "\n";
  out << "tol: " << fmt(r.tol) << "\n";
  out << "sampling.radius: " << fmt(r.sampling.radius) << "\n";
  out << "sampling.count: " << r.sampling.count << "\n";
  out << "sampling.seed: " << r.sampling.seed << "\n";
  out << "sampling.user_points: " << r.sampling.user_points.size() << "\n";
  out << "points.checked: " << r.points_checked << "\n";
  out << "points.skipped: " << r.skipped.size() << "\n";
  out << "verdict: " << (r.hamiltonian ? "hamiltonian" : "not_hamiltonian") << "\n";
  auto line = [&](const std::string& name, double value, bool pass) {
    out << "residual." << name << ": " << fmt(value) << "\n";
    out << "pass." << name << ": " << (pass ? "yes" : "no") << "\n";
  };
  line("trace_D", r.max_residuals.trace_D, r.pass_trace_D());
  line("sym_QD", r.max_residuals.sym_QD, r.pass_sym_QD());
  line("sym_PD", r.max_residuals.sym_PD, r.pass_sym_PD());
  for (int j = 0; j < r.n; ++j) {
    const std::string js = "[" + std::to_string(j) + "]";
    line("trace_S" + js, r.max_residuals.trace_S[j], r.pass_trace_S(j));
    line("sym_QS" + js, r.max_residuals.sym_QS[j], r.pass_sym_QS(j));
    line("sym_PS" + js, r.max_residuals.sym_PS[j], r.pass_sym_PS(j));
  }
  out << "worst.residual: " << fmt(r.worst_residual) << "\n";
  out << "worst.point: " << point_to_string(r.worst_point) << "\n";
  for (const auto& s : r.skipped)
    out << "skipped: " << point_to_string(s.point) << " | " << s.reason << "\n";
  return out.str();
}

}  // namespace shs
