#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shs/field.hpp"
#include "shs/sampling.hpp"

namespace shs {

// Max-norm residuals of the four integrability condition groups at one
// point. Drift part: the trace condition dX_QD/dQ + (dX_PD/dP)^T = 0 and
// symmetry of dX_QD/dP and dX_PD/dQ. Diffusion part: the same three
// residuals per noise channel, with the tensor transpose that swaps the
// component and derivative indices at fixed channel. A field with n = 0
// carries only the three deterministic residuals (the classical case).
struct ConditionResiduals {
  double trace_D = 0.0;
  double sym_QD = 0.0;
  double sym_PD = 0.0;
  std::vector<double> trace_S;  // per channel j
  std::vector<double> sym_QS;
  std::vector<double> sym_PS;

  // Largest residual across every condition group.
  double overall() const;
};

struct SkippedPoint {
  PhasePoint point;
  std::string reason;
};

// Verdict and evidence from sampled checking of the integrability
// conditions. hamiltonian holds iff every max residual is <= tol.
struct HelmholtzReport {
  bool hamiltonian = false;
  double tol = 0.0;
  int points_checked = 0;
  ConditionResiduals max_residuals;  // pointwise maxima over all points
  PhasePoint worst_point;            // attains the overall max residual
  double worst_residual = 0.0;
  std::vector<SkippedPoint> skipped;

  // Echo of the inputs, for serialization.
  std::string label;
  int d = 0;
  int n = 0;
  SamplingConfig sampling;

  // Per-condition verdicts.
  bool pass_trace_D() const { return max_residuals.trace_D <= tol; }
  bool pass_sym_QD() const { return max_residuals.sym_QD <= tol; }
  bool pass_sym_PD() const { return max_residuals.sym_PD <= tol; }
  bool pass_trace_S(int j) const { return max_residuals.trace_S[j] <= tol; }
  bool pass_sym_QS(int j) const { return max_residuals.sym_QS[j] <= tol; }
  bool pass_sym_PS(int j) const { return max_residuals.sym_PS[j] <= tol; }
};

// Evaluates the condition residuals at a single point from exact
// dual-number Jacobians.
ConditionResiduals check_conditions_at(const StochasticField& f, const PhasePoint& z);

// Sampled verdict over the box [-R,R]^{2d} plus any user points. Points
// where the field fails to evaluate are recorded and skipped; if more than
// 10% of points fail, the whole check throws SamplingError. `on_point`,
// when set, receives every successfully checked point (for residual CSV
// export). Deterministic: identical seeds give identical reports.
HelmholtzReport check_field(
    const StochasticField& f, const SamplingConfig& sampling, double tol = 1e-9,
    const std::function<void(const PhasePoint&, const ConditionResiduals&)>& on_point = {});

// Key-value report document (schema shs.check.v1, see docs/formats.md).
std::string report_to_text(const HelmholtzReport& report);

}  // namespace shs
