#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shs/linalg.hpp"
#include "shs/reconstruct.hpp"
#include "shs/sde.hpp"

namespace shs {

// Jacobian U(t) of the flow map with respect to the initial condition,
// propagated by the variational dynamics dU = (dmu/dz) U dt + sum_j
// (dsigma_j/dz) U o dB_j discretized with the same scheme and the same
// noise as the base path. U(t0) = identity.
struct TangentFlow {
  std::vector<double> times;
  std::vector<Mat> U;
  std::uint64_t seed = 0;
  std::uint32_t path_index = 0;
};

TangentFlow tangent_flow(const StochasticField& f, const PhasePoint& z0,
                         const IntegratorConfig& cfg, const BrownianPath& bp);

// ||U^T J U - J||max: zero exactly when U is symplectic.
double symplectic_defect(const Mat& u, const Mat& j);

// Max of the defect over the saved times of the flow.
double symplectic_residual(const TangentFlow& tf);

// Series H_D(Z_t) - H_D(Z_0) along a simulated path.
std::vector<double> energy_drift(const Hamiltonian& h, const SDEPath& path);

// A verification stage failed with an error (not a negative verdict).
class VerifyStageError : public Error {
public:
  enum class Kind { input, divergence, internal };

  VerifyStageError(std::string stage, Kind kind, const std::string& message)
      : Error("stage=" + stage + ": " + message), stage_(std::move(stage)), kind_(kind) {}

  const std::string& stage() const { return stage_; }
  Kind kind() const { return kind_; }

private:
  std::string stage_;
  Kind kind_;
};

struct VerifyConfig {
  SamplingConfig sampling;
  double tol = 1e-9;  // integrability check tolerance
  int quad_nodes = 20;
  IntegratorConfig integrator;
  double t_end = 1.0;
  int paths = 100;
  std::uint64_t path_seed = 0;
  std::optional<PhasePoint> z0;  // default (1,..,1, 0,..,0)

  // Assertion thresholds. Engineering choices, recorded in the report; the
  // defaults suit the midpoint scheme at h = 1e-3.
  double roundtrip_tol = 1e-8;
  double symplectic_tol = 1e-8;
  double energy_tol = 1e-8;
  double bracket_gate = 1e-9;  // energy assertion only when brackets vanish

  bool force = false;  // run reconstruction stages despite a failed check

  // Optional per-path series sink (CSV export): times, symplectic defect
  // and H_D drift at each saved time. Drift series is empty when the
  // energy stage did not run.
  std::function<void(std::uint32_t path, const std::vector<double>& times,
                     const std::vector<double>& symplectic,
                     const std::vector<double>& drift)>
      on_path_series;
};

struct VerificationReport {
  std::string label;
  int d = 0, n = 0;
  Scheme scheme = Scheme::Midpoint;
  double h = 0.0;
  double t_end = 0.0;
  int paths = 0;
  std::uint64_t path_seed = 0;

  bool check_pass = false;
  double check_worst_residual = 0.0;

  bool roundtrip_ran = false;
  double roundtrip_residual = 0.0;
  bool roundtrip_pass = false;

  double bracket_max = 0.0;
  bool energy_checked = false;  // false: skipped (failed check or bracket gate)
  std::string energy_skip_reason;

  double symplectic_residual_max = 0.0;
  bool symplectic_pass = false;

  double energy_drift_max = 0.0;
  bool energy_pass = false;

  bool passed = false;
  std::string failed_stage;  // "none" when passed
};

// Runs the full pipeline: integrability check, reconstruction round-trip,
// Poisson-bracket gate, and per-path tangent flows / energy drift. A failed
// check skips the reconstruction stages (unless force) but still runs the
// tangent flows, so the symplectic defect of a non-Hamiltonian flow is
// visible in the report. Errors abort with the stage identified.
VerificationReport verify_field(const StochasticField& f, const VerifyConfig& cfg);

// Key-value report document (schema shs.verify.v1, see docs/formats.md).
std::string report_to_text(const VerificationReport& report);

}  // namespace shs
