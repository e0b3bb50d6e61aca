#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "shs/brownian.hpp"
#include "shs/field.hpp"
#include "shs/linalg.hpp"

namespace shs {

// Stratonovich-consistent schemes. Heun is the explicit two-stage
// predictor-corrector; midpoint is the implicit symplectic rule.
enum class Scheme { Heun, Midpoint };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

struct IntegratorConfig {
  Scheme scheme = Scheme::Midpoint;
  double h = 1e-3;
  double newton_tol = 1e-12;  // midpoint only
  int max_iters = 50;         // midpoint only
};

// Simulated trajectory on the uniform grid of its driving Brownian path.
// States are guaranteed finite; divergence raises StepError instead of
// recording NaNs. The driving noise is identified by (seed, path_index,
// channels) so any path can be regenerated from its metadata.
struct SDEPath {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  Scheme scheme = Scheme::Midpoint;
  std::uint64_t seed = 0;
  std::uint32_t path_index = 0;
  int channels = 0;
};

// One explicit Heun step: predictor zb = z + mu(z) h + sigma(z) dB, then
// z' = z + (mu(z)+mu(zb)) h/2 + (sigma(z)+sigma(zb)) dB/2.
PhasePoint step_heun(const StochasticField& f, const PhasePoint& z, double h,
                     std::span<const double> dB, long step_index = -1);

// One implicit midpoint step: solves z' = z + mu(zb) h + sigma(zb) dB with
// zb = (z+z')/2, by fixed-point iteration with a Newton fallback on
// dual-number Jacobians, to newton_tol in the max-norm.
PhasePoint step_midpoint(const StochasticField& f, const PhasePoint& z, double h,
                         std::span<const double> dB, double newton_tol = 1e-12,
                         int max_iters = 50, long step_index = -1);

// Linearization of the one-step increment map: A = h dmu/dz + sum_j dB_j
// dsigma_j/dz at z, in stacked (q,p) coordinates. This is what the implicit
// solve and the variational (tangent) dynamics share.
Mat step_linearization(const StochasticField& f, const PhasePoint& z, double h,
                       std::span<const double> dB);

// Integrates the whole driving path, recording every state. Requires
// cfg.h to match the path's grid and f.n to match its channel count.
SDEPath integrate(const StochasticField& f, const PhasePoint& z0, const IntegratorConfig& cfg,
                  const BrownianPath& bp);

// Midpoint discretization of the Stratonovich integral of X against Y:
// sum_k (X_k + X_{k+1})/2 * (Y_{k+1} - Y_k). Equal lengths required.
double stratonovich_integral(std::span<const double> x, std::span<const double> y);

}  // namespace shs
