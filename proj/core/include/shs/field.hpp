#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shs/expr.hpp"

namespace shs {

// Point Z = (Q, P) on 2d-dimensional phase space.
struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;

  static PhasePoint zero(int d) {
    return {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  }

  int dim() const { return static_cast<int>(q.size()); }

  // State stacking convention: z = (q0..q{d-1}, p0..p{d-1}).
  std::vector<double> stacked() const;
  static PhasePoint from_stacked(std::span<const double> z);
};

// The stochastic vector field X(Q,P) = {X_D, X_S}: drift components X_QD,
// X_PD (d expressions each) and diffusion components X_QS, X_PS (d x n).
// n = 0 is a deterministic (classical) system. Immutable after load; all
// operations on it are pure.
struct StochasticField {
  int d = 0;
  int n = 0;
  std::string label;
  std::vector<std::pair<std::string, double>> params;
  SymbolTable symbols;  // q0.., p0.., then parameter names

  std::vector<ExprPtr> x_qd;               // [i], i < d
  std::vector<ExprPtr> x_pd;               // [i]
  std::vector<std::vector<ExprPtr>> x_qs;  // [i][j], j < n
  std::vector<std::vector<ExprPtr>> x_ps;  // [i][j]

  // Environment with parameters bound and coordinates zeroed.
  EvalEnv make_env() const;
  void load_point(EvalEnv& env, const PhasePoint& z) const;
};

// Builds the coordinate symbol table q0..q{d-1}, p0..p{d-1} plus parameters.
SymbolTable field_symbols(int d, const std::vector<std::pair<std::string, double>>& params);

// Parses the line-oriented field-definition format (see docs/formats.md).
// Directives: dim, noise, label, param, QD[i], PD[i], QS[i][j], PS[i][j].
// Drift entries are required; missing diffusion entries default to zero.
// Throws FieldFormatError with file:line context.
StochasticField parse_field(std::string_view text, const std::string& origin,
                            std::string label);
StochasticField load_field(const std::filesystem::path& file);

// Drift mu (2d rows, Q-components first) and diffusion sigma (2d x n).
struct FieldValues {
  std::vector<double> drift;
  std::vector<std::vector<double>> diffusion;
};

FieldValues eval_field(const StochasticField& f, const PhasePoint& z);

// All first partials of the field at one point, from one dual-number sweep
// per coordinate direction. Drift blocks are d x d with [i][k] = d(X_.)_i /
// d(coord_k); diffusion blocks are d x n x d with index order (component i,
// channel j, derivative coordinate k).
struct FieldJacobians {
  std::vector<std::vector<double>> dQD_dQ, dQD_dP, dPD_dQ, dPD_dP;
  std::vector<std::vector<std::vector<double>>> dQS_dQ, dQS_dP, dPS_dQ, dPS_dP;
};

FieldJacobians jacobians(const StochasticField& f, const PhasePoint& z);

// Canonical field of a Hamiltonian pair: X_QD = dH_D/dP, X_PD = -dH_D/dQ,
// and per channel j, X_QS[.][j] = d(H_S)_j/dP, X_PS[.][j] = -d(H_S)_j/dQ.
// h_d and h_s may be unbound parser output; symbols resolve against
// q0..q{d-1}, p0..p{d-1} and the given parameters.
StochasticField field_from_hamiltonian(const ExprPtr& h_d, const std::vector<ExprPtr>& h_s,
                                       int d,
                                       std::vector<std::pair<std::string, double>> params = {},
                                       std::string label = "generated");
StochasticField field_from_hamiltonian(const std::string& h_d, const std::vector<std::string>& h_s,
                                       int d,
                                       std::vector<std::pair<std::string, double>> params = {},
                                       std::string label = "generated");

// Ito-Stratonovich drift correction at z: mu~_i = 1/2 sum_j sum_k
// d(sigma_ij)/d(z_k) sigma_kj with sigma the stacked (X_QS; X_PS) and the
// sum over all 2d state coordinates. The Ito-form drift of the same process
// is drift(z) + correction(z). Zero vector when n = 0.
std::vector<double> ito_drift_correction(const StochasticField& f, const PhasePoint& z);

}  // namespace shs
