#pragma once

#include <memory>
#include <vector>

#include "shs/field.hpp"
#include "shs/helmholtz.hpp"
#include "shs/quadrature.hpp"
#include "shs/sampling.hpp"

namespace shs {

// Drift Hamiltonian by quadrature of the radial integral
//   H_D(z) = int_0^1 [P . X_QD(lambda z) - Q . X_PD(lambda z)] dlambda.
// Exact to rounding when the integrand is polynomial of degree <= 2m-1 in
// lambda. The additive gauge is fixed by H(0) = 0. The field must be
// evaluable on the whole segment {lambda z : 0 <= lambda <= 1}; a domain
// error at a node reports its lambda.
double reconstruct_hd(const StochasticField& f, const PhasePoint& z, const QuadratureRule& rule);

// Same integral per noise channel, pairing P with channel j of X_QS and Q
// with channel j of X_PS. Empty for n = 0.
std::vector<double> reconstruct_hs(const StochasticField& f, const PhasePoint& z,
                                   const QuadratureRule& rule);

struct HamiltonianGradient {
  std::vector<double> dq;  // size d
  std::vector<double> dp;
};

struct HamiltonianGradients {
  HamiltonianGradient h_d;
  std::vector<HamiltonianGradient> h_s;  // per channel
};

// Gradients of the reconstructed functions, by dual-number differentiation
// through the quadrature sum (differentiation under the integral sign).
HamiltonianGradients reconstruct_gradients(const StochasticField& f, const PhasePoint& z,
                                           const QuadratureRule& rule);

// Quadrature-backed evaluators for the reconstructed pair {H_D, H_S}.
class Hamiltonian {
public:
  Hamiltonian(std::shared_ptr<const StochasticField> field, QuadratureRule rule);

  double h_d(const PhasePoint& z) const { return reconstruct_hd(*field_, z, rule_); }
  std::vector<double> h_s(const PhasePoint& z) const { return reconstruct_hs(*field_, z, rule_); }
  HamiltonianGradients gradient(const PhasePoint& z) const {
    return reconstruct_gradients(*field_, z, rule_);
  }

  const StochasticField& field() const { return *field_; }
  const QuadratureRule& rule() const { return rule_; }

private:
  std::shared_ptr<const StochasticField> field_;
  QuadratureRule rule_;
};

// Gate: reconstruction is meaningless for fields that fail the
// integrability check, so this refuses unless `force` is set (force exists
// to demonstrate exactly that failure).
Hamiltonian make_hamiltonian(std::shared_ptr<const StochasticField> field, QuadratureRule rule,
                             const HelmholtzReport& check, bool force = false);

// Max over sampled points and components of the gradient identities
// |dH_D/dP - X_QD|, |dH_D/dQ + X_PD| and their H_S versions: the
// executable content of the reconstruction theorem's reciprocal direction.
double roundtrip_residual(const StochasticField& f, const SamplingConfig& sampling,
                          const QuadratureRule& rule);

// Poisson brackets {H_D, (H_S)_j} of the reconstructed pair at z. H_D is a
// pathwise first integral exactly when these vanish.
std::vector<double> poisson_brackets(const Hamiltonian& h, const PhasePoint& z);

}  // namespace shs
