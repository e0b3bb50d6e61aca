#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "shs/expr.hpp"
#include "shs/field.hpp"
#include "shs/format.hpp"

#ifndef SHS_FIELDS_DIR
#define SHS_FIELDS_DIR "fields"
#endif
#ifndef SHS_GOLDEN_DIR
#define SHS_GOLDEN_DIR "golden"
#endif

namespace testsup {

inline std::string field_path(const std::string& name) {
  return std::string(SHS_FIELDS_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(SHS_GOLDEN_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Random polynomial Hamiltonian pairs: sums of monomials c * q^a * p^b with
// total degree <= `degree` and coefficients in [-2, 2].

struct PolyHamiltonian {
  int d = 1;
  int n = 0;
  std::string h_d;
  std::vector<std::string> h_s;
};

inline std::string random_polynomial(std::mt19937_64& rng, int d, int degree) {
  std::uniform_int_distribution<int> monomials(2, 6);
  std::uniform_int_distribution<int> total_degree(0, degree);
  std::uniform_int_distribution<int> coord(0, 2 * d - 1);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);

  std::string out;
  const int m = monomials(rng);
  for (int t = 0; t < m; ++t) {
    std::vector<int> expo(2 * d, 0);
    const int deg = total_degree(rng);
    for (int k = 0; k < deg; ++k) ++expo[coord(rng)];

    std::string mono = shs::fmt(coeff(rng));
    for (int c = 0; c < 2 * d; ++c) {
      if (expo[c] == 0) continue;
      mono += "*";
      mono += (c < d ? "q" : "p") + std::to_string(c < d ? c : c - d);
      if (expo[c] > 1) mono += "^" + std::to_string(expo[c]);
    }
    out += (t == 0 ? "" : " + ") + mono;
  }
  return out;
}

inline PolyHamiltonian random_poly_hamiltonian(std::mt19937_64& rng, int max_d = 3, int max_n = 2,
                                               int degree = 4) {
  PolyHamiltonian h;
  h.d = std::uniform_int_distribution<int>(1, max_d)(rng);
  h.n = std::uniform_int_distribution<int>(0, max_n)(rng);
  h.h_d = random_polynomial(rng, h.d, degree);
  for (int j = 0; j < h.n; ++j) h.h_s.push_back(random_polynomial(rng, h.d, degree));
  return h;
}

// Adds eps*q0^2 to X_QD[0]; breaks the trace condition by exactly |2 eps q0|.
inline shs::StochasticField perturb_qd0(const shs::StochasticField& f, double eps) {
  shs::StochasticField g = f;
  const shs::ExprPtr bump = shs::bind_symbols(shs::parse(shs::fmt(eps) + "*q0^2"), g.symbols);
  g.x_qd[0] = shs::Expr::binary(shs::Expr::Kind::Add, f.x_qd[0], bump);
  g.label = f.label + "_perturbed";
  return g;
}

// ---------------------------------------------------------------------------
// Independent classical-Helmholtz oracle for n = 0 fields: assembles the
// three Santilli conditions straight from per-expression dual sweeps, with
// no shared condition-assembly code with the stochastic checker.

struct ClassicalResiduals {
  double trace = 0.0;
  double sym_q = 0.0;
  double sym_p = 0.0;
};

inline ClassicalResiduals classical_conditions_at(const shs::StochasticField& f,
                                                  const shs::PhasePoint& z) {
  const int d = f.d;
  shs::EvalEnv env = f.make_env();
  f.load_point(env, z);

  // dXq_dq[i][k], dXq_dp[i][k], dXp_dq[i][k], dXp_dp[i][k]
  std::vector<std::vector<double>> xq_q(d, std::vector<double>(d));
  std::vector<std::vector<double>> xq_p(d, std::vector<double>(d));
  std::vector<std::vector<double>> xp_q(d, std::vector<double>(d));
  std::vector<std::vector<double>> xp_p(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      xq_q[i][k] = shs::eval_dual(f.x_qd[i], env, k).deriv;
      xq_p[i][k] = shs::eval_dual(f.x_qd[i], env, d + k).deriv;
      xp_q[i][k] = shs::eval_dual(f.x_pd[i], env, k).deriv;
      xp_p[i][k] = shs::eval_dual(f.x_pd[i], env, d + k).deriv;
    }

  ClassicalResiduals r;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      r.trace = std::max(r.trace, std::abs(xq_q[i][k] + xp_p[k][i]));
      r.sym_q = std::max(r.sym_q, std::abs(xq_p[i][k] - xq_p[k][i]));
      r.sym_p = std::max(r.sym_p, std::abs(xp_q[i][k] - xp_q[k][i]));
    }
  return r;
}

// ---------------------------------------------------------------------------

inline double central_difference(const std::function<double(double)>& fn, double x,
                                 double step = 1e-5) {
  return (fn(x + step) - fn(x - step)) / (2.0 * step);
}

}  // namespace testsup
