#include "shs/reconstruct.hpp"

#include <cmath>
#include <utility>

#include "shs/format.hpp"

namespace shs {

namespace {

// Loads lambda * z into the environment's coordinate slots.
void load_scaled(const StochasticField& f, EvalEnv& env, const PhasePoint& z, double lambda) {
  for (int i = 0; i < f.d; ++i) {
    env[i] = lambda * z.q[i];
    env[f.d + i] = lambda * z.p[i];
  }
}

[[noreturn]] void node_error(double lambda, const EvalError& err) {
  throw EvalError("field singular on the reconstruction segment at lambda=" + fmt(lambda) +
                      ": " + err.what(),
                  err.where());
}

}  // namespace

double reconstruct_hd(const StochasticField& f, const PhasePoint& z, const QuadratureRule& rule) {
  EvalEnv env = f.make_env();
  double acc = 0.0;
  for (int m = 0; m < rule.size(); ++m) {
    const double lambda = rule.nodes[m];
    load_scaled(f, env, z, lambda);
    try {
      double node = 0.0;
      for (int i = 0; i < f.d; ++i)
        node += z.p[i] * eval(f.x_qd[i], env) - z.q[i] * eval(f.x_pd[i], env);
      acc += rule.weights[m] * node;
    } catch (const EvalError& err) {
      node_error(lambda, err);
    }
  }
  return acc;
}

std::vector<double> reconstruct_hs(const StochasticField& f, const PhasePoint& z,
                                   const QuadratureRule& rule) {
  EvalEnv env = f.make_env();
  std::vector<double> acc(f.n, 0.0);
  for (int m = 0; m < rule.size(); ++m) {
    const double lambda = rule.nodes[m];
    load_scaled(f, env, z, lambda);
    try {
      for (int j = 0; j < f.n; ++j) {
        double node = 0.0;
        for (int i = 0; i < f.d; ++i)
          node += z.p[i] * eval(f.x_qs[i][j], env) - z.q[i] * eval(f.x_ps[i][j], env);
        acc[j] += rule.weights[m] * node;
      }
    } catch (const EvalError& err) {
      node_error(lambda, err);
    }
  }
  return acc;
}

HamiltonianGradients reconstruct_gradients(const StochasticField& f, const PhasePoint& z,
                                           const QuadratureRule& rule) {
  const int d = f.d, n = f.n;
  HamiltonianGradients g;
  g.h_d.dq.assign(d, 0.0);
  g.h_d.dp.assign(d, 0.0);
  g.h_s.assign(n, {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)});

  EvalEnv env = f.make_env();
  // d/dz_k of sum_m w_m [P . X(lambda_m z) - Q . X(lambda_m z)]: the field
  // arguments carry an inner factor lambda, the P/Q prefactors a direct one.
  for (int m = 0; m < rule.size(); ++m) {
    const double lambda = rule.nodes[m];
    const double w = rule.weights[m];
    load_scaled(f, env, z, lambda);
    try {
      for (int k = 0; k < 2 * d; ++k) {
        const bool wrt_q = k < d;
        const int c = wrt_q ? k : k - d;
        double node = 0.0;
        for (int i = 0; i < d; ++i) {
          const Dual xq = eval_dual(f.x_qd[i], env, k);
          const Dual xp = eval_dual(f.x_pd[i], env, k);
          node += z.p[i] * lambda * xq.deriv - z.q[i] * lambda * xp.deriv;
          if (!wrt_q && i == c) node += xq.value;  // d(P_i)/dp_c
          if (wrt_q && i == c) node -= xp.value;   // d(Q_i)/dq_c
        }
        (wrt_q ? g.h_d.dq[c] : g.h_d.dp[c]) += w * node;

        for (int j = 0; j < n; ++j) {
          double snode = 0.0;
          for (int i = 0; i < d; ++i) {
            const Dual xq = eval_dual(f.x_qs[i][j], env, k);
            const Dual xp = eval_dual(f.x_ps[i][j], env, k);
            snode += z.p[i] * lambda * xq.deriv - z.q[i] * lambda * xp.deriv;
            if (!wrt_q && i == c) snode += xq.value;
            if (wrt_q && i == c) snode -= xp.value;
          }
          (wrt_q ? g.h_s[j].dq[c] : g.h_s[j].dp[c]) += w * snode;
        }
      }
    } catch (const EvalError& err) {
      node_error(lambda, err);
    }
  }
  return g;
}

Hamiltonian::Hamiltonian(std::shared_ptr<const StochasticField> field, QuadratureRule rule)
    : field_(std::move(field)), rule_(std::move(rule)) {}

Hamiltonian make_hamiltonian(std::shared_ptr<const StochasticField> field, QuadratureRule rule,
                             const HelmholtzReport& check, bool force) {
  if (!check.hamiltonian && !force)
    throw NotHamiltonianError(
        "field '" + field->label +
        "' failed the integrability check (worst residual " + fmt(check.worst_residual) +
        " > tol " + fmt(check.tol) + "); reconstruction refused without force");
  return Hamiltonian(std::move(field), std::move(rule));
}

double roundtrip_residual(const StochasticField& f, const SamplingConfig& sampling,
                          const QuadratureRule& rule) {
  double residual = 0.0;
  for (const PhasePoint& z : sample_points(sampling, f.d)) {
    const HamiltonianGradients g = reconstruct_gradients(f, z, rule);
    const FieldValues v = eval_field(f, z);
    for (int i = 0; i < f.d; ++i) {
      residual = std::max(residual, std::abs(g.h_d.dp[i] - v.drift[i]));
      residual = std::max(residual, std::abs(g.h_d.dq[i] + v.drift[f.d + i]));
      for (int j = 0; j < f.n; ++j) {
        residual = std::max(residual, std::abs(g.h_s[j].dp[i] - v.diffusion[i][j]));
        residual = std::max(residual, std::abs(g.h_s[j].dq[i] + v.diffusion[f.d + i][j]));
      }
    }
  }
  return residual;
}

std::vector<double> poisson_brackets(const Hamiltonian& h, const PhasePoint& z) {
  const HamiltonianGradients g = h.gradient(z);
  const int d = h.field().d, n = h.field().n;
  std::vector<double> brackets(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i)
      acc += g.h_d.dq[i] * g.h_s[j].dp[i] - g.h_d.dp[i] * g.h_s[j].dq[i];
    brackets[j] = acc;
  }
  return brackets;
}

}  // namespace shs
