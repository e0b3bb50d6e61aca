#include "shs/sde.hpp"

#include <cmath>
#include <stdexcept>

#include "shs/format.hpp"

namespace shs {

std::string_view scheme_name(Scheme s) {
  return s == Scheme::Heun ? "heun" : "midpoint";
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "heun") return Scheme::Heun;
  if (name == "midpoint") return Scheme::Midpoint;
  throw Error("unknown scheme '" + std::string(name) + "', expected heun or midpoint");
}

namespace {

// One-step increment phi(z) = mu(z) h + sigma(z) dB in stacked coordinates.
std::vector<double> increment(const StochasticField& f, const PhasePoint& z, double h,
                              std::span<const double> dB) {
  const FieldValues v = eval_field(f, z);
  std::vector<double> out(2 * f.d);
  for (int i = 0; i < 2 * f.d; ++i) {
    double acc = v.drift[i] * h;
    for (int j = 0; j < f.n; ++j) acc += v.diffusion[i][j] * dB[j];
    out[i] = acc;
  }
  return out;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> axpy(const std::vector<double>& z, const std::vector<double>& dz,
                         double scale = 1.0) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] + scale * dz[i];
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

[[noreturn]] void diverged(long step_index) {
  throw StepError("state diverged (non-finite)", step_index);
}

}  // namespace

PhasePoint step_heun(const StochasticField& f, const PhasePoint& z, double h,
                     std::span<const double> dB, long step_index) {
  const std::vector<double> z0 = z.stacked();
  const std::vector<double> phi0 = increment(f, z, h, dB);
  const std::vector<double> zp = axpy(z0, phi0);
  if (!all_finite(zp)) diverged(step_index);
  const std::vector<double> phi1 = increment(f, PhasePoint::from_stacked(zp), h, dB);
  std::vector<double> out(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = z0[i] + 0.5 * (phi0[i] + phi1[i]);
  if (!all_finite(out)) diverged(step_index);
  return PhasePoint::from_stacked(out);
}

Mat step_linearization(const StochasticField& f, const PhasePoint& z, double h,
                       std::span<const double> dB) {
  const FieldJacobians J = jacobians(f, z);
  const int d = f.d;
  Mat a(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double qq = h * J.dQD_dQ[i][k], qp = h * J.dQD_dP[i][k];
      double pq = h * J.dPD_dQ[i][k], pp = h * J.dPD_dP[i][k];
      for (int j = 0; j < f.n; ++j) {
        qq += dB[j] * J.dQS_dQ[i][j][k];
        qp += dB[j] * J.dQS_dP[i][j][k];
        pq += dB[j] * J.dPS_dQ[i][j][k];
        pp += dB[j] * J.dPS_dP[i][j][k];
      }
      a(i, k) = qq;
      a(i, d + k) = qp;
      a(d + i, k) = pq;
      a(d + i, d + k) = pp;
    }
  return a;
}

PhasePoint step_midpoint(const StochasticField& f, const PhasePoint& z, double h,
                         std::span<const double> dB, double newton_tol, int max_iters,
                         long step_index) {
  const std::vector<double> z0 = z.stacked();
  std::vector<double> zp = z0;

  // Fixed-point sweep; contraction needs Lip(phi)/2 < 1, which holds for
  // reasonable step sizes. Falls back to Newton when it stalls.
  const int fixed_point_budget = std::min(max_iters, 16);
  int used = 0;
  for (; used < fixed_point_budget; ++used) {
    std::vector<double> mid(z0.size());
    for (std::size_t i = 0; i < z0.size(); ++i) mid[i] = 0.5 * (z0[i] + zp[i]);
    const std::vector<double> next = axpy(z0, increment(f, PhasePoint::from_stacked(mid), h, dB));
    if (!all_finite(next)) diverged(step_index);
    const double delta = max_diff(next, zp);
    zp = next;
    if (delta <= newton_tol) return PhasePoint::from_stacked(zp);
  }

  // Newton on G(z') = z' - z - phi((z+z')/2); G' = I - A(zbar)/2.
  for (; used < max_iters; ++used) {
    std::vector<double> mid(z0.size());
    for (std::size_t i = 0; i < z0.size(); ++i) mid[i] = 0.5 * (z0[i] + zp[i]);
    const PhasePoint zbar = PhasePoint::from_stacked(mid);
    const std::vector<double> phi = increment(f, zbar, h, dB);
    std::vector<double> g(z0.size());
    for (std::size_t i = 0; i < z0.size(); ++i) g[i] = zp[i] - z0[i] - phi[i];

    Mat jg = Mat::identity(2 * f.d);
    Mat a = step_linearization(f, zbar, h, dB);
    a *= 0.5;
    jg -= a;
    const std::vector<double> delta = solve(std::move(jg), g);
    double norm = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) {
      zp[i] -= delta[i];
      norm = std::max(norm, std::abs(delta[i]));
    }
    if (!all_finite(zp)) diverged(step_index);
    if (norm <= newton_tol) return PhasePoint::from_stacked(zp);
  }

  std::vector<double> mid(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) mid[i] = 0.5 * (z0[i] + zp[i]);
  const std::vector<double> phi = increment(f, PhasePoint::from_stacked(mid), h, dB);
  double residual = 0.0;
  for (std::size_t i = 0; i < z0.size(); ++i)
    residual = std::max(residual, std::abs(zp[i] - z0[i] - phi[i]));
  throw StepError("implicit midpoint did not converge within " + std::to_string(max_iters) +
                      " iterations (residual " + fmt(residual) + ")",
                  step_index);
}

SDEPath integrate(const StochasticField& f, const PhasePoint& z0, const IntegratorConfig& cfg,
                  const BrownianPath& bp) {
  if (bp.channels != f.n)
    throw Error("integrate: path has " + std::to_string(bp.channels) + " channels, field needs " +
                std::to_string(f.n));
  if (z0.dim() != f.d) throw Error("integrate: initial condition dimension mismatch");
  if (bp.steps > 0 && std::abs(cfg.h - bp.h()) > 1e-12 * std::max(1.0, std::abs(bp.h())))
    throw Error("integrate: cfg.h = " + fmt(cfg.h) + " does not match the path grid h = " +
                fmt(bp.h()));

  SDEPath path;
  path.scheme = cfg.scheme;
  path.seed = bp.seed;
  path.path_index = bp.path_index;
  path.channels = bp.channels;
  path.times.reserve(bp.steps + 1);
  path.states.reserve(bp.steps + 1);
  path.times.push_back(bp.t0);
  path.states.push_back(z0);

  const double h = bp.h();
  PhasePoint z = z0;
  for (int k = 0; k < bp.steps; ++k) {
    const std::span<const double> dB = bp.step_increments(k);
    z = cfg.scheme == Scheme::Heun
            ? step_heun(f, z, h, dB, k)
            : step_midpoint(f, z, h, dB, cfg.newton_tol, cfg.max_iters, k);
    path.times.push_back(bp.t0 + (k + 1) * h);
    path.states.push_back(z);
  }
  return path;
}

double stratonovich_integral(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error("stratonovich_integral: length mismatch (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    acc += 0.5 * (x[k] + x[k + 1]) * (y[k + 1] - y[k]);
  return acc;
}

}  // namespace shs
