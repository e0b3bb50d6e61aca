// Command-line front-end: wires field-definition files to the checker,
// reconstructor, simulator and verifier. Every invocation is deterministic
// given its flags; all randomness is seeded and the seeds are echoed in the
// output headers. Exit codes: 0 success/affirmative verdict, 1 negative
// verdict, 2 input error, 3 runtime divergence.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shs/field.hpp"
#include "shs/format.hpp"
#include "shs/helmholtz.hpp"
#include "shs/quadrature.hpp"
#include "shs/reconstruct.hpp"
#include "shs/sde.hpp"
#include "shs/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;

struct CommonOptions {
  std::string field_file;
  double tol = 1e-9;
  double radius = 2.0;
  int points = 128;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_sampling = true) {
  cmd->add_option("field", opt.field_file, "field-definition file")->required();
  if (with_sampling) {
    cmd->add_option("--tol", opt.tol, "integrability tolerance");
    cmd->add_option("--radius", opt.radius, "sampling box half-width R");
    cmd->add_option("--points", opt.points, "sampled point count");
  }
  cmd->add_option("--seed", opt.seed, "random seed");
  cmd->add_option("--out", opt.out, "output file (default: stdout)");
}

shs::SamplingConfig sampling_of(const CommonOptions& opt) {
  shs::SamplingConfig s;
  s.radius = opt.radius;
  s.count = opt.points;
  s.seed = opt.seed;
  return s;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw shs::Error("cannot open output file '" + out_path + "'");
  out << text;
}

std::optional<shs::PhasePoint> parse_z0(const std::string& text, int d) {
  if (text.empty()) return std::nullopt;
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(std::stod(item));
  if (static_cast<int>(values.size()) != 2 * d)
    throw shs::Error("--z0 needs " + std::to_string(2 * d) + " comma-separated values");
  return shs::PhasePoint::from_stacked(values);
}

struct GridSpec {
  double lo = -2.0, hi = 2.0, step = 0.5;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  if (text.empty()) return g;
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw shs::Error("--grid wants a:b:step");
  g.lo = std::stod(text.substr(0, c1));
  g.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  g.step = std::stod(text.substr(c2 + 1));
  if (!(g.step > 0.0) || g.hi < g.lo) throw shs::Error("--grid wants a <= b and step > 0");
  return g;
}

std::string point_csv(const shs::PhasePoint& z) {
  std::string s;
  for (double v : z.stacked()) s += shs::fmt(v) + ",";
  return s;
}

// ---------------------------------------------------------------------------

int cmd_check(const CommonOptions& opt, const std::string& csv_path) {
  const shs::StochasticField field = shs::load_field(opt.field_file);
  std::ostringstream csv;
  std::function<void(const shs::PhasePoint&, const shs::ConditionResiduals&)> on_point;
  if (!csv_path.empty()) {
    for (int i = 0; i < field.d; ++i) csv << "q" << i << ",";
    for (int i = 0; i < field.d; ++i) csv << "p" << i << ",";
    csv << "trace_D,sym_QD,sym_PD";
    for (int j = 0; j < field.n; ++j)
      csv << ",trace_S" << j << ",sym_QS" << j << ",sym_PS" << j;
    csv << "\n";
    on_point = [&](const shs::PhasePoint& z, const shs::ConditionResiduals& r) {
      csv << point_csv(z) << shs::fmt(r.trace_D) << ',' << shs::fmt(r.sym_QD) << ','
          << shs::fmt(r.sym_PD);
      for (int j = 0; j < field.n; ++j)
        csv << ',' << shs::fmt(r.trace_S[j]) << ',' << shs::fmt(r.sym_QS[j]) << ','
            << shs::fmt(r.sym_PS[j]);
      csv << "\n";
    };
  }

  const shs::HelmholtzReport report = shs::check_field(field, sampling_of(opt), opt.tol, on_point);
  emit(opt.out, "field: " + opt.field_file + "\n" + shs::report_to_text(report));
  if (!csv_path.empty()) emit(csv_path, csv.str());
  return report.hamiltonian ? kExitOk : kExitNegative;
}

int cmd_reconstruct(const CommonOptions& opt, const std::string& grid_text, int nodes,
                    bool force) {
  auto field = std::make_shared<const shs::StochasticField>(shs::load_field(opt.field_file));
  const shs::SamplingConfig sampling = sampling_of(opt);
  const shs::HelmholtzReport check = shs::check_field(*field, sampling, opt.tol);
  const shs::QuadratureRule rule = shs::gauss_legendre(nodes);

  if (!check.hamiltonian && !force) {
    std::cerr << "refusing to reconstruct: field '" << field->label
              << "' is not a stochastic Hamiltonian system (worst residual "
              << shs::fmt(check.worst_residual) << " > tol " << shs::fmt(opt.tol)
              << "); rerun with --force to evaluate the formula anyway\n";
    return kExitNegative;
  }
  const shs::Hamiltonian hamiltonian = shs::make_hamiltonian(field, rule, check, force);
  const double roundtrip = shs::roundtrip_residual(*field, sampling, rule);

  std::ostringstream out;
  out << "# shs reconstruct field=" << opt.field_file << " label=" << field->label
      << " d=" << field->d << " n=" << field->n << " nodes=" << nodes
      << " grid=" << grid_text << "\n";
  out << "# check.verdict=" << (check.hamiltonian ? "hamiltonian" : "not_hamiltonian")
      << " roundtrip.residual=" << shs::fmt(roundtrip) << " tol=" << shs::fmt(opt.tol)
      << " sampling.seed=" << opt.seed << "\n";
  for (int i = 0; i < field->d; ++i) out << "q" << i << ",";
  for (int i = 0; i < field->d; ++i) out << "p" << i << ",";
  out << "H_D";
  for (int j = 0; j < field->n; ++j) out << ",H_S" << j;
  out << "\n";

  const GridSpec grid = parse_grid(grid_text);
  const int per_axis = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  const int axes = 2 * field->d;
  double total = 1.0;
  for (int a = 0; a < axes; ++a) total *= per_axis;
  if (total > 1e6) throw shs::Error("--grid would produce more than 1e6 points");

  std::vector<int> idx(axes, 0);
  for (;;) {
    shs::PhasePoint z = shs::PhasePoint::zero(field->d);
    for (int a = 0; a < axes; ++a) {
      const double v = grid.lo + idx[a] * grid.step;
      (a < field->d ? z.q[a] : z.p[a - field->d]) = v;
    }
    out << point_csv(z) << shs::fmt(hamiltonian.h_d(z));
    for (double v : hamiltonian.h_s(z)) out << "," << shs::fmt(v);
    out << "\n";

    int a = axes - 1;
    while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
    if (a < 0) break;
  }

  emit(opt.out, out.str());
  std::cerr << "roundtrip residual: " << shs::fmt(roundtrip) << "\n";
  return kExitOk;
}

int cmd_simulate(const CommonOptions& opt, const std::string& scheme_name, double h, double T,
                 int paths, const std::string& z0_text, int stride) {
  const shs::StochasticField field = shs::load_field(opt.field_file);
  const shs::Scheme scheme = shs::scheme_from_name(scheme_name);
  const int steps = std::max(1, static_cast<int>(std::llround(T / h)));

  shs::IntegratorConfig cfg;
  cfg.scheme = scheme;
  cfg.h = T / steps;

  const shs::PhasePoint z0 = parse_z0(z0_text, field.d)
                                 .value_or(shs::PhasePoint{std::vector<double>(field.d, 1.0),
                                                           std::vector<double>(field.d, 0.0)});
  if (paths > 1 && opt.out.empty())
    throw shs::Error("--paths > 1 needs --out (one file per path)");

  for (int path = 0; path < paths; ++path) {
    const shs::BrownianPath bp = shs::sample_brownian(field.n, 0.0, T, steps, opt.seed,
                                                      static_cast<std::uint32_t>(path));
    const shs::SDEPath traj = shs::integrate(field, z0, cfg, bp);

    std::ostringstream out;
    out << "# shs simulate field=" << opt.field_file << " label=" << field.label
        << " scheme=" << shs::scheme_name(scheme) << " h=" << shs::fmt(cfg.h)
        << " T=" << shs::fmt(T) << " steps=" << steps << " seed=" << opt.seed
        << " path=" << path << " d=" << field.d << " n=" << field.n
        << " stride=" << stride << "\n";
    out << "t";
    for (int i = 0; i < field.d; ++i) out << ",q" << i;
    for (int i = 0; i < field.d; ++i) out << ",p" << i;
    out << "\n";
    const std::size_t last = traj.times.size() - 1;
    for (std::size_t k = 0; k <= last; k += stride) {
      out << shs::fmt(traj.times[k]);
      for (double v : traj.states[k].stacked()) out << "," << shs::fmt(v);
      out << "\n";
      if (k + stride > last && k != last) {
        // always record the endpoint
        out << shs::fmt(traj.times[last]);
        for (double v : traj.states[last].stacked()) out << "," << shs::fmt(v);
        out << "\n";
      }
    }

    std::string out_path = opt.out;
    if (paths > 1) {
      const std::filesystem::path p(opt.out);
      std::filesystem::path renamed = p.parent_path();
      renamed /= p.stem().string() + "_p" + std::to_string(path) + p.extension().string();
      out_path = renamed.string();
    }
    emit(out_path, out.str());
  }
  return kExitOk;
}

int cmd_verify(const CommonOptions& opt, const std::string& scheme_name, double h, double T,
               int paths, int nodes, bool force, const std::string& z0_text,
               const std::string& csv_path, double symp_tol, double energy_tol, double rt_tol) {
  const shs::StochasticField field = shs::load_field(opt.field_file);

  shs::VerifyConfig cfg;
  cfg.sampling = sampling_of(opt);
  cfg.tol = opt.tol;
  cfg.quad_nodes = nodes;
  cfg.integrator.scheme = shs::scheme_from_name(scheme_name);
  cfg.integrator.h = h;
  cfg.t_end = T;
  cfg.paths = paths;
  cfg.path_seed = opt.seed;
  cfg.z0 = parse_z0(z0_text, field.d);
  cfg.force = force;
  cfg.symplectic_tol = symp_tol;
  cfg.energy_tol = energy_tol;
  cfg.roundtrip_tol = rt_tol;

  std::ostringstream csv;
  if (!csv_path.empty()) {
    csv << "path,t,symplectic_defect,hd_drift\n";
    cfg.on_path_series = [&](std::uint32_t path, const std::vector<double>& times,
                             const std::vector<double>& symp, const std::vector<double>& drift) {
      for (std::size_t k = 0; k < times.size(); ++k) {
        csv << path << "," << shs::fmt(times[k]) << "," << shs::fmt(symp[k]) << ",";
        if (k < drift.size()) csv << shs::fmt(drift[k]);
        csv << "\n";
      }
    };
  }

  const shs::VerificationReport report = shs::verify_field(field, cfg);
  emit(opt.out, "field: " + opt.field_file + "\n" + shs::report_to_text(report));
  if (!csv_path.empty()) emit(csv_path, csv.str());
  return report.passed ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic Hamiltonian structure toolkit: decide whether a Stratonovich "
               "SDE is a stochastic Hamiltonian system, reconstruct its Hamiltonian pair, "
               "simulate it, and verify the characterizations along trajectories"};
  app.require_subcommand(1);

  CommonOptions check_opt, rec_opt, sim_opt, ver_opt;
  std::string check_csv;
  std::string rec_grid = "-2:2:0.5";
  int rec_nodes = 20;
  bool rec_force = false;

  std::string sim_scheme = "midpoint";
  double sim_h = 1e-3, sim_T = 1.0;
  int sim_paths = 1, sim_stride = 1;
  std::string sim_z0;

  std::string ver_scheme = "midpoint";
  double ver_h = 1e-3, ver_T = 1.0;
  int ver_paths = 100, ver_nodes = 20;
  bool ver_force = false;
  std::string ver_z0, ver_csv;
  double ver_symp_tol = 1e-8, ver_energy_tol = 1e-8, ver_rt_tol = 1e-8;

  CLI::App* check = app.add_subcommand(
      "check", "evaluate the stochastic integrability conditions at sampled points");
  add_common(check, check_opt);
  check->add_option("--csv", check_csv, "per-point residual CSV file");

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "compute the Hamiltonian pair {H_D, H_S} on a grid by quadrature");
  add_common(rec, rec_opt);
  rec->add_option("--grid", rec_grid, "grid a:b:step applied to every coordinate");
  rec->add_option("--nodes", rec_nodes, "Gauss-Legendre node count");
  rec->add_flag("--force", rec_force, "reconstruct even if the check fails");

  CLI::App* sim = app.add_subcommand("simulate", "integrate the SDE along seeded Brownian paths");
  add_common(sim, sim_opt, /*with_sampling=*/false);
  sim->add_option("--scheme", sim_scheme, "heun or midpoint")
      ->check(CLI::IsMember({"heun", "midpoint"}));
  sim->add_option("--h", sim_h, "step size");
  sim->add_option("--T", sim_T, "end time");
  sim->add_option("--paths", sim_paths, "number of Monte Carlo paths");
  sim->add_option("--stride", sim_stride, "record every k-th step")->check(CLI::PositiveNumber);
  sim->add_option("--z0", sim_z0, "initial point q0,..,p0,.. (default 1,..,0,..)");

  CLI::App* ver = app.add_subcommand(
      "verify", "check + reconstruct + symplectic/energy verification along paths");
  add_common(ver, ver_opt);
  ver->add_option("--scheme", ver_scheme, "heun or midpoint")
      ->check(CLI::IsMember({"heun", "midpoint"}));
  ver->add_option("--h", ver_h, "step size");
  ver->add_option("--T", ver_T, "end time");
  ver->add_option("--paths", ver_paths, "number of Monte Carlo paths");
  ver->add_option("--nodes", ver_nodes, "Gauss-Legendre node count");
  ver->add_flag("--force", ver_force, "run reconstruction stages despite a failed check");
  ver->add_option("--z0", ver_z0, "initial point q0,..,p0,..");
  ver->add_option("--csv", ver_csv, "per-path time-series CSV file");
  ver->add_option("--symp-tol", ver_symp_tol, "symplectic residual threshold");
  ver->add_option("--energy-tol", ver_energy_tol, "energy drift threshold");
  ver->add_option("--rt-tol", ver_rt_tol, "round-trip residual threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(check_opt, check_csv);
    if (rec->parsed()) return cmd_reconstruct(rec_opt, rec_grid, rec_nodes, rec_force);
    if (sim->parsed())
      return cmd_simulate(sim_opt, sim_scheme, sim_h, sim_T, sim_paths, sim_z0, sim_stride);
    if (ver->parsed())
      return cmd_verify(ver_opt, ver_scheme, ver_h, ver_T, ver_paths, ver_nodes, ver_force,
                        ver_z0, ver_csv, ver_symp_tol, ver_energy_tol, ver_rt_tol);
  } catch (const shs::VerifyStageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == shs::VerifyStageError::Kind::divergence ? kExitDivergence : kExitInput;
  } catch (const shs::StepError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
