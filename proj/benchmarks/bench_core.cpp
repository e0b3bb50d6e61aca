#include <benchmark/benchmark.h>

#include "shs/field.hpp"
#include "shs/helmholtz.hpp"
#include "shs/quadrature.hpp"
#include "shs/reconstruct.hpp"
#include "shs/sde.hpp"
#include "shs/verify.hpp"

namespace {

shs::StochasticField kubo() {
  return shs::field_from_hamiltonian("0.5*(q0^2+p0^2)", {"0.25*(q0^2+p0^2)"}, 1, {}, "kubo");
}

shs::StochasticField coupled_d3() {
  return shs::field_from_hamiltonian(
      "0.5*(q0^2+p0^2+q1^2+p1^2+q2^2+p2^2) + 0.3*q0*q1*p2",
      {"0.1*(q0^2+p1^2)", "0.2*q2*p0"}, 3, {}, "coupled");
}

void BM_EvalField(benchmark::State& state) {
  const auto f = coupled_d3();
  const shs::PhasePoint z{{0.3, -0.7, 1.1}, {0.9, 0.2, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(shs::eval_field(f, z));
}
BENCHMARK(BM_EvalField);

void BM_Jacobians(benchmark::State& state) {
  const auto f = coupled_d3();
  const shs::PhasePoint z{{0.3, -0.7, 1.1}, {0.9, 0.2, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(shs::jacobians(f, z));
}
BENCHMARK(BM_Jacobians);

void BM_CheckField(benchmark::State& state) {
  const auto f = coupled_d3();
  shs::SamplingConfig sampling;
  sampling.count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shs::check_field(f, sampling));
}
BENCHMARK(BM_CheckField)->Arg(32)->Arg(128);

void BM_ReconstructGradients(benchmark::State& state) {
  const auto f = coupled_d3();
  const auto rule = shs::gauss_legendre(20);
  const shs::PhasePoint z{{0.3, -0.7, 1.1}, {0.9, 0.2, -0.4}};
  for (auto _ : state) benchmark::DoNotOptimize(shs::reconstruct_gradients(f, z, rule));
}
BENCHMARK(BM_ReconstructGradients);

void BM_IntegrateMidpoint(benchmark::State& state) {
  const auto f = kubo();
  const auto bp = shs::sample_brownian(1, 0.0, 1.0, static_cast<int>(state.range(0)), 7, 0);
  shs::IntegratorConfig cfg;
  cfg.h = bp.h();
  const shs::PhasePoint z0{{1.0}, {0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(shs::integrate(f, z0, cfg, bp));
}
BENCHMARK(BM_IntegrateMidpoint)->Arg(1000);

void BM_TangentFlow(benchmark::State& state) {
  const auto f = kubo();
  const auto bp = shs::sample_brownian(1, 0.0, 1.0, 1000, 7, 0);
  shs::IntegratorConfig cfg;
  cfg.h = bp.h();
  const shs::PhasePoint z0{{1.0}, {0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(shs::tangent_flow(f, z0, cfg, bp));
}
BENCHMARK(BM_TangentFlow);

}  // namespace

BENCHMARK_MAIN();
