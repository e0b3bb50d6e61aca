#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "shs/reconstruct.hpp"
#include "test_support.hpp"

using namespace shs;

namespace {

std::shared_ptr<const StochasticField> load_shared(const std::string& name) {
  return std::make_shared<const StochasticField>(load_field(testsup::field_path(name)));
}

}  // namespace

TEST_CASE("reconstruct_hd: harmonic oscillator recovers (q^2+p^2)/2") {
  const StochasticField f = load_field(testsup::field_path("harmonic.field"));
  const QuadratureRule rule = gauss_legendre(20);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 16; ++t) {
    const double q = u(rng), p = u(rng);
    const double expected = (q * q + p * p) / 2.0;  // int_0^1 l (p^2+q^2) dl
    CHECK(reconstruct_hd(f, {{q}, {p}}, rule) == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(reconstruct_hd(f, PhasePoint::zero(1), rule) == 0.0);
}

TEST_CASE("reconstruct: kubo values at (1,1)") {
  const StochasticField f = load_field(testsup::field_path("kubo.field"));
  const QuadratureRule rule = gauss_legendre(20);
  CHECK(reconstruct_hd(f, {{1.0}, {1.0}}, rule) == doctest::Approx(1.0).epsilon(1e-14));
  const auto hs = reconstruct_hs(f, {{1.0}, {1.0}}, rule);
  REQUIRE(hs.size() == 1);
  CHECK(hs[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(reconstruct_hs(f, PhasePoint::zero(1), rule) == std::vector<double>{0.0});
}

TEST_CASE("reconstruct_hs: n=0 gives empty, additive noise gives p*c") {
  const StochasticField harmonic = load_field(testsup::field_path("harmonic.field"));
  CHECK(reconstruct_hs(harmonic, {{1.0}, {1.0}}, gauss_legendre(4)).empty());

  const StochasticField additive =
      parse_field("dim 1\nnoise 1\nQD[0]=p0\nPD[0]=-q0\nQS[0][0]=0.7\n", "mem", "additive");
  const auto hs = reconstruct_hs(additive, {{-1.3}, {2.4}}, gauss_legendre(8));
  CHECK(hs[0] == doctest::Approx(2.4 * 0.7).epsilon(1e-14));
}

TEST_CASE("reconstruct gradients: known values and finite differences") {
  const QuadratureRule rule = gauss_legendre(20);
  {
    const StochasticField f = load_field(testsup::field_path("harmonic.field"));
    const HamiltonianGradients g = reconstruct_gradients(f, {{1.0}, {2.0}}, rule);
    CHECK(g.h_d.dq[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.h_d.dp[0] == doctest::Approx(2.0).epsilon(1e-14));
  }
  {
    const StochasticField f = load_field(testsup::field_path("kubo.field"));
    const HamiltonianGradients g = reconstruct_gradients(f, {{1.0}, {2.0}}, rule);
    REQUIRE(g.h_s.size() == 1);
    CHECK(g.h_s[0].dq[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(g.h_s[0].dp[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
  {
    // gradients at the origin vanish for fields vanishing at 0
    const StochasticField f = load_field(testsup::field_path("kubo.field"));
    const HamiltonianGradients g = reconstruct_gradients(f, PhasePoint::zero(1), rule);
    CHECK(g.h_d.dq[0] == 0.0);
    CHECK(g.h_d.dp[0] == 0.0);
  }
  {
    // nonpolynomial field: compare against central differences of H itself
    const StochasticField f = field_from_hamiltonian("cos(q0)*p0 + tanh(p0)", {}, 1);
    const QuadratureRule dense = gauss_legendre(40);
    const PhasePoint z{{0.7}, {-1.1}};
    const HamiltonianGradients g = reconstruct_gradients(f, z, dense);
    const auto hd_q = testsup::central_difference(
        [&](double x) { return reconstruct_hd(f, {{x}, {z.p[0]}}, dense); }, z.q[0]);
    const auto hd_p = testsup::central_difference(
        [&](double x) { return reconstruct_hd(f, {{z.q[0]}, {x}}, dense); }, z.p[0]);
    CHECK(std::abs(g.h_d.dq[0] - hd_q) <= 1e-6);
    CHECK(std::abs(g.h_d.dp[0] - hd_p) <= 1e-6);
  }
}

TEST_CASE("Hamiltonian: gauge fixed at the origin") {
  const auto f = load_shared("kubo.field");
  const Hamiltonian h(f, gauss_legendre(20));
  CHECK(h.h_d(PhasePoint::zero(1)) == 0.0);
  CHECK(h.h_s(PhasePoint::zero(1)) == std::vector<double>{0.0});
}

TEST_CASE("make_hamiltonian: refusal gate and force override") {
  const auto broken = load_shared("broken.field");
  const HelmholtzReport check = check_field(*broken, SamplingConfig{});
  REQUIRE(!check.hamiltonian);
  CHECK_THROWS_AS(make_hamiltonian(broken, gauss_legendre(8), check), NotHamiltonianError);
  CHECK_NOTHROW(make_hamiltonian(broken, gauss_legendre(8), check, /*force=*/true));
}

TEST_CASE("roundtrip_residual: exact on kubo, >= 0.5 on a trace violator") {
  const SamplingConfig sampling;
  const QuadratureRule rule = gauss_legendre(20);

  const StochasticField kubo = load_field(testsup::field_path("kubo.field"));
  CHECK(roundtrip_residual(kubo, sampling, rule) <= 1e-12);

  const StochasticField broken = load_field(testsup::field_path("broken.field"));
  CHECK(roundtrip_residual(broken, sampling, rule) >= 0.5);
}

TEST_CASE("roundtrip exactness for random polynomial pairs") {
  std::mt19937_64 rng(99);
  const QuadratureRule rule = gauss_legendre(20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = testsup::random_poly_hamiltonian(rng);
    const StochasticField f = field_from_hamiltonian(h.h_d, h.h_s, h.d);
    SamplingConfig sampling;
    sampling.seed = 100 + trial;
    CHECK(roundtrip_residual(f, sampling, rule) <= 1e-10);

    // reconstructed values equal H - H(0) pointwise
    const SymbolTable table = field_symbols(h.d, {});
    const ExprPtr hd = bind_symbols(parse(h.h_d), table);
    EvalEnv env(table);
    const double h0 = eval(hd, env);  // all coordinates zero
    for (const PhasePoint& z : sample_points(SamplingConfig{2.0, 32, 17}, f.d)) {
      f.load_point(env, z);
      const double expected = eval(hd, env) - h0;
      const double got = reconstruct_hd(f, z, rule);
      CHECK(std::abs(got - expected) <= 1e-10 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("quadrature convergence is geometric for a nonpolynomial field") {
  const StochasticField f = field_from_hamiltonian("cos(q0)*p0", {}, 1);
  SamplingConfig sampling;
  sampling.count = 16;
  double previous = -1.0;
  int shrinking = 0;
  for (int m : {2, 4, 6, 8, 10, 12}) {
    const double residual = roundtrip_residual(f, sampling, gauss_legendre(m));
    if (previous >= 0.0 && previous > 1e-12) {
      CHECK(residual <= 0.5 * previous);
      ++shrinking;
    }
    previous = residual;
  }
  CHECK(shrinking >= 3);
  CHECK(roundtrip_residual(f, sampling, gauss_legendre(24)) <= 1e-12);
}

TEST_CASE("poisson_brackets") {
  const QuadratureRule rule = gauss_legendre(20);
  {
    // proportional pair: brackets vanish everywhere
    const auto kubo = load_shared("kubo.field");
    const Hamiltonian h(kubo, rule);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 8; ++t) {
      const auto b = poisson_brackets(h, {{u(rng)}, {u(rng)}});
      REQUIRE(b.size() == 1);
      CHECK(std::abs(b[0]) <= 1e-13);
    }
  }
  {
    // H_D = (q^2+p^2)/2, H_S = q: {H_D, H_S} = -p
    const auto f = std::make_shared<const StochasticField>(
        field_from_hamiltonian("(q0^2+p0^2)/2", {"q0"}, 1));
    const Hamiltonian h(f, rule);
    const auto b = poisson_brackets(h, {{1.0}, {2.0}});
    CHECK(b[0] == doctest::Approx(-2.0).epsilon(1e-13));
  }
  {
    const auto harmonic = load_shared("harmonic.field");
    CHECK(poisson_brackets(Hamiltonian(harmonic, rule), {{1.0}, {1.0}}).empty());
  }
}

TEST_CASE("reconstruction reports the failing node lambda on singular segments") {
  const StochasticField f = parse_field("dim 1\nQD[0]=log(q0)\nPD[0]=0\n", "mem", "singular");
  try {
    reconstruct_hd(f, {{-1.0}, {0.5}}, gauss_legendre(8));
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
}
