#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "quarterwave/exact.hpp"

using namespace quarterwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("power parameters at hand-checked exponents", "[exact]") {
  // alpha = 1/2: u = t^4/144 satisfies u_tt = t^2/12 = sqrt(u).
  const auto half = power_params(0.5);
  CHECK(half.gamma == 4.0);
  CHECK_THAT(half.beta, WithinRel(1.0 / 144.0, 1e-14));

  // alpha = 1/3: u_tt = 6 beta t = (beta t^3)^(1/3) forces beta = 6^(-3/2).
  const auto third = power_params(1.0 / 3.0);
  CHECK_THAT(third.gamma, WithinRel(3.0, 1e-15));
  CHECK_THAT(third.beta, WithinRel(std::pow(6.0, -1.5), 1e-13));
}

TEST_CASE("power parameters satisfy the defining system across the sweep",
          "[exact]") {
  for (int i = 1; i <= 9; ++i) {
    const double alpha = i / 10.0;
    const auto p = power_params(alpha);  // internal cross-check of both forms
    CHECK(p.gamma > 2.0);
    CHECK(p.beta > 0.0);
    // gamma - 2 = alpha * gamma
    CHECK_THAT(p.gamma - 2.0, WithinRel(alpha * p.gamma, 1e-12));
    // beta * gamma * (gamma - 1) = beta^alpha
    CHECK_THAT(p.beta * p.gamma * (p.gamma - 1.0),
               WithinRel(std::pow(p.beta, alpha), 1e-12));
  }
}

TEST_CASE("alpha outside (0,1) is rejected", "[exact]") {
  CHECK_THROWS_AS(power_params(0.0), AlphaOutOfRange);
  CHECK_THROWS_AS(power_params(1.0), AlphaOutOfRange);
  CHECK_THROWS_AS(power_params(1.5), AlphaOutOfRange);
  CHECK_THROWS_AS(power_params(-0.2), AlphaOutOfRange);
  CHECK_THROWS_AS(PowerSolution::glued(2.0, 0.0), AlphaOutOfRange);
}

TEST_CASE("evaluation of the glued solution", "[exact]") {
  const auto u = PowerSolution::glued(0.5, 0.0);
  CHECK_THAT(u.eval(2.0, 0), WithinRel(16.0 / 144.0, 1e-14));
  CHECK_THAT(u.eval(2.0, 1), WithinRel(2.0 / 9.0, 1e-14));
  CHECK_THAT(u.eval(2.0, 2), WithinRel(1.0 / 3.0, 1e-14));
  CHECK(u.eval(0.0, 0) == 0.0);
  CHECK(u.eval(0.0, 1) == 0.0);
  CHECK(u.eval(0.0, 2) == 0.0);  // gamma - 2 = 2 > 0

  const auto shifted = PowerSolution::glued(0.5, 1.0);
  for (int k : {0, 1, 2}) {
    CHECK(shifted.eval(0.5, k) == 0.0);  // before the gluing time
    CHECK(shifted.eval(1.0, k) == 0.0);  // at the gluing time
  }
  CHECK_THAT(shifted.eval(2.5, 0), WithinRel(std::pow(1.5, 4.0) / 144.0, 1e-14));
  CHECK_THROWS_AS(u.eval(1.0, 3), Error);
}

TEST_CASE("constructor guards", "[exact]") {
  CHECK_THROWS_AS(PowerSolution::glued(0.5, 1.0, BoundaryKind::Dirichlet),
                  Error);
  CHECK_THROWS_AS(PowerSolution::glued(0.5, -1.0), Error);
  CHECK_NOTHROW(PowerSolution::glued(0.5, 0.0));
}

TEST_CASE("the trivial member is identically zero", "[exact]") {
  const auto z = PowerSolution::trivial(0.5, 1.0);
  CHECK(z.is_trivial());
  for (double t : {0.0, 0.5, 1.5, 10.0})
    for (int k : {0, 1, 2}) CHECK(z.eval(t, k) == 0.0);
  const auto grid = linspace(0.0, 3.0, 50);
  CHECK(pde_residual(z, 1.0, grid) == 0.0);
}

TEST_CASE("direct substitution leaves only rounding residual", "[exact]") {
  const auto grid2 = linspace(0.0, 2.0, 200);
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (double s : {0.0, 1.0}) {
      const auto u = PowerSolution::glued(alpha, s);
      CHECK(pde_residual(u, 1.0, grid2) <= 1e-9);
    }
  }
  const auto grid3 = linspace(0.0, 3.0, 200);
  CHECK(pde_residual(PowerSolution::glued(1.0 / 3.0, 1.0), 1.0, grid3) <=
        1e-9);

  std::vector<double> bad{-0.5, 1.0};
  CHECK_THROWS_AS(pde_residual(PowerSolution::glued(0.5, 0.0), 1.0, bad),
                  Error);
}

TEST_CASE("seam gaps vanish at the h^2 rate", "[exact]") {
  const auto u = PowerSolution::glued(0.5, 1.0);

  // g2 = beta*gamma*(gamma-1)*h^2 = h^2/12 at alpha = 1/2.
  const auto at3 = seam_gap(u, 1e-3);
  CHECK_THAT(at3[2], WithinRel(1e-6 / 12.0, 1e-12));
  CHECK_THAT(at3[0], WithinRel(1e-12 / 144.0, 1e-12));
  CHECK_THAT(at3[1], WithinRel(1e-9 / 36.0, 1e-12));

  const auto at4 = seam_gap(u, 1e-4);
  CHECK_THAT(at3[2] / at4[2], WithinRel(100.0, 1e-10));

  // Ordering by powers of a small h: value < first < second derivative gap.
  CHECK(at3[0] > 0.0);
  CHECK(at3[0] < at3[1]);
  CHECK(at3[1] < at3[2]);

  CHECK_THROWS_AS(seam_gap(u, 1.0), Error);
  CHECK_THROWS_AS(seam_gap(u, 0.0), Error);
  CHECK_THROWS_AS(seam_gap(PowerSolution::glued(0.5, 0.0), 1e-3), Error);
}

TEST_CASE("distinct shifts witness nonuniqueness", "[exact]") {
  const auto u1 = PowerSolution::glued(0.5, 0.5);
  const auto u2 = PowerSolution::glued(0.5, 1.0);
  const auto grid = linspace(0.0, 2.0, 200);
  CHECK(pde_residual(u1, 1.0, grid) <= 1e-9);
  CHECK(pde_residual(u2, 1.0, grid) <= 1e-9);
  CHECK(u1.eval(2.0) != u2.eval(2.0));
  // Both satisfy the zero initial and boundary data exactly.
  for (int k : {0, 1})
    for (const auto* u : {&u1, &u2}) CHECK(u->eval(0.0, k) == 0.0);
}

TEST_CASE("the wired problem instance", "[exact]") {
  const auto u = PowerSolution::glued(0.5, 1.0);
  const MixedProblem p = u.problem(2.0);
  CHECK(p.a == 2.0);
  CHECK(p.boundary == BoundaryKind::Neumann);
  CHECK(p.phi(0.7) == 0.0);
  CHECK(p.psi(0.7) == 0.0);
  CHECK(p.mu(0.7) == 0.0);
  CHECK(p.f(0.0, 0.0, 0.25) == 0.5);
  CHECK(p.f(1.0, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(p.f(0.0, 0.0, -1.0), DomainError);
}
