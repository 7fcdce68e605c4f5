#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <utility>

#include "quarterwave/energy.hpp"
#include "quarterwave/expr.hpp"

#include "oracles.hpp"

using namespace quarterwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ScalarFn cubic_g() {
  return ScalarFn::unary([](double z) { return -z * z * z; }, "-z^3");
}

ScalarFn linear_g() {
  return ScalarFn::unary([](double z) { return z; }, "z");
}

ScalarFn bump_phi(double amp) {
  return ScalarFn::unary(
      [amp](double x) { return amp * oracles::bump_ref(x, 2.0, 1.0); });
}

EnergyProblem standard_problem(double amp) {
  return make_energy_problem(1.0, BoundaryKind::Dirichlet, bump_phi(amp),
                             ScalarFn::zero(1), cubic_g(), 4.0);
}

}  // namespace

TEST_CASE("make_energy_problem wires f = -g(z)", "[energy]") {
  const EnergyProblem ep = standard_problem(5.0);
  CHECK(ep.base.f(0.3, 0.7, 2.0) == 8.0);   // -(-2^3)
  CHECK(ep.base.f(0.0, 0.0, -1.0) == -1.0);  // -(-(-1)^3)
  CHECK(ep.base.forcing(0.5, 0.5) == 0.0);
  CHECK(ep.base.mu(0.5) == 0.0);
  CHECK(ep.support_bound == 4.0);
  CHECK_THROWS_AS(
      make_energy_problem(1.0, BoundaryKind::Dirichlet, ScalarFn::zero(1),
                          ScalarFn::zero(1), ScalarFn::zero(2), 1.0),
      ArityMismatch);
}

TEST_CASE("structural checks pass for the standard configuration",
          "[energy]") {
  const auto checks = structural_checks(standard_problem(5.0));
  CHECK(checks.g_vanishes_at_zero);
  CHECK(checks.forcing_identically_zero);
  CHECK(checks.boundary_data_identically_zero);
  CHECK(checks.initial_data_compactly_supported);
  CHECK(checks.all_passed());
  CHECK(checks.failures().empty());
}

TEST_CASE("structural checks falsify broken hypotheses", "[energy]") {
  SECTION("g(0) != 0") {
    EnergyProblem ep = standard_problem(1.0);
    ep.g = ScalarFn::unary([](double z) { return z + 1.0; });
    const auto checks = structural_checks(ep);
    CHECK_FALSE(checks.g_vanishes_at_zero);
    CHECK_FALSE(checks.all_passed());
    REQUIRE_FALSE(checks.failures().empty());
    CHECK(checks.failures().front().find("g(0)") != std::string::npos);
  }
  SECTION("initial data not compactly supported") {
    EnergyProblem ep = standard_problem(1.0);
    ep.base.phi = ScalarFn::unary([](double x) { return std::cos(x); });
    CHECK_FALSE(structural_checks(ep).initial_data_compactly_supported);
  }
  SECTION("nonzero boundary data") {
    EnergyProblem ep = standard_problem(1.0);
    ep.base.mu = ScalarFn::constant(1, 1e-6);
    CHECK_FALSE(structural_checks(ep).boundary_data_identically_zero);
  }
  SECTION("nonzero forcing") {
    EnergyProblem ep = standard_problem(1.0);
    ep.base.forcing = ScalarFn::binary([](double t, double x) {
      return 1e-6 * t * x;
    });
    CHECK_FALSE(structural_checks(ep).forcing_identically_zero);
  }
}

TEST_CASE("initial energy of zero data is zero", "[energy]") {
  const EnergyProblem ep = make_energy_problem(
      1.0, BoundaryKind::Dirichlet, ScalarFn::zero(1), ScalarFn::zero(1),
      cubic_g(), 4.0);
  CHECK(initial_energy(ep) == 0.0);
}

TEST_CASE("a nonnegative potential keeps the energy nonnegative", "[energy]") {
  const EnergyProblem ep = make_energy_problem(
      1.0, BoundaryKind::Dirichlet, bump_phi(1.0), ScalarFn::zero(1),
      linear_g(), 4.0);
  CHECK(initial_energy(ep) > 0.0);
}

TEST_CASE("large-amplitude data make the energy negative, matching a "
          "brute-force oracle",
          "[energy]") {
  const double e0 = initial_energy(standard_problem(5.0));
  CHECK(e0 < 0.0);

  // 10^6-panel midpoint rule on the closed-form density:
  //   (a^2/2) phi'(x)^2 - phi(x)^4 / 4 with phi = 5 bump(x,2,1).
  const double ref = oracles::midpoint(
      [](double x) {
        const double dphi = 5.0 * oracles::bump_ref_dx(x, 2.0, 1.0);
        const double phi = 5.0 * oracles::bump_ref(x, 2.0, 1.0);
        return 0.5 * dphi * dphi - 0.25 * phi * phi * phi * phi;
      },
      0.0, 4.0, 1000000);
  CHECK_THAT(e0, WithinRel(ref, 1e-6));
}

TEST_CASE("quadratic energy scaling in the data", "[energy]") {
  auto psi = ScalarFn::unary(
      [](double x) { return oracles::bump_ref(x, 1.5, 0.5); });
  auto scaled = [&](double c) {
    return make_energy_problem(
        1.0, BoundaryKind::Dirichlet,
        ScalarFn::unary([c](double x) {
          return c * oracles::bump_ref(x, 2.0, 1.0);
        }),
        ScalarFn::unary([c, psi](double x) { return c * psi(x); }),
        ScalarFn::zero(1), 4.0);
  };
  const double base = initial_energy(scaled(1.0));
  const double tripled = initial_energy(scaled(3.0));
  CHECK_THAT(tripled, WithinRel(9.0 * base, 1e-8));
}

TEST_CASE("sign condition sampling", "[energy]") {
  SECTION("g = -z^3, lambda = 4: exact equality, no violations") {
    CHECK(sign_condition(cubic_g(), 4.0, -7.5, 7.5, 101).empty());
  }
  SECTION("g = z, lambda = 1: violation at every nonzero sample") {
    const auto v = sign_condition(linear_g(), 1.0, -1.0, 1.0, 101);
    CHECK(v.size() == 100);  // everything except z = 0
    for (const auto& s : v) {
      CHECK(s.z != 0.0);
      CHECK_THAT(s.gap, WithinRel(0.5 * s.z * s.z, 1e-9));
    }
  }
  SECTION("g = -z^3: the condition holds iff lambda <= 4") {
    CHECK(sign_condition(cubic_g(), 3.0, -1.0, 1.0, 101).empty());
    const auto v = sign_condition(cubic_g(), 5.0, -1.0, 1.0, 101);
    CHECK(v.size() == 100);
    for (const auto& s : v)
      CHECK_THAT(s.gap, WithinRel(0.25 * std::pow(s.z, 4.0), 1e-8));
  }
  SECTION("input validation") {
    CHECK_THROWS_AS(sign_condition(cubic_g(), 4.0, -1.0, 1.0, 1), Error);
    CHECK_THROWS_AS(sign_condition(cubic_g(), 4.0, 1.0, -1.0, 101), Error);
  }
}

TEST_CASE("z*g(z) = 4 G(z) identically for the cubic", "[energy]") {
  const auto g = cubic_g();
  for (int i = 0; i <= 100; ++i) {
    const double z = -7.5 + 15.0 * i / 100.0;
    const double lhs = z * g(z);
    const double rhs = 4.0 * potential(g, z);
    if (z == 0.0) {
      CHECK(lhs == 0.0);
      CHECK(rhs == 0.0);
    } else {
      CHECK_THAT(lhs, WithinRel(rhs, 1e-10));
    }
  }
}

TEST_CASE("blow-up certificate for the negative-energy configuration",
          "[energy]") {
  const auto rep = blowup_certificate(standard_problem(5.0), 4.0);
  CHECK(rep.certificate);
  CHECK(rep.e0 < 0.0);
  CHECK(rep.sign_violations.empty());
  CHECK(rep.structure.all_passed());
  CHECK(rep.reasons.empty());
  CHECK(rep.lambda == 4.0);
  // Sample range is +-1.5 * max|phi| = +-7.5.
  CHECK_THAT(rep.sampling.z_lo, WithinAbs(-7.5, 1e-9));
  CHECK_THAT(rep.sampling.z_hi, WithinAbs(7.5, 1e-9));
  CHECK(rep.sampling.samples == 101);
  CHECK(rep.notes.size() == 3);
}

TEST_CASE("small-amplitude data fail the energy criterion", "[energy]") {
  const auto rep = blowup_certificate(standard_problem(0.1), 4.0);
  CHECK_FALSE(rep.certificate);
  CHECK(rep.e0 > 0.0);
  REQUIRE_FALSE(rep.reasons.empty());
  CHECK(rep.reasons.front().find("energy") != std::string::npos);
}

TEST_CASE("a nonnegative potential can never certify", "[energy]") {
  const EnergyProblem ep = make_energy_problem(
      1.0, BoundaryKind::Neumann, bump_phi(3.0), ScalarFn::zero(1),
      linear_g(), 4.0);
  const auto rep = blowup_certificate(ep, 2.0);
  CHECK_FALSE(rep.certificate);
  CHECK(rep.e0 >= 0.0);
}

TEST_CASE("certificate soundness is assertable from the report", "[energy]") {
  for (double amp : {0.1, 1.0, 5.0}) {
    const auto rep = blowup_certificate(standard_problem(amp), 4.0);
    if (rep.certificate) {
      CHECK(rep.e0 < 0.0);
      CHECK(rep.sign_violations.empty());
      CHECK(rep.structure.all_passed());
    } else {
      CHECK_FALSE(rep.reasons.empty());
    }
  }
}

TEST_CASE("explicit z-range overrides the sampled amplitude", "[energy]") {
  CertificateConfig cfg;
  cfg.z_range = std::make_pair(-1.0, 1.0);
  const auto rep = blowup_certificate(standard_problem(5.0), 4.0, cfg);
  CHECK(rep.sampling.z_lo == -1.0);
  CHECK(rep.sampling.z_hi == 1.0);
}
