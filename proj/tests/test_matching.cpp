#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "quarterwave/expr.hpp"
#include "quarterwave/matching.hpp"
#include "quarterwave/problem.hpp"

using namespace quarterwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MixedProblem zero_problem(BoundaryKind kind) {
  return MixedProblem{1.0,
                      ScalarFn::zero(3),
                      ScalarFn::zero(2),
                      ScalarFn::zero(1),
                      ScalarFn::zero(1),
                      ScalarFn::zero(1),
                      kind};
}

ScalarFn fn_of(const std::string& src, const std::string& var) {
  return to_scalar_fn(parse(src, {var}), {var});
}

// a = 2, phi = cos(x), psi = 0, mu = 1: the order-2 corner identity fails
// with residual 4 under the Derived form (a^2 phi''(0) = -4).
MixedProblem cos_problem() {
  MixedProblem p = zero_problem(BoundaryKind::Dirichlet);
  p.a = 2.0;
  p.phi = fn_of("cos(x)", "x");
  p.mu = fn_of("1", "t");
  return p;
}

MixedProblem cos_problem_analytic() {
  MixedProblem p = cos_problem();
  p.phi = p.phi.with_derivative(
               0, 1, ScalarFn::unary([](double x) { return -std::sin(x); }))
              .with_derivative(0, 2, ScalarFn::unary([](double x) {
                return -std::cos(x);
              }));
  p.mu = p.mu.with_derivative(0, 1, ScalarFn::zero(1))
             .with_derivative(0, 2, ScalarFn::zero(1));
  return p;
}

double residual_at(const std::vector<CornerResidual>& rs, int order) {
  for (const auto& r : rs)
    if (r.order == order) return r.value;
  FAIL("no residual of order " + std::to_string(order));
  return 0.0;
}

}  // namespace

TEST_CASE("all-zero Dirichlet data are compatible", "[matching]") {
  const auto rep = check_matching(zero_problem(BoundaryKind::Dirichlet));
  REQUIRE(rep.residuals.size() == 3);
  CHECK(residual_at(rep.residuals, 0) == 0.0);
  CHECK(residual_at(rep.residuals, 1) == 0.0);
  CHECK(residual_at(rep.residuals, 2) == 0.0);
  CHECK(rep.verdict.compatible());
  CHECK(rep.verdict.statement.find("compatible") != std::string::npos);
}

TEST_CASE("constant boundary data against zero initial data violate order 0",
          "[matching]") {
  MixedProblem p = zero_problem(BoundaryKind::Dirichlet);
  p.mu = ScalarFn::constant(1, 1.0);
  const auto rep = check_matching(p);
  CHECK_THAT(residual_at(rep.residuals, 0), WithinAbs(1.0, 1e-12));
  REQUIRE(rep.verdict.first_violated_order.has_value());
  CHECK(*rep.verdict.first_violated_order == 0);
  CHECK(rep.verdict.statement.find("first mixed problem") != std::string::npos);
  CHECK(rep.verdict.statement.find("no classical solution") !=
        std::string::npos);
}

TEST_CASE("cosine data give an order-2 residual of 4", "[matching]") {
  SECTION("finite differences") {
    const auto rs = residuals_dirichlet(cos_problem());
    CHECK_THAT(residual_at(rs, 0), WithinAbs(0.0, 1e-9));
    CHECK_THAT(residual_at(rs, 1), WithinAbs(0.0, 1e-9));
    CHECK_THAT(residual_at(rs, 2), WithinAbs(4.0, 1e-5));
  }
  SECTION("analytic derivative handles") {
    const auto rs = residuals_dirichlet(cos_problem_analytic());
    CHECK_THAT(residual_at(rs, 2), WithinAbs(4.0, 1e-12));
    const auto rep = check_matching(cos_problem_analytic());
    CHECK(rep.tol == 1e-8);
    REQUIRE(rep.verdict.first_violated_order.has_value());
    CHECK(*rep.verdict.first_violated_order == 2);
  }
}

TEST_CASE("the literal second-order form uses the averaged reference",
          "[matching]") {
  // mu''(0) - [ (f(0,0,phi(0)) + f(0,0,mu(0)))/2 + F(0,0) + a^2 phi(0) ]
  //   = 0 - [ 0 + 0 + 4*1 ] = -4 for the cosine data.
  const auto rs =
      residuals_dirichlet(cos_problem(), SecondOrderForm::Literal);
  CHECK_THAT(residual_at(rs, 2), WithinAbs(-4.0, 1e-5));

  const auto rep = check_matching(cos_problem(), std::nullopt,
                                  SecondOrderForm::Literal);
  REQUIRE(rep.second_order_form.has_value());
  CHECK(*rep.second_order_form == SecondOrderForm::Literal);
}

TEST_CASE("Neumann residuals", "[matching]") {
  SECTION("all-zero data are compatible") {
    const auto rep = check_matching(zero_problem(BoundaryKind::Neumann));
    REQUIRE(rep.residuals.size() == 2);
    CHECK(residual_at(rep.residuals, 0) == 0.0);
    CHECK(residual_at(rep.residuals, 1) == 0.0);
    CHECK(rep.verdict.compatible());
    CHECK(!rep.second_order_form.has_value());
  }
  SECTION("constant flux data violate order 0") {
    MixedProblem p = zero_problem(BoundaryKind::Neumann);
    p.mu = ScalarFn::constant(1, 1.0);
    const auto rep = check_matching(p);
    CHECK_THAT(residual_at(rep.residuals, 0), WithinAbs(1.0, 1e-12));
    REQUIRE(rep.verdict.first_violated_order.has_value());
    CHECK(*rep.verdict.first_violated_order == 0);
    CHECK(rep.verdict.statement.find("second mixed problem") !=
          std::string::npos);
  }
  SECTION("sine initial data against zero flux") {
    MixedProblem p = zero_problem(BoundaryKind::Neumann);
    p.phi = fn_of("sin(x)", "x");
    const auto rs = residuals_neumann(p);
    CHECK_THAT(residual_at(rs, 0), WithinAbs(-1.0, 1e-7));
  }
}

TEST_CASE("residual operations reject the wrong boundary kind", "[matching]") {
  CHECK_THROWS_AS(residuals_dirichlet(zero_problem(BoundaryKind::Neumann)),
                  Error);
  CHECK_THROWS_AS(residuals_neumann(zero_problem(BoundaryKind::Dirichlet)),
                  Error);
}

TEST_CASE("classify picks the smallest violated order", "[matching]") {
  auto verdict = [](std::vector<CornerResidual> rs, double tol) {
    return classify(rs, tol, BoundaryKind::Dirichlet);
  };
  CHECK(verdict({{0, 0.0}, {1, 0.0}, {2, 0.0}}, 1e-8).compatible());

  auto v1 = verdict({{0, 1.0}, {1, 0.0}, {2, 0.0}}, 1e-8);
  REQUIRE(v1.first_violated_order.has_value());
  CHECK(*v1.first_violated_order == 0);

  auto v2 = verdict({{0, 0.0}, {1, 1e-9}, {2, 4.0}}, 1e-8);
  REQUIRE(v2.first_violated_order.has_value());
  CHECK(*v2.first_violated_order == 2);

  CHECK_THROWS_AS(verdict({{0, 0.0}}, 0.0), Error);
}

TEST_CASE("residuals scale linearly with the boundary data", "[matching]") {
  MixedProblem p = zero_problem(BoundaryKind::Dirichlet);
  p.mu = fn_of("cos(3*t)-1+0.5*t", "t");
  const auto base = residuals_dirichlet(p);
  p.mu = fn_of("2*(cos(3*t)-1+0.5*t)", "t");
  const auto doubled = residuals_dirichlet(p);
  for (int order : {0, 1, 2}) {
    const double b = residual_at(base, order);
    const double d = residual_at(doubled, order);
    CHECK_THAT(d, WithinAbs(2.0 * b, 1e-6 * (1.0 + std::abs(b))));
  }
}

TEST_CASE("back-solved boundary data are compatible", "[matching]") {
  // With a = 1.5, phi = cos(x), psi = sin(x) + 1/2, f = t + z, F = 2 + t*x:
  //   mu(0)   = phi(0) = 1
  //   mu'(0)  = psi(0) = 1/2
  //   mu''(0) = f(0,0,1) + F(0,0) + a^2 phi''(0) = 1 + 2 - 2.25 = 0.75
  // which mu(t) = 1 + t/2 + 0.375 t^2 satisfies exactly.
  MixedProblem p = zero_problem(BoundaryKind::Dirichlet);
  p.a = 1.5;
  p.phi = fn_of("cos(x)", "x");
  p.psi = fn_of("sin(x)+0.5", "x");
  p.f = to_scalar_fn(parse("t+z", {"t", "x", "z"}), {"t", "x", "z"});
  p.forcing = to_scalar_fn(parse("2+t*x", {"t", "x"}), {"t", "x"});
  p.mu = fn_of("1+0.5*t+0.375*t^2", "t");

  SECTION("finite differences stay within 1e-6") {
    const auto rs = residuals_dirichlet(p);
    for (int order : {0, 1, 2})
      CHECK_THAT(residual_at(rs, order), WithinAbs(0.0, 1e-6));
    CHECK(check_matching(p).verdict.compatible());
  }
  SECTION("analytic handles stay within 1e-12") {
    p.phi = p.phi.with_derivative(
                 0, 1, ScalarFn::unary([](double x) { return -std::sin(x); }))
                .with_derivative(0, 2, ScalarFn::unary([](double x) {
                  return -std::cos(x);
                }));
    p.mu = p.mu
               .with_derivative(0, 1, ScalarFn::unary([](double t) {
                 return 0.5 + 0.75 * t;
               }))
               .with_derivative(0, 2, ScalarFn::constant(1, 0.75));
    const auto rs = residuals_dirichlet(p);
    for (int order : {0, 1, 2})
      CHECK_THAT(residual_at(rs, order), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("enlarging the tolerance never revokes compatibility", "[matching]") {
  const MixedProblem p = cos_problem();
  bool was_compatible = false;
  for (double tol : {1e-6, 1e-3, 1.0, 3.9, 4.1, 10.0}) {
    const auto rep = check_matching(p, tol);
    if (was_compatible) CHECK(rep.verdict.compatible());
    if (rep.verdict.compatible()) was_compatible = true;
  }
  // And the flip point sits at the residual value 4.
  CHECK_FALSE(check_matching(p, 3.9).verdict.compatible());
  CHECK(check_matching(p, 4.1).verdict.compatible());
}

TEST_CASE("default tolerances depend on derivative provenance", "[matching]") {
  CHECK(default_matching_tol(true) == 1e-8);
  CHECK(default_matching_tol(false) == 1e-5);
  CHECK(check_matching(cos_problem()).tol == 1e-5);
  CHECK(check_matching(cos_problem_analytic()).tol == 1e-8);
  CHECK(corner_data_analytic(cos_problem_analytic()));
  CHECK_FALSE(corner_data_analytic(cos_problem()));
}
