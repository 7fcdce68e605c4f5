// Negative initial energy with a superlinear potential term: the energy
// check certifies nonexistence of a global solution, and the run confirms
// it by blowing up long before t_final.

#include <cstdio>

#include <quarterwave/energy.hpp>
#include <quarterwave/expr.hpp>
#include <quarterwave/solver.hpp>

int main() {
  using namespace quarterwave;

  const ScalarFn phi =
      to_scalar_fn(parse("5*bump(x,2,1)", {"x"}), {"x"});
  const ScalarFn g = to_scalar_fn(parse("-z^3", {"z"}), {"z"});
  const EnergyProblem ep = make_energy_problem(
      1.0, BoundaryKind::Dirichlet, phi, ScalarFn::zero(1), g, 3.0);

  const BlowupReport rep = blowup_certificate(ep, 4.0);
  std::printf("E(0) = %.10g, lambda = %g, sampled sign violations: %zu\n",
              rep.e0, rep.lambda, rep.sign_violations.size());
  std::printf("certificate: %s\n", rep.certificate ? "yes" : "no");

  RunOptions opts;
  opts.energy_g = ep.g;
  const GridSpec grid{4.0, 8.0, 250, 400};
  const Trajectory traj =
      run(ep.base, grid, FarBoundary::DirichletZero, opts);
  std::printf("run status: %s at t = %.6f (max |u| = %.4g)\n",
              to_string(traj.status.kind), traj.status.t, traj.max_abs_u);
  return 0;
}
