#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"
#include "scalar_fn.hpp"

namespace quarterwave {

/// Boundary operator applied at x = 0: the first mixed problem prescribes
/// u(t,0) = mu(t), the second prescribes u_x(t,0) = mu(t).
enum class BoundaryKind { Dirichlet, Neumann };

inline const char* to_string(BoundaryKind k) {
  return k == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

/// Mixed problem for the telegraph equation with nonlinear potential on the
/// quarter plane t > 0, x > 0:
///
///   u_tt - a^2 u_xx - f(t, x, u) = F(t, x)
///   u(0, x) = phi(x),  u_t(0, x) = psi(x),  B[u](t, 0) = mu(t)
struct MixedProblem {
  double a;          // wave speed, > 0
  ScalarFn f;        // nonlinear potential term, (t, x, z)
  ScalarFn forcing;  // right-hand side F, (t, x)
  ScalarFn phi;      // initial displacement, (x)
  ScalarFn psi;      // initial velocity, (x)
  ScalarFn mu;       // boundary data, (t)
  BoundaryKind boundary = BoundaryKind::Dirichlet;
};

inline void validate(const MixedProblem& p) {
  if (!(p.a > 0.0))
    throw NonPositiveSpeed("wave speed must be positive, got a = " +
                           std::to_string(p.a));
  auto expect = [](const ScalarFn& fn, int arity, const char* field) {
    if (fn.arity() != arity)
      throw ArityMismatch(std::string(field) + " must take " +
                          std::to_string(arity) + " argument(s), got " +
                          std::to_string(fn.arity()));
  };
  expect(p.f, 3, "f");
  expect(p.forcing, 2, "F");
  expect(p.phi, 1, "phi");
  expect(p.psi, 1, "psi");
  expect(p.mu, 1, "mu");
}

}  // namespace quarterwave
