#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace quarterwave {

/// Reference used for the order-2 corner identity of the first mixed
/// problem.  Derived is the consistency form obtained by evaluating the
/// equation at the corner,
///   mu''(0) = f(0,0,phi(0)) + F(0,0) + a^2 phi''(0);
/// Literal keeps the averaged form with the zeroth-order tail,
///   mu''(0) = (f(0,0,phi(0)) + f(0,0,mu(0)))/2 + F(0,0) + a^2 phi(0).
/// The two agree whenever mu(0) = phi(0) and phi''(0) = phi(0).
enum class SecondOrderForm { Derived, Literal };

inline const char* to_string(SecondOrderForm f) {
  return f == SecondOrderForm::Derived ? "derived" : "literal";
}

struct CornerResidual {
  int order;
  double value;
};

struct MatchingVerdict {
  // Empty when all corner conditions hold within tolerance.
  std::optional<int> first_violated_order;
  std::string statement;

  bool compatible() const noexcept { return !first_violated_order.has_value(); }
};

struct MatchingReport {
  BoundaryKind boundary;
  std::vector<CornerResidual> residuals;
  double tol;
  std::optional<SecondOrderForm> second_order_form;  // first mixed problem only
  MatchingVerdict verdict;
};

/// Derivative of half-line data at its corner point 0.  Analytic handles
/// win; otherwise a one-sided stencil keeps every sample inside the domain.
inline double corner_derivative(const ScalarFn& fn, int order,
                                FdConfig fd = {}) {
  if (const ScalarFn* d = fn.derivative(0, order)) return (*d)(0.0);
  fd.scheme = FdScheme::ForwardOneSided;
  return fd_derivative(fn, 0.0, order, fd);
}

/// True when every derivative consumed by the corner residuals carries an
/// analytic handle, so residuals are exact up to rounding.
inline bool corner_data_analytic(const MixedProblem& p) {
  if (p.boundary == BoundaryKind::Dirichlet)
    return p.mu.derivative(0, 1) && p.mu.derivative(0, 2) &&
           p.phi.derivative(0, 2);
  return p.mu.derivative(0, 1) && p.phi.derivative(0, 1) &&
         p.psi.derivative(0, 1);
}

inline double default_matching_tol(bool analytic) {
  return analytic ? 1e-8 : 1e-5;
}

/// Corner residuals of the first mixed problem (orders 0..2):
///   r0 = mu(0) - phi(0)
///   r1 = mu'(0) - psi(0)
///   r2 = mu''(0) - <order-2 reference per `form`>
inline std::vector<CornerResidual> residuals_dirichlet(
    const MixedProblem& p, SecondOrderForm form = SecondOrderForm::Derived,
    FdConfig fd = {}) {
  validate(p);
  if (p.boundary != BoundaryKind::Dirichlet)
    throw Error("residuals_dirichlet needs a first-mixed-problem instance");
  const double phi0 = p.phi(0.0);
  const double mu0 = p.mu(0.0);
  const double f_phi0 = p.f(0.0, 0.0, phi0);
  const double a2 = p.a * p.a;
  double ref2 = 0.0;
  if (form == SecondOrderForm::Derived) {
    ref2 = f_phi0 + p.forcing(0.0, 0.0) + a2 * corner_derivative(p.phi, 2, fd);
  } else {
    ref2 = 0.5 * (f_phi0 + p.f(0.0, 0.0, mu0)) + p.forcing(0.0, 0.0) +
           a2 * phi0;
  }
  return {
      {0, mu0 - phi0},
      {1, corner_derivative(p.mu, 1, fd) - p.psi(0.0)},
      {2, corner_derivative(p.mu, 2, fd) - ref2},
  };
}

/// Corner residuals of the second mixed problem (orders 0..1):
///   r0 = mu(0) - phi'(0)
///   r1 = mu'(0) - psi'(0)
inline std::vector<CornerResidual> residuals_neumann(const MixedProblem& p,
                                                     FdConfig fd = {}) {
  validate(p);
  if (p.boundary != BoundaryKind::Neumann)
    throw Error("residuals_neumann needs a second-mixed-problem instance");
  return {
      {0, p.mu(0.0) - corner_derivative(p.phi, 1, fd)},
      {1, corner_derivative(p.mu, 1, fd) - corner_derivative(p.psi, 1, fd)},
  };
}

/// Classifies corner residuals: all below tol means the data are compatible
/// with a classical solution; otherwise the lowest violated order certifies
/// that no classical solution exists on the closed quarter plane.
inline MatchingVerdict classify(std::span<const CornerResidual> residuals,
                                double tol, BoundaryKind boundary) {
  if (!(tol > 0.0)) throw Error("matching tolerance must be positive");
  const char* problem_name = boundary == BoundaryKind::Dirichlet
                                 ? "first mixed problem"
                                 : "second mixed problem";
  for (const auto& r : residuals) {
    if (std::abs(r.value) > tol) {
      MatchingVerdict v;
      v.first_violated_order = r.order;
      v.statement = std::string("order-") + std::to_string(r.order) +
                    " corner matching condition fails (|residual| = " +
                    std::to_string(std::abs(r.value)) + " > tol); the " +
                    problem_name +
                    " has no classical solution on the closed quarter plane";
      return v;
    }
  }
  MatchingVerdict v;
  v.statement = std::string("all corner matching conditions hold; the data "
                            "are compatible with a classical solution of "
                            "the ") + problem_name;
  return v;
}

/// Residuals plus verdict for either mixed problem.  When tol is not given
/// it defaults to 1e-8 with analytic derivatives and 1e-5 under finite
/// differences.
inline MatchingReport check_matching(
    const MixedProblem& p, std::optional<double> tol = std::nullopt,
    SecondOrderForm form = SecondOrderForm::Derived, FdConfig fd = {}) {
  MatchingReport rep{p.boundary, {}, 0.0, std::nullopt, {}};
  if (p.boundary == BoundaryKind::Dirichlet) {
    rep.residuals = residuals_dirichlet(p, form, fd);
    rep.second_order_form = form;
  } else {
    rep.residuals = residuals_neumann(p, fd);
  }
  rep.tol = tol ? *tol : default_matching_tol(corner_data_analytic(p));
  rep.verdict = classify(rep.residuals, rep.tol, p.boundary);
  return rep;
}

}  // namespace quarterwave
