#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "errors.hpp"
#include "problem.hpp"

namespace quarterwave {

struct PowerParams {
  double beta;
  double gamma;
};

/// Parameters of the power-law solution u(t) = beta * t^gamma of
/// u_tt = u^alpha for 0 < alpha < 1:
///
///   gamma = 2 / (1 - alpha),
///   beta  = (gamma * (gamma - 1))^(1 / (alpha - 1)).
///
/// Two equivalent closed forms of beta are evaluated as a cross-check and
/// must agree with the definition to 1e-12 relative:
///
///   beta = 2^(1/(alpha-1)) * (alpha - 3 + 4/(alpha+1))^(1/(1-alpha))
///        = 2^(1/(alpha-1)) * ((alpha+1)/(alpha^2 - 2 alpha + 1))^(1/(alpha-1))
inline PowerParams power_params(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw AlphaOutOfRange("alpha must lie strictly between 0 and 1, got " +
                          std::to_string(alpha));
  const double gamma = 2.0 / (1.0 - alpha);
  const double beta = std::pow(gamma * (gamma - 1.0), 1.0 / (alpha - 1.0));
  const double form_a =
      std::pow(2.0, 1.0 / (alpha - 1.0)) *
      std::pow(alpha - 3.0 + 4.0 / (alpha + 1.0), 1.0 / (1.0 - alpha));
  const double form_b =
      std::pow(2.0, 1.0 / (alpha - 1.0)) *
      std::pow((alpha + 1.0) / (alpha * alpha - 2.0 * alpha + 1.0),
               1.0 / (alpha - 1.0));
  auto rel = [beta](double v) { return std::abs(v - beta) / beta; };
  if (rel(form_a) > 1e-12 || rel(form_b) > 1e-12)
    throw Error("power_params: closed forms disagree beyond 1e-12");
  return {beta, gamma};
}

/// Member of the glued power-law family
///
///   u(t) = 0                      for t <= s,
///   u(t) = beta * (t - s)^gamma   for t >  s,
///
/// which solves the second mixed problem for u_tt - a^2 u_xx = u^alpha with
/// zero initial and boundary data (the solution is x-independent, so its
/// x-derivatives vanish identically).  Each shift s >= 0 gives a distinct
/// classical solution; beta = 0 gives the trivial one.
class PowerSolution {
 public:
  static PowerSolution glued(double alpha, double shift,
                             BoundaryKind boundary = BoundaryKind::Neumann) {
    if (boundary != BoundaryKind::Neumann)
      throw Error("the power-law family solves only the second mixed problem "
                  "(prescribed u_x at x = 0)");
    if (!(shift >= 0.0)) throw Error("shift must be nonnegative");
    const PowerParams p = power_params(alpha);
    return PowerSolution(alpha, p.beta, p.gamma, shift);
  }

  static PowerSolution trivial(double alpha, double shift = 0.0) {
    const PowerParams p = power_params(alpha);  // validates alpha
    return PowerSolution(alpha, 0.0, p.gamma, shift);
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double shift() const noexcept { return shift_; }
  bool is_trivial() const noexcept { return beta_ == 0.0; }

  /// Time derivative of order deriv (0..2) at time t >= 0.
  double eval(double t, int deriv = 0) const {
    if (deriv < 0 || deriv > 2)
      throw Error("PowerSolution::eval supports derivative orders 0..2");
    const double tau = t - shift_;
    if (tau <= 0.0 || beta_ == 0.0) return 0.0;
    switch (deriv) {
      case 0: return beta_ * std::pow(tau, gamma_);
      case 1: return beta_ * gamma_ * std::pow(tau, gamma_ - 1.0);
      default:
        return beta_ * gamma_ * (gamma_ - 1.0) * std::pow(tau, gamma_ - 2.0);
    }
  }

  /// The problem instance this family solves: f(t,x,z) = z^alpha with zero
  /// data and homogeneous Neumann boundary.
  MixedProblem problem(double a = 1.0) const {
    const double alpha = alpha_;
    ScalarFn f = ScalarFn::ternary(
        [alpha](double, double, double z) {
          if (z == 0.0) return 0.0;
          if (z < 0.0)
            throw DomainError("z^alpha needs z >= 0 for fractional alpha");
          return std::pow(z, alpha);
        },
        "z^alpha");
    return MixedProblem{a,
                        std::move(f),
                        ScalarFn::zero(2),
                        ScalarFn::zero(1),
                        ScalarFn::zero(1),
                        ScalarFn::zero(1),
                        BoundaryKind::Neumann};
  }

 private:
  PowerSolution(double alpha, double beta, double gamma, double shift)
      : alpha_(alpha), beta_(beta), gamma_(gamma), shift_(shift) {}

  double alpha_;
  double beta_;
  double gamma_;
  double shift_;
};

/// max over the grid of |u_tt - u^alpha|; the x-derivative term vanishes
/// identically for this family.
inline double pde_residual(const PowerSolution& u, double a,
                           std::span<const double> t_grid) {
  (void)a;  // present in the operator, absent from the residual of a
            // x-independent solution
  double worst = 0.0;
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw Error("pde_residual needs t >= 0");
    const double v = u.eval(t, 0);
    const double utt = u.eval(t, 2);
    const double r = std::abs(utt - (v == 0.0 ? 0.0 : std::pow(v, u.alpha())));
    worst = std::max(worst, r);
  }
  return worst;
}

/// One-sided mismatch across the gluing time: value, first, and second time
/// derivative of the nonzero branch at t = s + h.  All three tend to 0 as
/// h -> 0 because gamma > 2, which is what makes the glued function twice
/// continuously differentiable.
inline std::array<double, 3> seam_gap(const PowerSolution& u, double h) {
  if (!(u.shift() > 0.0)) throw Error("seam_gap needs a positive shift");
  if (!(h > 0.0 && h < u.shift()))
    throw Error("seam_gap needs 0 < h < shift");
  return {u.eval(u.shift() + h, 0), u.eval(u.shift() + h, 1),
          u.eval(u.shift() + h, 2)};
}

}  // namespace quarterwave
