#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "errors.hpp"
#include "scalar_fn.hpp"

namespace quarterwave {

enum class FdScheme { Central, ForwardOneSided };

/// Finite-difference settings.  When no step is given, order-1 stencils use
/// h = 1e-5 and order-2 stencils use h = 1e-4.
struct FdConfig {
  std::optional<double> h{};
  FdScheme scheme = FdScheme::Central;

  double step(int order) const {
    const double s = h ? *h : (order == 1 ? 1e-5 : 1e-4);
    if (!(s > 0.0)) throw Error("finite-difference step must be positive");
    return s;
  }
};

/// Finite-difference derivative of a one-variable function.
///
/// Central:          order 1: (f(x+h) - f(x-h)) / (2h)
///                   order 2: (f(x+h) - 2 f(x) + f(x-h)) / h^2
/// ForwardOneSided:  order 1: (-3 f(x) + 4 f(x+h) - f(x+2h)) / (2h)
///                   order 2: (2 f(x) - 5 f(x+h) + 4 f(x+2h) - f(x+3h)) / h^2
inline double fd_derivative(const ScalarFn& fn, double x, int order,
                            FdConfig cfg = {}) {
  if (fn.arity() != 1)
    throw ArityMismatch("fd_derivative needs a one-variable function");
  if (order != 1 && order != 2)
    throw Error("fd_derivative supports orders 1 and 2, got " +
                std::to_string(order));
  const double h = cfg.step(order);
  if (cfg.scheme == FdScheme::Central) {
    if (order == 1) return (fn(x + h) - fn(x - h)) / (2.0 * h);
    return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
  }
  if (order == 1) return (-3.0 * fn(x) + 4.0 * fn(x + h) - fn(x + 2 * h)) / (2.0 * h);
  return (2.0 * fn(x) - 5.0 * fn(x + h) + 4.0 * fn(x + 2 * h) - fn(x + 3 * h)) /
         (h * h);
}

/// Derivative that prefers an attached analytic handle and falls back to
/// finite differences.
inline double derivative(const ScalarFn& fn, double x, int order,
                         FdConfig cfg = {}) {
  if (const ScalarFn* d = fn.derivative(0, order)) return (*d)(x);
  return fd_derivative(fn, x, order, cfg);
}

/// Adaptive-quadrature settings.  The tolerance is relative to the scale of
/// the integral; max_depth bounds the interval-bisection recursion.
struct QuadConfig {
  double rel_tol = 1e-10;
  int max_depth = 50;
};

namespace quad_detail {

inline double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

struct AdaptState {
  const ScalarFn& fn;
  bool exhausted = false;
};

inline double adapt(AdaptState& st, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.fn(lm);
  const double frm = st.fn(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  const double refined = left + right + delta / 15.0;
  // Accept on the classic 1/15 Richardson criterion, when the correction is
  // at floating-point resolution, or when the interval cannot be split.
  const bool at_resolution =
      std::abs(delta) <= 30.0 * 2.2e-16 * (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= 15.0 * tol || at_resolution || !(a < lm && rm < b))
    return refined;
  if (depth <= 0) {
    st.exhausted = true;
    return refined;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace quad_detail

/// Integral of fn over [lo, hi] by adaptive Simpson quadrature.  Throws
/// MaxDepthExceeded (carrying the best estimate) when the recursion limit is
/// reached before the tolerance.
inline double integrate(const ScalarFn& fn, double lo, double hi,
                        QuadConfig cfg = {}) {
  if (fn.arity() != 1)
    throw ArityMismatch("integrate needs a one-variable function");
  if (!(cfg.rel_tol > 0.0)) throw Error("rel_tol must be positive");
  if (cfg.max_depth < 1) throw Error("max_depth must be at least 1");
  if (!(lo <= hi)) throw Error("integrate: lower bound exceeds upper bound");
  if (lo == hi) return 0.0;
  const double fa = fn(lo);
  const double fm = fn(0.5 * (lo + hi));
  const double fb = fn(hi);
  const double whole = quad_detail::simpson(fa, fm, fb, lo, hi);
  // Tolerance scale: an L1-style magnitude so that sign cancellation does not
  // demand unattainable absolute accuracy.  The endpoint stencil alone can
  // miss the bulk of the mass entirely, so a coarse scan backs it up.
  double scan = 0.0;
  for (int i = 0; i < 33; ++i)
    scan += std::abs(fn(lo + (hi - lo) * (i + 0.5) / 33.0));
  scan *= (hi - lo) / 33.0;
  const double scale = std::max(
      (hi - lo) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb)),
      scan);
  const double tol = cfg.rel_tol * std::max(std::abs(whole), scale);
  quad_detail::AdaptState st{fn};
  const double value =
      quad_detail::adapt(st, lo, hi, fa, fm, fb, whole, tol, cfg.max_depth);
  if (st.exhausted)
    throw MaxDepthExceeded(value,
                           "adaptive quadrature exceeded max depth " +
                               std::to_string(cfg.max_depth));
  return value;
}

/// Antiderivative G(z) = integral of g from 0 to z (signed for z < 0).
inline double potential(const ScalarFn& g, double z, QuadConfig cfg = {}) {
  if (z == 0.0) return 0.0;
  if (z > 0.0) return integrate(g, 0.0, z, cfg);
  return -integrate(g, z, 0.0, cfg);
}

}  // namespace quarterwave
