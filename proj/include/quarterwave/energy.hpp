#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace quarterwave {

/// Problem instance in the shape required by the negative-energy
/// nonexistence criterion: f(t,x,z) = -g(z) with no forcing, homogeneous
/// boundary data, and initial data supported in [0, support_bound].
struct EnergyProblem {
  MixedProblem base;
  ScalarFn g;            // one variable; g(0) = 0
  double support_bound;  // X with phi, psi = 0 for x >= X
};

/// Convenience constructor wiring f = -g(z), F = 0, mu = 0.
inline EnergyProblem make_energy_problem(double a, BoundaryKind boundary,
                                         ScalarFn phi, ScalarFn psi,
                                         ScalarFn g, double support_bound) {
  if (g.arity() != 1) throw ArityMismatch("g must take one argument");
  ScalarFn f = ScalarFn::ternary(
      [g](double, double, double z) { return -g(z); }, "-g(z)");
  MixedProblem base{a,
                    std::move(f),
                    ScalarFn::zero(2),
                    std::move(phi),
                    std::move(psi),
                    ScalarFn::zero(1),
                    boundary};
  return EnergyProblem{std::move(base), std::move(g), support_bound};
}

/// Sampled verification that an EnergyProblem actually has the structure
/// the criterion assumes.  Sampling cannot prove the hypotheses, only
/// falsify them; failures list which one broke.
struct StructuralChecks {
  bool g_vanishes_at_zero = false;
  bool forcing_identically_zero = false;
  bool boundary_data_identically_zero = false;
  bool initial_data_compactly_supported = false;

  bool all_passed() const {
    return g_vanishes_at_zero && forcing_identically_zero &&
           boundary_data_identically_zero && initial_data_compactly_supported;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    if (!g_vanishes_at_zero) out.push_back("g(0) != 0");
    if (!forcing_identically_zero) out.push_back("F does not vanish");
    if (!boundary_data_identically_zero) out.push_back("mu does not vanish");
    if (!initial_data_compactly_supported)
      out.push_back("phi or psi does not vanish beyond the support bound");
    return out;
  }
};

inline StructuralChecks structural_checks(const EnergyProblem& ep) {
  validate(ep.base);
  if (ep.g.arity() != 1) throw ArityMismatch("g must take one argument");
  if (!(ep.support_bound > 0.0))
    throw Error("support bound must be positive");
  constexpr double kTol = 1e-12;
  const double X = ep.support_bound;
  StructuralChecks out;
  out.g_vanishes_at_zero = std::abs(ep.g(0.0)) <= kTol;

  out.forcing_identically_zero = true;
  for (int i = 0; i <= 32 && out.forcing_identically_zero; ++i)
    for (int j = 0; j <= 32; ++j)
      if (std::abs(ep.base.forcing(X * i / 32.0, X * j / 32.0)) > kTol) {
        out.forcing_identically_zero = false;
        break;
      }

  out.boundary_data_identically_zero = true;
  for (int i = 0; i <= 100; ++i)
    if (std::abs(ep.base.mu(X * i / 100.0)) > kTol) {
      out.boundary_data_identically_zero = false;
      break;
    }

  out.initial_data_compactly_supported = true;
  for (int i = 0; i <= 100; ++i) {
    const double x = X + X * i / 100.0;
    if (std::abs(ep.base.phi(x)) > kTol || std::abs(ep.base.psi(x)) > kTol) {
      out.initial_data_compactly_supported = false;
      break;
    }
  }
  return out;
}

/// Energy of the initial data,
///   E(0) = integral over [0, X] of (psi^2 + a^2 phi'^2)/2 + G(phi),
/// with G the antiderivative of g vanishing at 0.  phi' uses an analytic
/// handle when present, else finite differences (one-sided next to x = 0).
inline double initial_energy(const EnergyProblem& ep, QuadConfig quad = {}) {
  validate(ep.base);
  if (!(ep.support_bound > 0.0))
    throw Error("support bound must be positive");
  const double a2 = ep.base.a * ep.base.a;
  const ScalarFn& phi = ep.base.phi;
  const ScalarFn& psi = ep.base.psi;
  const ScalarFn& g = ep.g;
  auto density = [phi, psi, g, a2, quad](double x) {
    FdConfig fd;
    if (!phi.derivative(0, 1) && x < fd.step(1))
      fd.scheme = FdScheme::ForwardOneSided;
    const double dphi = derivative(phi, x, 1, fd);
    const double p = psi(x);
    return 0.5 * (p * p + a2 * dphi * dphi) + potential(g, phi(x), quad);
  };
  return integrate(ScalarFn::unary(density, "energy density"), 0.0,
                   ep.support_bound, quad);
}

struct SignViolation {
  double z;
  double gap;  // z*g(z) - lambda*G(z), positive when the condition fails
};

/// Samples the structural sign condition z*g(z) <= lambda*G(z) at n
/// equispaced points of [z_lo, z_hi].  Returns the sampled failures.
inline std::vector<SignViolation> sign_condition(const ScalarFn& g,
                                                 double lambda, double z_lo,
                                                 double z_hi, int n,
                                                 QuadConfig quad = {}) {
  if (g.arity() != 1) throw ArityMismatch("g must take one argument");
  if (n < 2) throw Error("sign condition needs at least 2 samples");
  if (!(z_lo < z_hi)) throw Error("sign condition needs z_lo < z_hi");
  std::vector<SignViolation> out;
  for (int i = 0; i < n; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (n - 1);
    const double lg = lambda * potential(g, z, quad);
    const double gap = z * g(z) - lg;
    if (gap > 1e-10 * (1.0 + std::abs(lg))) out.push_back({z, gap});
  }
  return out;
}

struct SignSampling {
  double z_lo = 0.0;
  double z_hi = 0.0;
  int samples = 0;
};

struct BlowupReport {
  double e0 = 0.0;
  double lambda = 0.0;
  SignSampling sampling;
  std::vector<SignViolation> sign_violations;
  StructuralChecks structure;
  bool certificate = false;           // nonexistence certificate issued
  std::vector<std::string> reasons;   // why not, when certificate is false
  std::vector<std::string> notes;
};

struct CertificateConfig {
  int sign_samples = 101;
  double range_factor = 1.5;  // sampled z range is +-factor * max|phi|
  std::optional<std::pair<double, double>> z_range;  // overrides the factor
  QuadConfig quad{};
};

/// Negative-energy nonexistence certificate: structure + sampled sign
/// condition + E(0) < 0 together certify that no global classical solution
/// exists (solutions blow up in finite time).
inline BlowupReport blowup_certificate(const EnergyProblem& ep, double lambda,
                                       CertificateConfig cfg = {}) {
  BlowupReport rep;
  rep.lambda = lambda;
  rep.structure = structural_checks(ep);
  rep.e0 = initial_energy(ep, cfg.quad);

  if (cfg.z_range) {
    rep.sampling = {cfg.z_range->first, cfg.z_range->second, cfg.sign_samples};
  } else {
    double amp = 0.0;
    for (int i = 0; i <= 1000; ++i)
      amp = std::max(amp, std::abs(ep.base.phi(ep.support_bound * i / 1000.0)));
    if (amp > 0.0)
      rep.sampling = {-cfg.range_factor * amp, cfg.range_factor * amp,
                      cfg.sign_samples};
  }
  if (rep.sampling.samples > 0)
    rep.sign_violations =
        sign_condition(ep.g, lambda, rep.sampling.z_lo, rep.sampling.z_hi,
                       rep.sampling.samples, cfg.quad);

  if (!rep.structure.all_passed())
    for (const auto& f : rep.structure.failures())
      rep.reasons.push_back("structural check failed: " + f);
  if (!rep.sign_violations.empty())
    rep.reasons.push_back("sign condition z*g(z) <= lambda*G(z) fails at " +
                          std::to_string(rep.sign_violations.size()) +
                          " sampled point(s)");
  if (!(rep.e0 < 0.0)) rep.reasons.push_back("initial energy is not negative");
  rep.certificate = rep.reasons.empty();

  rep.notes = {
      "E(0) evaluated as the integral of (psi^2 + a^2*phi'^2)/2 + G(phi) "
      "over [0, support_bound]",
      "sign condition checked on a finite sample; an empty violation list "
      "falsifies nothing beyond the sampled points",
      "the criterion applies to either boundary operator as long as the "
      "boundary data vanish identically",
  };
  return rep;
}

}  // namespace quarterwave
