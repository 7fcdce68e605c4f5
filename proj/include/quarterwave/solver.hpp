#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace quarterwave {

using Field = std::vector<double>;

/// Uniform grid over [0, t_final] x [0, length] with nt time steps and nx
/// space cells (nx + 1 nodes).
struct GridSpec {
  double t_final;
  double length;
  int nt;
  int nx;

  double dt() const { return t_final / nt; }
  double dx() const { return length / nx; }
  double nu(double a) const { return a * dt() / dx(); }
};

inline void validate(const GridSpec& g) {
  if (!(g.t_final > 0.0)) throw Error("grid: t_final must be positive");
  if (!(g.length > 0.0)) throw Error("grid: length must be positive");
  if (g.nt < 2) throw Error("grid: nt must be at least 2");
  if (g.nx < 2) throw Error("grid: nx must be at least 2");
}

inline void check_cfl(const GridSpec& g, double a) {
  const double nu = g.nu(a);
  if (!(nu <= 1.0 + 1e-9))
    throw CflViolation(nu, "CFL bound violated: a*dt/dx = " +
                               std::to_string(nu) + " > 1");
}

/// Truncation of the quarter plane at x = length: either a pinned value
/// u = 0 or a reflecting u_x = 0.  Meaningful only while the far end stays
/// outside the domain of dependence of the data.
enum class FarBoundary { DirichletZero, NeumannZero };

inline const char* to_string(FarBoundary f) {
  return f == FarBoundary::DirichletZero ? "dirichlet_zero" : "neumann_zero";
}

namespace solver_detail {

inline double eval_sources(const MixedProblem& p, double t, double x,
                           double u) {
  try {
    return p.f(t, x, u) + p.forcing(t, x);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " (at t = " + std::to_string(t) +
                      ", x = " + std::to_string(x) + ")");
  }
}

}  // namespace solver_detail

/// First two time levels.  u0 samples phi; u1 is the second-order Taylor
/// start
///   u1 = phi + dt*psi + dt^2/2 * (a^2 phi'' + f(0,x,phi) + F(0,x)),
/// where phi'' uses an analytic handle when present and otherwise central
/// differences of the sampled values (one-sided at the ends).
inline std::pair<Field, Field> init_levels(const MixedProblem& p,
                                           const GridSpec& grid) {
  validate(p);
  validate(grid);
  check_cfl(grid, p.a);
  const int nx = grid.nx;
  const double dx = grid.dx();
  const double dt = grid.dt();
  Field u0(nx + 1), u1(nx + 1);
  for (int j = 0; j <= nx; ++j) u0[j] = p.phi(j * dx);

  Field phidd(nx + 1);
  if (const ScalarFn* d2 = p.phi.derivative(0, 2)) {
    for (int j = 0; j <= nx; ++j) phidd[j] = (*d2)(j * dx);
  } else {
    const double inv = 1.0 / (dx * dx);
    for (int j = 1; j < nx; ++j)
      phidd[j] = (u0[j + 1] - 2.0 * u0[j] + u0[j - 1]) * inv;
    if (nx >= 3) {
      phidd[0] = (2.0 * u0[0] - 5.0 * u0[1] + 4.0 * u0[2] - u0[3]) * inv;
      phidd[nx] =
          (2.0 * u0[nx] - 5.0 * u0[nx - 1] + 4.0 * u0[nx - 2] - u0[nx - 3]) *
          inv;
    } else {
      phidd[0] = phidd[1];
      phidd[nx] = phidd[nx - 1];
    }
  }

  const double a2 = p.a * p.a;
  for (int j = 0; j <= nx; ++j) {
    const double x = j * dx;
    u1[j] = u0[j] + dt * p.psi(x) +
            0.5 * dt * dt *
                (a2 * phidd[j] + solver_detail::eval_sources(p, 0.0, x, u0[j]));
  }
  return {std::move(u0), std::move(u1)};
}

/// One leapfrog step: given levels at t_cur - dt and t_cur, produces the
/// level at t_cur + dt.
///
///   u_next_j = 2 u_cur_j - u_prev_j + nu^2 (u_cur_{j+1} - 2 u_cur_j +
///              u_cur_{j-1}) + dt^2 (f(t_cur, x_j, u_cur_j) + F(t_cur, x_j))
///
/// x = 0:  Dirichlet writes u_next_0 = mu(t_cur + dt); Neumann applies the
/// interior stencil with the ghost value u_{-1} = u_1 - 2 dx mu(t_cur).
/// x = L:  DirichletZero pins 0; NeumannZero uses the ghost u_{nx+1} =
/// u_{nx-1}.
inline Field step(const MixedProblem& p, const GridSpec& grid, FarBoundary far,
                  double t_cur, const Field& u_prev, const Field& u_cur) {
  const int nx = grid.nx;
  if (static_cast<int>(u_prev.size()) != nx + 1 ||
      static_cast<int>(u_cur.size()) != nx + 1)
    throw Error("step: field size does not match the grid");
  const double dt = grid.dt();
  const double dx = grid.dx();
  const double nu2 = grid.nu(p.a) * grid.nu(p.a);
  const double dt2 = dt * dt;
  Field u_next(nx + 1);

  auto update = [&](int j, double left, double right) {
    const double lap = right - 2.0 * u_cur[j] + left;
    u_next[j] = 2.0 * u_cur[j] - u_prev[j] + nu2 * lap +
                dt2 * solver_detail::eval_sources(p, t_cur, j * dx, u_cur[j]);
  };

  for (int j = 1; j < nx; ++j) update(j, u_cur[j - 1], u_cur[j + 1]);

  if (p.boundary == BoundaryKind::Dirichlet) {
    u_next[0] = p.mu(t_cur + dt);
  } else {
    update(0, u_cur[1] - 2.0 * dx * p.mu(t_cur), u_cur[1]);
  }

  if (far == FarBoundary::DirichletZero) {
    u_next[nx] = 0.0;
  } else {
    update(nx, u_cur[nx - 1], u_cur[nx - 1]);
  }
  return u_next;
}

/// Discrete energy of a level pair (u at t, u_next at t + dt), associated
/// with the half step t + dt/2:
///
///   E_h = dx * sum_j [ ((u_next_j - u_j)/dt)^2 / 2
///                      + a^2 ((m_{j+1} - m_j)/dx)^2 / 2 + G(m_j) ],
///
/// where m = (u + u_next)/2 and the sum runs over j = 0..nx-1.
inline double discrete_energy(const ScalarFn& g, double a,
                              const GridSpec& grid, const Field& u_cur,
                              const Field& u_next, QuadConfig quad = {}) {
  const int nx = grid.nx;
  const double dt = grid.dt();
  const double dx = grid.dx();
  const double a2 = a * a;
  double sum = 0.0;
  for (int j = 0; j < nx; ++j) {
    const double ut = (u_next[j] - u_cur[j]) / dt;
    const double mj = 0.5 * (u_next[j] + u_cur[j]);
    const double mj1 = 0.5 * (u_next[j + 1] + u_cur[j + 1]);
    const double ux = (mj1 - mj) / dx;
    sum += 0.5 * (ut * ut + a2 * ux * ux) + potential(g, mj, quad);
  }
  return dx * sum;
}

enum class RunStatusKind { Completed, BlowUpDetected, NumericalFailure };

inline const char* to_string(RunStatusKind k) {
  switch (k) {
    case RunStatusKind::Completed: return "completed";
    case RunStatusKind::BlowUpDetected: return "blow-up-detected";
    default: return "numerical-failure";
  }
}

struct RunStatus {
  RunStatusKind kind = RunStatusKind::Completed;
  double t = 0.0;  // detection time for BlowUpDetected / NumericalFailure
  std::string detail;
};

struct Snapshot {
  double t;
  Field u;
};

struct EnergySample {
  double t;  // half-step time
  double value;
};

struct Trajectory {
  GridSpec grid;
  RunStatus status;
  std::vector<Snapshot> snapshots;
  std::vector<EnergySample> energy;  // present when a g was supplied
  double max_abs_u = 0.0;
  double final_time = 0.0;
  Field u_final;  // last finite level reached
};

struct RunOptions {
  double blowup_threshold = 1e6;
  int snapshot_stride = 0;  // 0 keeps only the first and last level
  std::optional<ScalarFn> energy_g;
  QuadConfig quad{};
};

namespace solver_detail {

inline bool finite_field(const Field& u) {
  for (double v : u)
    if (!std::isfinite(v)) return false;
  return true;
}

inline double max_abs(const Field& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

/// March from the level pair (u_prev at t_base, u_cur at t_base + dt) until
/// t_stop, recording snapshots, the energy series, and blow-up.
inline Trajectory advance(const MixedProblem& p, const GridSpec& grid,
                          FarBoundary far, double t_base, Field u_prev,
                          Field u_cur, const RunOptions& opts) {
  const double dt = grid.dt();
  Trajectory out;
  out.grid = grid;

  if (!finite_field(u_prev) || !finite_field(u_cur)) {
    out.status = {RunStatusKind::NumericalFailure, t_base,
                  "non-finite state at the start of the march"};
    out.final_time = t_base;
    return out;
  }

  const long nsteps = std::lround((grid.t_final - (t_base + dt)) / dt);
  auto level_time = [&](long k) { return t_base + k * dt; };

  out.snapshots.push_back({t_base, u_prev});
  out.max_abs_u = std::max(max_abs(u_prev), max_abs(u_cur));
  if (opts.energy_g)
    out.energy.push_back({t_base + 0.5 * dt,
                          discrete_energy(*opts.energy_g, p.a, grid, u_prev,
                                          u_cur, opts.quad)});
  if (opts.snapshot_stride > 0 && 1 % opts.snapshot_stride == 0 && nsteps > 0)
    out.snapshots.push_back({level_time(1), u_cur});

  long k = 1;  // index of u_cur
  for (long n = 0; n < nsteps; ++n) {
    Field u_next = step(p, grid, far, level_time(k), u_prev, u_cur);
    const long k_next = k + 1;
    const double t_next = level_time(k_next);
    const bool finite = finite_field(u_next);
    const double amp = finite ? max_abs(u_next) : 0.0;

    if (!finite || amp > opts.blowup_threshold) {
      out.status = {RunStatusKind::BlowUpDetected, t_next,
                    finite ? "amplitude exceeded the blow-up threshold"
                           : "non-finite value produced"};
      if (finite) {
        out.max_abs_u = std::max(out.max_abs_u, amp);
        out.snapshots.push_back({t_next, u_next});
        out.final_time = t_next;
        out.u_final = std::move(u_next);
      } else {
        out.final_time = level_time(k);
        out.u_final = std::move(u_cur);
      }
      return out;
    }

    out.max_abs_u = std::max(out.max_abs_u, amp);
    if (opts.energy_g)
      out.energy.push_back({level_time(k) + 0.5 * dt,
                            discrete_energy(*opts.energy_g, p.a, grid, u_cur,
                                            u_next, opts.quad)});
    const bool last = n + 1 == nsteps;
    if (!last && opts.snapshot_stride > 0 &&
        k_next % opts.snapshot_stride == 0)
      out.snapshots.push_back({t_next, u_next});

    u_prev = std::move(u_cur);
    u_cur = std::move(u_next);
    k = k_next;
  }

  out.status = {RunStatusKind::Completed, level_time(k), ""};
  out.final_time = level_time(k);
  out.snapshots.push_back({out.final_time, u_cur});
  out.u_final = std::move(u_cur);
  return out;
}

}  // namespace solver_detail

/// Integrates the mixed problem from its initial data up to t_final.
inline Trajectory run(const MixedProblem& p, const GridSpec& grid,
                      FarBoundary far, const RunOptions& opts = {}) {
  validate(p);
  validate(grid);
  check_cfl(grid, p.a);
  auto [u0, u1] = init_levels(p, grid);
  return solver_detail::advance(p, grid, far, 0.0, std::move(u0),
                                std::move(u1), opts);
}

/// Integrates from an injected state: levels.first at t0 - dt, levels.second
/// at t0.  Used to continue a run or to start from a known closed form.
inline Trajectory run_from_state(const MixedProblem& p, const GridSpec& grid,
                                 FarBoundary far, double t0,
                                 std::pair<Field, Field> levels,
                                 const RunOptions& opts = {}) {
  validate(p);
  validate(grid);
  check_cfl(grid, p.a);
  if (!(t0 >= 0.0 && t0 <= grid.t_final))
    throw Error("run_from_state: t0 must lie in [0, t_final]");
  return solver_detail::advance(p, grid, far, t0 - grid.dt(),
                                std::move(levels.first),
                                std::move(levels.second), opts);
}

}  // namespace quarterwave
