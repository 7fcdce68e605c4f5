#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "config.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "json_writer.hpp"
#include "matching.hpp"
#include "problem.hpp"
#include "solver.hpp"

namespace quarterwave {

namespace cli_detail {

inline void write_file(const std::string& path, const std::string& content,
                       std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "warning: cannot write '" << path << "'\n";
    return;
  }
  f << content;
}

inline JsonValue matching_json(const MatchingReport& rep) {
  JsonValue doc = JsonValue::object();
  doc.set("boundary", JsonValue::string(to_string(rep.boundary)));
  JsonValue residuals = JsonValue::array();
  for (const auto& r : rep.residuals) {
    JsonValue row = JsonValue::object();
    row.set("order", JsonValue::integer(r.order));
    row.set("value", JsonValue::number(r.value));
    residuals.push(std::move(row));
  }
  doc.set("residuals", std::move(residuals));
  doc.set("tol", JsonValue::number(rep.tol));
  doc.set("form", rep.second_order_form
                      ? JsonValue::string(to_string(*rep.second_order_form))
                      : JsonValue::null());
  doc.set("verdict",
          JsonValue::string(rep.verdict.compatible()
                                ? "compatible"
                                : "nonexistence-certificate"));
  doc.set("first_violated_order",
          rep.verdict.first_violated_order
              ? JsonValue::integer(*rep.verdict.first_violated_order)
              : JsonValue::null());
  doc.set("statement", JsonValue::string(rep.verdict.statement));
  doc.set("assertion_cited",
          JsonValue::string(rep.boundary == BoundaryKind::Dirichlet
                                ? "matching-conditions-first-mixed-problem"
                                : "matching-conditions-second-mixed-problem"));
  return doc;
}

inline std::string matching_csv(const MatchingReport& rep) {
  std::string out = "order,value\n";
  for (const auto& r : rep.residuals)
    out += std::to_string(r.order) + "," + json_number(r.value) + "\n";
  return out;
}

inline JsonValue energy_json(const BlowupReport& rep) {
  JsonValue doc = JsonValue::object();
  doc.set("E0", JsonValue::number(rep.e0));
  doc.set("lambda", JsonValue::number(rep.lambda));
  JsonValue sign = JsonValue::object();
  JsonValue range = JsonValue::array();
  range.push(JsonValue::number(rep.sampling.z_lo));
  range.push(JsonValue::number(rep.sampling.z_hi));
  sign.set("range", std::move(range));
  sign.set("samples", JsonValue::integer(rep.sampling.samples));
  JsonValue violations = JsonValue::array();
  for (const auto& v : rep.sign_violations) {
    JsonValue row = JsonValue::object();
    row.set("z", JsonValue::number(v.z));
    row.set("gap", JsonValue::number(v.gap));
    violations.push(std::move(row));
  }
  sign.set("violations", std::move(violations));
  doc.set("sign_condition", std::move(sign));
  JsonValue structural = JsonValue::object();
  structural.set("g_vanishes_at_zero",
                 JsonValue::boolean(rep.structure.g_vanishes_at_zero));
  structural.set("forcing_identically_zero",
                 JsonValue::boolean(rep.structure.forcing_identically_zero));
  structural.set(
      "boundary_data_identically_zero",
      JsonValue::boolean(rep.structure.boundary_data_identically_zero));
  structural.set(
      "initial_data_compactly_supported",
      JsonValue::boolean(rep.structure.initial_data_compactly_supported));
  doc.set("structural", std::move(structural));
  doc.set("verdict", JsonValue::string(rep.certificate
                                           ? "nonexistence-certificate"
                                           : "criteria-not-met"));
  JsonValue reasons = JsonValue::array();
  for (const auto& r : rep.reasons) reasons.push(JsonValue::string(r));
  doc.set("reasons", std::move(reasons));
  JsonValue notes = JsonValue::array();
  for (const auto& n : rep.notes) notes.push(JsonValue::string(n));
  doc.set("notes", std::move(notes));
  doc.set("assertion_cited", JsonValue::string("negative-energy-criterion"));
  return doc;
}

inline std::string energy_csv(const BlowupReport& rep) {
  std::string out = "z,gap\n";
  for (const auto& v : rep.sign_violations)
    out += json_number(v.z) + "," + json_number(v.gap) + "\n";
  return out;
}

inline std::string snapshots_csv(const Trajectory& traj) {
  std::string out = "t,x,u\n";
  const double dx = traj.grid.dx();
  for (const auto& snap : traj.snapshots)
    for (std::size_t j = 0; j < snap.u.size(); ++j)
      out += json_number(snap.t) + "," + json_number(j * dx) + "," +
             json_number(snap.u[j]) + "\n";
  return out;
}

inline std::string energy_series_csv(const Trajectory& traj) {
  std::string out = "t,E\n";
  for (const auto& s : traj.energy)
    out += json_number(s.t) + "," + json_number(s.value) + "\n";
  return out;
}

inline JsonValue summary_json(const Trajectory& traj, double a) {
  JsonValue doc = JsonValue::object();
  doc.set("status", JsonValue::string(to_string(traj.status.kind)));
  if (traj.status.kind != RunStatusKind::Completed) {
    doc.set("t_detect", JsonValue::number(traj.status.t));
    doc.set("detail", JsonValue::string(traj.status.detail));
  }
  JsonValue grid = JsonValue::object();
  grid.set("dt", JsonValue::number(traj.grid.dt()));
  grid.set("dx", JsonValue::number(traj.grid.dx()));
  grid.set("nu", JsonValue::number(traj.grid.nu(a)));
  doc.set("grid", std::move(grid));
  doc.set("max_abs_u", JsonValue::number(traj.max_abs_u));
  doc.set("final_time", JsonValue::number(traj.final_time));
  return doc;
}

struct Common {
  std::optional<std::string> config_path;
  std::optional<std::string> output_prefix;
  std::optional<std::string> format;
};

inline RunConfig require_config(const Common& c, const char* cmd) {
  if (!c.config_path)
    throw ConfigError(std::string(cmd) + " needs --config <file>");
  return load_run_config_file(*c.config_path);
}

inline std::string effective_format(const Common& c, const RunConfig& rc) {
  const std::string f = c.format ? *c.format : rc.output.format;
  if (f != "csv" && f != "json")
    throw ConfigError("format must be csv or json, got '" + f + "'");
  return f;
}

inline std::optional<std::string> effective_prefix(const Common& c,
                                                   const RunConfig& rc,
                                                   bool files_expected) {
  if (c.output_prefix) return c.output_prefix;
  if (files_expected) return rc.output.prefix;
  return std::nullopt;
}

inline int cmd_check_matching(const Common& common, std::ostream& out,
                              std::ostream& err) {
  const RunConfig rc = require_config(common, "check-matching");
  const MixedProblem p = build_problem(rc.problem);
  const MatchingReport rep =
      check_matching(p, rc.checks.tol, rc.checks.form);
  const std::string format = effective_format(common, rc);
  out << (format == "json" ? matching_json(rep).dump() : matching_csv(rep));
  if (auto prefix = effective_prefix(common, rc, false))
    write_file(*prefix + "_matching.json", matching_json(rep).dump(), err);
  return 0;
}

inline int cmd_check_energy(const Common& common, std::ostream& out,
                            std::ostream& err) {
  const RunConfig rc = require_config(common, "check-energy");
  if (!rc.problem.g)
    throw ConfigError("check-energy needs key 'g' in [problem]");
  if (!rc.checks.lambda)
    throw ConfigError("check-energy needs key 'lambda' in [checks]");
  if (!rc.checks.support_bound)
    throw ConfigError("check-energy needs key 'support_bound' in [checks]");
  const MixedProblem base = build_problem(rc.problem);
  EnergyProblem ep{base, *build_g(rc.problem), *rc.checks.support_bound};
  CertificateConfig cfg;
  cfg.sign_samples = rc.checks.samples;
  cfg.z_range = rc.checks.z_range;
  const BlowupReport rep = blowup_certificate(ep, *rc.checks.lambda, cfg);
  const std::string format = effective_format(common, rc);
  out << (format == "json" ? energy_json(rep).dump() : energy_csv(rep));
  if (auto prefix = effective_prefix(common, rc, false))
    write_file(*prefix + "_energy.json", energy_json(rep).dump(), err);
  return 0;
}

inline std::string exact_csv(double alpha, double shift, double t_max,
                             int points) {
  const PowerSolution u = PowerSolution::glued(alpha, shift);
  std::string out = "t,u,ut,utt,residual\n";
  for (int i = 0; i < points; ++i) {
    const double t = t_max * i / (points - 1);
    const double v = u.eval(t, 0);
    const double vt = u.eval(t, 1);
    const double vtt = u.eval(t, 2);
    const double residual =
        std::abs(vtt - (v == 0.0 ? 0.0 : std::pow(v, alpha)));
    out += json_number(t) + "," + json_number(v) + "," + json_number(vt) +
           "," + json_number(vtt) + "," + json_number(residual) + "\n";
  }
  return out;
}

inline int cmd_exact_eval(const Common& common, double alpha, double shift,
                          double t_max, int points, std::ostream& out,
                          std::ostream& err) {
  if (points < 2) throw ConfigError("exact-eval needs --points >= 2");
  if (!(t_max > 0.0)) throw ConfigError("exact-eval needs --t-max > 0");
  if (!(shift >= 0.0)) throw ConfigError("exact-eval needs --s >= 0");
  try {
    const std::string csv = exact_csv(alpha, shift, t_max, points);
    out << csv;
    if (common.output_prefix)
      write_file(*common.output_prefix + "_exact.csv", csv, err);
  } catch (const AlphaOutOfRange& e) {
    throw ConfigError(e.what());
  }
  return 0;
}

inline int simulate_with(const RunConfig& rc, const Common& common,
                         std::ostream& out, std::ostream& err) {
  const MixedProblem p = build_problem(rc.problem);
  const GridSpec grid = build_grid(rc.grid);
  RunOptions opts;
  opts.blowup_threshold = rc.checks.blowup_threshold;
  opts.snapshot_stride = rc.grid.snapshot_stride;
  opts.energy_g = build_g(rc.problem);
  if (rc.checks.support_bound &&
      grid.length < *rc.checks.support_bound + p.a * grid.t_final)
    err << "warning: the far boundary may influence the solution "
           "(L < support_bound + a*T)\n";
  const Trajectory traj = run(p, grid, rc.grid.far, opts);
  const std::string prefix = *effective_prefix(common, rc, true);
  write_file(prefix + "_snapshots.csv", snapshots_csv(traj), err);
  if (opts.energy_g)
    write_file(prefix + "_energy.csv", energy_series_csv(traj), err);
  const std::string summary = summary_json(traj, p.a).dump();
  write_file(prefix + "_summary.json", summary, err);
  out << summary;
  return 0;
}

inline int cmd_simulate(const Common& common, std::ostream& out,
                        std::ostream& err) {
  return simulate_with(require_config(common, "simulate"), common, out, err);
}

inline RunConfig blowup_preset() {
  RunConfig rc;
  rc.problem.a = 1.0;
  rc.problem.boundary = BoundaryKind::Dirichlet;
  rc.problem.phi = "5*bump(x,2,1)";
  rc.problem.psi = "0";
  rc.problem.mu = "0";
  rc.problem.g = "-z^3";
  rc.grid = {4.0, 8.0, 250, 400, FarBoundary::DirichletZero, 25};
  rc.checks.lambda = 4.0;
  rc.checks.support_bound = 3.0;
  rc.checks.blowup_threshold = 1e6;
  rc.output.prefix = "blowup";
  return rc;
}

inline int cmd_demo_blowup(const Common& common, std::optional<int> nt,
                           std::optional<int> nx, std::ostream& out,
                           std::ostream& err) {
  if (common.config_path)
    throw ConfigError(
        "demo-blowup uses its built-in setup; use simulate for a custom "
        "--config");
  RunConfig rc = blowup_preset();
  if (nt) rc.grid.nt = *nt;
  if (nx) rc.grid.nx = *nx;
  return simulate_with(rc, common, out, err);
}

inline int cmd_demo_nonuniqueness(const Common& common, double alpha,
                                  double shift, double t0, double t_end,
                                  int nt, int nx, double length, double a,
                                  std::ostream& out, std::ostream& err) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("demo-nonuniqueness needs 0 < alpha < 1");
  if (!(0.0 < shift && shift < t0 && t0 < t_end))
    throw ConfigError("demo-nonuniqueness needs 0 < s < t0 < t-end");
  const PowerSolution exact = PowerSolution::glued(alpha, shift);
  const MixedProblem p = exact.problem(a);

  auto glued_error = [&](int nt_run, int nx_run) {
    const GridSpec grid{t_end, length, nt_run, nx_run};
    validate(grid);
    check_cfl(grid, a);
    const double dt = grid.dt();
    Field prev(nx_run + 1, exact.eval(t0 - dt));
    Field cur(nx_run + 1, exact.eval(t0));
    const Trajectory traj =
        run_from_state(p, grid, FarBoundary::NeumannZero, t0,
                       {std::move(prev), std::move(cur)});
    double worst = 0.0;
    const double ref = exact.eval(traj.final_time);
    for (double v : traj.u_final)
      worst = std::max(worst, std::abs(v - ref));
    return std::pair<Trajectory, double>(traj, worst);
  };

  const GridSpec grid{t_end, length, nt, nx};
  validate(grid);
  check_cfl(grid, a);
  const Trajectory zero = run(p, grid, FarBoundary::NeumannZero);
  const auto [glued, coarse_err] = glued_error(nt, nx);
  const auto [glued_fine, fine_err] = glued_error(2 * nt, 2 * nx);

  double separation = 0.0;
  for (std::size_t j = 0; j < glued.u_final.size(); ++j)
    separation = std::max(
        separation, std::abs(glued.u_final[j] - zero.u_final[j]));

  JsonValue doc = JsonValue::object();
  doc.set("alpha", JsonValue::number(alpha));
  doc.set("s", JsonValue::number(shift));
  doc.set("t0", JsonValue::number(t0));
  doc.set("t_end", JsonValue::number(t_end));
  doc.set("zero_max_abs", JsonValue::number(zero.max_abs_u));
  doc.set("glued_final_error_vs_exact", JsonValue::number(coarse_err));
  doc.set("separation_at_t_end", JsonValue::number(separation));
  doc.set("convergence_ratio",
          JsonValue::number(fine_err > 0.0 ? coarse_err / fine_err
                                           : std::numeric_limits<double>::quiet_NaN()));

  const std::string format = common.format.value_or("json");
  if (format == "csv") {
    out << "metric,value\n"
        << "zero_max_abs," << json_number(zero.max_abs_u) << "\n"
        << "glued_final_error_vs_exact," << json_number(coarse_err) << "\n"
        << "separation_at_t_end," << json_number(separation) << "\n"
        << "convergence_ratio," << json_number(coarse_err / fine_err) << "\n";
  } else {
    out << doc.dump();
  }
  if (common.output_prefix)
    write_file(*common.output_prefix + "_nonuniqueness.json", doc.dump(), err);
  return 0;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests.  `args` excludes the
/// program name.  Exit codes: 0 on success (verdicts are payload, not exit
/// codes), 1 for usage or configuration errors, 2 for numerical failures
/// (domain errors, quadrature depth, CFL violations).
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"workbench for mixed problems of the nonlinear telegraph "
               "equation on the quarter plane"};
  app.name("quarterwave");
  app.fallthrough();

  cli_detail::Common common;
  std::string config_buf, output_buf, format_buf;
  app.add_option("--config", config_buf, "INI configuration file");
  app.add_option("--output", output_buf, "output path prefix");
  app.add_option("--format", format_buf, "payload format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.require_subcommand(1);

  auto* matching = app.add_subcommand(
      "check-matching", "corner compatibility of boundary and initial data");
  auto* energy = app.add_subcommand(
      "check-energy", "negative-energy nonexistence certificate");

  auto* exact = app.add_subcommand(
      "exact-eval", "tabulate a member of the power-law solution family");
  double alpha = 0.5, shift = 0.0, t_max = 2.0;
  int points = 201;
  exact->add_option("--alpha", alpha, "exponent in (0,1)")
      ->capture_default_str();
  exact->add_option("--s", shift, "gluing time")->capture_default_str();
  exact->add_option("--t-max", t_max, "end of the tabulated range")
      ->capture_default_str();
  exact->add_option("--points", points, "number of rows")
      ->capture_default_str();

  auto* simulate = app.add_subcommand(
      "simulate", "finite-difference run of a configured mixed problem");

  auto* nonuniq = app.add_subcommand(
      "demo-nonuniqueness",
      "two distinct numerical solutions of one zero-data problem");
  double nu_alpha = 0.5, nu_shift = 1.0, nu_t0 = 1.5, nu_t_end = 2.5,
         nu_length = 1.0, nu_a = 1.0;
  int nu_nt = 50, nu_nx = 10;
  nonuniq->add_option("--alpha", nu_alpha, "exponent in (0,1)")
      ->capture_default_str();
  nonuniq->add_option("--s", nu_shift, "gluing time")->capture_default_str();
  nonuniq->add_option("--t0", nu_t0, "injection time for the glued branch")
      ->capture_default_str();
  nonuniq->add_option("--t-end", nu_t_end, "comparison time")
      ->capture_default_str();
  nonuniq->add_option("--nt", nu_nt, "time steps")->capture_default_str();
  nonuniq->add_option("--nx", nu_nx, "space cells")->capture_default_str();
  nonuniq->add_option("--L", nu_length, "domain truncation length")
      ->capture_default_str();
  nonuniq->add_option("--a", nu_a, "wave speed")->capture_default_str();

  auto* blowup = app.add_subcommand(
      "demo-blowup", "negative-energy run that blows up in finite time");
  std::optional<int> bl_nt, bl_nx;
  blowup->add_option("--nt", bl_nt, "time steps override");
  blowup->add_option("--nx", bl_nx, "space cells override");

  std::vector<const char*> argv;
  argv.push_back("quarterwave");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  if (!config_buf.empty()) common.config_path = config_buf;
  if (!output_buf.empty()) common.output_prefix = output_buf;
  if (!format_buf.empty()) common.format = format_buf;

  try {
    if (matching->parsed())
      return cli_detail::cmd_check_matching(common, out, err);
    if (energy->parsed()) return cli_detail::cmd_check_energy(common, out, err);
    if (exact->parsed())
      return cli_detail::cmd_exact_eval(common, alpha, shift, t_max, points,
                                        out, err);
    if (simulate->parsed()) return cli_detail::cmd_simulate(common, out, err);
    if (nonuniq->parsed())
      return cli_detail::cmd_demo_nonuniqueness(
          common, nu_alpha, nu_shift, nu_t0, nu_t_end, nu_nt, nu_nx,
          nu_length, nu_a, out, err);
    if (blowup->parsed())
      return cli_detail::cmd_demo_blowup(common, bl_nt, bl_nx, out, err);
    err << "usage error: no subcommand given\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << " at position "
        << e.position() << "\n";
    return 1;
  } catch (const NonPositiveSpeed& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ArityMismatch& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const AlphaOutOfRange& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CflViolation& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const MaxDepthExceeded& e) {
    err << "numerical error: " << e.what()
        << " (best estimate " << json_number(e.best_estimate()) << ")\n";
    return 2;
  } catch (const DomainError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace quarterwave
