#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "matching.hpp"
#include "problem.hpp"
#include "solver.hpp"

namespace quarterwave {

namespace config_detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

inline std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("key '" + key + "': expected a number, got '" + text +
                      "'");
  return v;
}

inline int parse_int(const std::string& text, const std::string& key) {
  int v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("key '" + key + "': expected an integer, got '" + text +
                      "'");
  return v;
}

}  // namespace config_detail

/// Sections and keys of an INI document.  '#' and ';' start comments; values
/// may be wrapped in double quotes (useful for expressions with spaces).
struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;
};

inline IniFile parse_ini(std::string_view text) {
  IniFile out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t comment = raw.find_first_of("#;");
    if (comment != std::string_view::npos) raw = raw.substr(0, comment);
    const std::string line = config_detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      section = config_detail::trim(
          std::string_view(line).substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) +
                          ": empty section name");
      out.sections[section];
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside of any [section]");
    const std::string key =
        config_detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = config_detail::unquote(
        config_detail::trim(std::string_view(line).substr(eq + 1)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.sections[section][key] = value;
  }
  return out;
}

struct ProblemConfig {
  double a = 1.0;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  std::string phi = "0";
  std::string psi = "0";
  std::string mu = "0";
  std::string forcing = "0";
  std::optional<std::string> f;  // expression over (t, x, z)
  std::optional<std::string> g;  // expression over z; implies f = -g(z)
};

struct GridConfig {
  double t_final = 1.0;
  double length = 1.0;
  int nt = 100;
  int nx = 100;
  FarBoundary far = FarBoundary::DirichletZero;
  int snapshot_stride = 0;
};

struct ChecksConfig {
  std::optional<double> tol;
  std::optional<double> lambda;
  std::optional<double> support_bound;
  std::optional<std::pair<double, double>> z_range;
  int samples = 101;
  double blowup_threshold = 1e6;
  SecondOrderForm form = SecondOrderForm::Derived;
};

struct OutputConfig {
  std::string format = "json";
  std::string prefix = "out";
};

struct RunConfig {
  ProblemConfig problem;
  GridConfig grid;
  ChecksConfig checks;
  OutputConfig output;
};

namespace config_detail {

inline void apply_problem(ProblemConfig& p, const std::string& key,
                          const std::string& value) {
  if (key == "a") p.a = parse_double(value, key);
  else if (key == "boundary") {
    if (value == "dirichlet") p.boundary = BoundaryKind::Dirichlet;
    else if (value == "neumann") p.boundary = BoundaryKind::Neumann;
    else
      throw ConfigError("key 'boundary': expected dirichlet or neumann, got '" +
                        value + "'");
  } else if (key == "phi") p.phi = value;
  else if (key == "psi") p.psi = value;
  else if (key == "mu") p.mu = value;
  else if (key == "F") p.forcing = value;
  else if (key == "f") p.f = value;
  else if (key == "g") p.g = value;
  else throw ConfigError("unknown key '" + key + "' in [problem]");
}

inline void apply_grid(GridConfig& g, const std::string& key,
                       const std::string& value) {
  if (key == "T") g.t_final = parse_double(value, key);
  else if (key == "L") g.length = parse_double(value, key);
  else if (key == "nt") g.nt = parse_int(value, key);
  else if (key == "nx") g.nx = parse_int(value, key);
  else if (key == "far_boundary") {
    if (value == "dirichlet_zero") g.far = FarBoundary::DirichletZero;
    else if (value == "neumann_zero") g.far = FarBoundary::NeumannZero;
    else
      throw ConfigError(
          "key 'far_boundary': expected dirichlet_zero or neumann_zero, "
          "got '" + value + "'");
  } else if (key == "snapshot_stride") g.snapshot_stride = parse_int(value, key);
  else throw ConfigError("unknown key '" + key + "' in [grid]");
}

inline void apply_checks(ChecksConfig& c, const std::string& key,
                         const std::string& value) {
  if (key == "tol") c.tol = parse_double(value, key);
  else if (key == "lambda") c.lambda = parse_double(value, key);
  else if (key == "support_bound") c.support_bound = parse_double(value, key);
  else if (key == "z_range") {
    const std::size_t comma = value.find(',');
    if (comma == std::string::npos)
      throw ConfigError("key 'z_range': expected 'lo,hi', got '" + value + "'");
    const double lo = parse_double(trim(std::string_view(value).substr(0, comma)), key);
    const double hi = parse_double(trim(std::string_view(value).substr(comma + 1)), key);
    c.z_range = {lo, hi};
  } else if (key == "samples") c.samples = parse_int(value, key);
  else if (key == "blowup_threshold") c.blowup_threshold = parse_double(value, key);
  else if (key == "form") {
    if (value == "derived") c.form = SecondOrderForm::Derived;
    else if (value == "literal") c.form = SecondOrderForm::Literal;
    else
      throw ConfigError("key 'form': expected derived or literal, got '" +
                        value + "'");
  } else throw ConfigError("unknown key '" + key + "' in [checks]");
}

inline void apply_output(OutputConfig& o, const std::string& key,
                         const std::string& value) {
  if (key == "format") {
    if (value != "csv" && value != "json")
      throw ConfigError("key 'format': expected csv or json, got '" + value +
                        "'");
    o.format = value;
  } else if (key == "path") o.prefix = value;
  else throw ConfigError("unknown key '" + key + "' in [output]");
}

}  // namespace config_detail

inline RunConfig load_run_config(const IniFile& ini) {
  RunConfig rc;
  for (const auto& [section, keys] : ini.sections) {
    for (const auto& [key, value] : keys) {
      if (section == "problem") config_detail::apply_problem(rc.problem, key, value);
      else if (section == "grid") config_detail::apply_grid(rc.grid, key, value);
      else if (section == "checks") config_detail::apply_checks(rc.checks, key, value);
      else if (section == "output") config_detail::apply_output(rc.output, key, value);
      else throw ConfigError("unknown section [" + section + "]");
    }
  }
  return rc;
}

inline RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_run_config(parse_ini(ss.str()));
}

/// Parses one config expression over the given variables, tagging errors
/// with the key name and source position.
inline ScalarFn config_fn(const std::string& key, const std::string& text,
                          std::vector<std::string> variables) {
  try {
    Expr e = parse(text, variables);
    return to_scalar_fn(e, std::move(variables));
  } catch (const ParseError& pe) {
    throw ConfigError("key '" + key + "': " + pe.what() + " at position " +
                      std::to_string(pe.position()) + " in '" + text + "'");
  }
}

/// The g expression as a one-variable function, when configured.
inline std::optional<ScalarFn> build_g(const ProblemConfig& pc) {
  if (!pc.g) return std::nullopt;
  return config_fn("g", *pc.g, {"z"});
}

/// Builds the problem instance from configured expressions.  Exactly one of
/// f and g may be given; g means f(t,x,z) = -g(z); neither means f = 0.
inline MixedProblem build_problem(const ProblemConfig& pc) {
  if (pc.f && pc.g)
    throw ConfigError("[problem] defines both f and g; give one of them");
  ScalarFn f = ScalarFn::zero(3);
  if (pc.f) {
    f = config_fn("f", *pc.f, {"t", "x", "z"});
  } else if (pc.g) {
    ScalarFn g = *build_g(pc);
    f = ScalarFn::ternary([g](double, double, double z) { return -g(z); },
                          "-(" + *pc.g + ")");
  }
  MixedProblem p{pc.a,
                 std::move(f),
                 config_fn("F", pc.forcing, {"t", "x"}),
                 config_fn("phi", pc.phi, {"x"}),
                 config_fn("psi", pc.psi, {"x"}),
                 config_fn("mu", pc.mu, {"t"}),
                 pc.boundary};
  validate(p);
  return p;
}

inline GridSpec build_grid(const GridConfig& gc) {
  GridSpec g{gc.t_final, gc.length, gc.nt, gc.nx};
  validate(g);
  return g;
}

}  // namespace quarterwave
