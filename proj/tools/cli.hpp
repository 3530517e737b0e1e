#pragma once

// Command-line front end. `run` does all the work and returns the exit code:
// 0 success, 1 identity failure, 2 usage or parse error, 3 domain or
// numerical error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "csv.hpp"
#include "nufn/nufn.hpp"

namespace nufn::cli {

enum ExitCode { kOk = 0, kIdentityFailure = 1, kUsage = 2, kDomain = 3 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string function;
  std::optional<std::size_t> p, q;
  std::string a_text, b_text;
  std::string z, z2, bra, ket, expr, filter, grid, out;
  std::optional<double> E, alpha, tol;
  std::optional<long> n;
  std::string format = "csv";
  bool no_timing = false;
};

struct Grid {
  double start = 0.0, stop = 0.0;
  std::size_t count = 1;
  bool log = false;

  std::vector<double> points() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                        : start + f * (stop - start));
    }
    if (count > 1) {
      out.front() = start;
      out.back() = stop;
    }
    return out;
  }
};

namespace detail {

inline double parse_real(const std::string& text, const std::string& flag) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || std::isnan(v))
    throw usage_error(flag + ": '" + text + "' is not a number");
  return v;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (const auto& cell : split(text, ',')) out.push_back(parse_real(cell, flag));
  return out;
}

inline Grid parse_grid(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) throw usage_error("--grid: expected start:stop:count[:log]");
  Grid g;
  g.start = parse_real(parts[0], "--grid");
  g.stop = parse_real(parts[1], "--grid");
  double count = parse_real(parts[2], "--grid");
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e7)
    throw usage_error("--grid: count must be a positive integer");
  g.count = static_cast<std::size_t>(count);
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "lin") throw usage_error("--grid: the fourth field must be 'log' or 'lin'");
    g.log = parts[3] == "log";
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) throw usage_error("--grid: bounds must be finite");
  if (g.log && !(g.start > 0.0 && g.stop > 0.0)) throw usage_error("--grid: log spacing needs positive bounds");
  return g;
}

inline StructureFn family(const CliConfig& c) {
  std::vector<double> a = parse_list(c.a_text, "--a");
  std::vector<double> b = parse_list(c.b_text, "--b");
  if (c.p && *c.p != a.size())
    throw usage_error("--a: expected " + std::to_string(*c.p) + " values for --p " + std::to_string(*c.p));
  if (c.q && *c.q != b.size())
    throw usage_error("--b: expected " + std::to_string(*c.q) + " values for --q " + std::to_string(*c.q));
  for (double x : a)
    if (!(x > 0.0) || !std::isfinite(x)) throw usage_error("--a: parameters must be positive");
  for (double x : b)
    if (!(x > 0.0) || !std::isfinite(x)) throw usage_error("--b: parameters must be positive");
  return StructureFn(std::move(a), std::move(b));
}

inline QuadSpec quad_spec(const CliConfig& c) {
  QuadSpec spec;
  if (c.tol) spec.rel_tol = *c.tol;
  return spec;
}

inline complex parse_label(const std::string& text, const std::string& flag, const doot::Bindings& vars = {}) {
  try {
    return doot::parse_scalar(text, vars);
  } catch (const parse_error& e) {
    throw usage_error(flag + ": " + e.what());
  }
}

inline complex require_complex(const std::string& text, const std::string& flag) {
  if (text.empty()) throw usage_error(flag + " is required");
  return parse_label(text, flag);
}

inline double require_real(const std::string& text, const std::string& flag) {
  complex v = require_complex(text, flag);
  if (v.imag() != 0.0) throw usage_error(flag + ": expected a real value");
  return v.real();
}

inline nlohmann::json cell_json(complex v) {
  if (v.imag() == 0.0) return v.real();
  return format_cell(v);
}

inline std::string render(const Table& t, const std::string& format) {
  if (format == "csv") return write_csv(t);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

}  // namespace detail

inline nlohmann::json report_json(const identities::IdentityReport& r) {
  return nlohmann::json{{"id", r.id},
                        {"description", r.description},
                        {"lhs_re", r.lhs.real()},
                        {"lhs_im", r.lhs.imag()},
                        {"rhs_re", r.rhs.real()},
                        {"rhs_im", r.rhs.imag()},
                        {"abs_err", r.abs_err},
                        {"rel_err", r.rel_err},
                        {"tol", r.tol},
                        {"pass", r.pass},
                        {"status", identities::to_string(r.status)},
                        {"runtime_ms", r.runtime_ms}};
}

inline Table cmd_eval(const CliConfig& c) {
  const QuadSpec spec = detail::quad_spec(c);
  const StructureFn sf = detail::family(c);
  std::optional<Grid> grid;
  if (!c.grid.empty()) grid = detail::parse_grid(c.grid);
  Table t{{"input", "re", "im", "est_err"}, {}};

  // The swept variable: --z, or E for density. Without a grid it is the scalar flag.
  auto sweep = [&](auto&& scalar) -> std::vector<complex> {
    if (grid) {
      std::vector<complex> out;
      for (double x : grid->points()) out.emplace_back(x, 0.0);
      return out;
    }
    return {scalar()};
  };
  auto emit = [&](complex input, complex value, double err) {
    t.rows.push_back({input, value.real(), value.imag(), err});
  };
  const std::string& f = c.function;

  if (f == "nu" || f == "gnu" || f == "pfq") {
    for (complex z : sweep([&] { return detail::require_complex(c.z, "--z"); })) {
      if (f == "nu") {
        if (sf.p() != 0 || sf.q() != 0) throw usage_error("--p/--q: 'nu' takes no family; use 'gnu'");
        ScaledResult r = nu_scaled(z, spec);
        emit(z, r.value(), r.abs_error());
      } else if (f == "gnu") {
        ScaledResult r = nu_general_scaled(sf, z, spec);
        emit(z, r.value(), r.abs_error());
      } else {
        SeriesResult r = pfq_series_detailed(sf.params(), z);
        emit(z, r.value, r.last_term);
      }
    }
  } else if (f == "nu-alpha") {
    if (!c.alpha) throw usage_error("--alpha is required");
    for (complex z : sweep([&] { return complex{detail::require_real(c.z, "--z"), 0.0}; })) {
      ScaledResult r = nu_alpha_scaled(z.real(), *c.alpha, spec);
      emit(z, r.value().real(), r.abs_error());
    }
  } else if (f == "overlap") {
    complex z2 = detail::require_complex(c.z2, "--z2");
    for (complex z : sweep([&] { return detail::require_complex(c.z, "--z"); })) {
      Estimate r = overlap_continuous_detailed(sf, z, z2, spec);
      emit(z, r.value, r.error);
    }
  } else if (f == "density") {
    double r2 = detail::require_real(c.z, "--z");
    for (complex E : sweep([&] {
           if (!c.E) throw usage_error("--E is required");
           return complex{*c.E, 0.0};
         })) {
      Estimate r = transition_density_detailed(sf, r2, E.real(), spec);
      emit(E, r.value, r.error);
    }
  } else if (f == "poisson") {
    if (!c.n) throw usage_error("--n is required");
    if (*c.n < 0) throw usage_error("--n: must be non-negative");
    for (complex r2 : sweep([&] { return complex{detail::require_real(c.z, "--z"), 0.0}; }))
      emit(r2, poisson_density_discrete(r2.real(), static_cast<std::size_t>(*c.n)), 0.0);
  } else {
    throw usage_error("eval: unknown function '" + f + "' (nu, nu-alpha, gnu, pfq, overlap, density, poisson)");
  }
  return t;
}

inline Table cmd_table(const CliConfig& c) {
  const QuadSpec spec = detail::quad_spec(c);
  const StructureFn sf = detail::family(c);
  if (c.grid.empty()) throw usage_error("--grid is required for table");
  Grid g = detail::parse_grid(c.grid);
  Table t{{"w", "nu_general", "pfq", "ratio"}, {}};
  for (double w : g.points()) {
    DcLimitReport r = dc_limit_check(sf, w, spec);
    t.rows.push_back({w, r.integral, r.series, r.ratio});
  }
  return t;
}

inline Table cmd_doot(const CliConfig& c) {
  const QuadSpec spec = detail::quad_spec(c);
  const StructureFn sf = detail::family(c);
  if (c.expr.empty()) throw usage_error("--expr is required");
  doot::Bindings vars;
  if (!c.z.empty()) vars["z"] = detail::parse_label(c.z, "--z");
  if (c.bra.empty()) throw usage_error("--bra is required");
  if (c.ket.empty()) throw usage_error("--ket is required");
  complex bra = detail::parse_label(c.bra, "--bra", vars);
  complex ket = detail::parse_label(c.ket, "--ket", vars);
  doot::Expr e = doot::parse_expression(c.expr, vars);
  complex v = doot::scalarize({bra, ket, e}, sf, spec);
  return Table{{"re", "im"}, {{v.real(), v.imag()}}};
}

inline int write_output(const CliConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw usage_error("--out: cannot open '" + c.out + "'");
  file << text;
  return kOk;
}

inline int cmd_check(const CliConfig& c, std::ostream& out) {
  identities::SuiteOptions opts;
  opts.filter = c.filter;
  opts.tol_override = c.tol.value_or(0.0);
  opts.record_runtime = !c.no_timing;
  auto reports = identities::run_suite(opts);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  write_output(c, arr.dump(2) + "\n", out);
  return identities::all_exact_pass(reports) ? kOk : kIdentityFailure;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"nu-function library front end", "nufn"};
  app.require_subcommand(1);
  app.fallthrough();

  std::size_t p_val = 0, q_val = 0;
  double tol_val = 0.0;
  auto* p_flag = app.add_option("--p", p_val, "number of a-parameters (numerator)");
  auto* q_flag = app.add_option("--q", q_val, "number of b-parameters (denominator)");
  app.add_option("--a", c.a_text, "comma-separated a-parameters");
  app.add_option("--b", c.b_text, "comma-separated b-parameters");
  auto* tol_opt = app.add_option("--tol", tol_val, "quadrature rel_tol; for check, the identity tolerance");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file (default standard output)");
  app.add_option("--grid", c.grid, "start:stop:count[:log]");

  auto* eval = app.add_subcommand("eval", "evaluate a function at a point or on a grid");
  eval->add_option("function", c.function, "nu, nu-alpha, gnu, pfq, overlap, density, poisson")->required();
  eval->add_option("--z", c.z, "argument (a+bi); |z|^2 for density and poisson");
  eval->add_option("--z2", c.z2, "second label for overlap");
  double E_val = 0.0, alpha_val = 0.0;
  long n_val = 0;
  auto* E_opt = eval->add_option("--E", E_val, "energy for density");
  auto* n_opt = eval->add_option("--n", n_val, "Fock index for poisson");
  auto* alpha_opt = eval->add_option("--alpha", alpha_val, "order for nu-alpha");

  auto* check = app.add_subcommand("check", "run the identity suite");
  check->add_option("--filter", c.filter, "substring of the identity id");
  check->add_flag("--no-timing", c.no_timing, "report runtime_ms as 0 for byte-stable output");

  auto* doot_cmd = app.add_subcommand("doot", "scalarize an operator expression between coherent states");
  doot_cmd->add_option("--bra", c.bra, "bra label");
  doot_cmd->add_option("--ket", c.ket, "ket label");
  doot_cmd->add_option("--expr", c.expr, "operator expression");
  doot_cmd->add_option("--z", c.z, "value bound to the name z");

  app.add_subcommand("table", "nu_{p,q}(w) against pFq(w) on a grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (p_flag->count()) c.p = p_val;
  if (q_flag->count()) c.q = q_val;
  if (tol_opt->count()) c.tol = tol_val;
  if (E_opt->count()) c.E = E_val;
  if (n_opt->count()) c.n = n_val;
  if (alpha_opt->count()) c.alpha = alpha_val;

  try {
    if (c.tol && !(*c.tol > 0.0)) throw usage_error("--tol: must be positive");
    if (eval->parsed()) return write_output(c, detail::render(cmd_eval(c), c.format), out);
    if (check->parsed()) return cmd_check(c, out);
    if (doot_cmd->parsed()) return write_output(c, detail::render(cmd_doot(c), c.format), out);
    return write_output(c, detail::render(cmd_table(c), c.format), out);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace nufn::cli
