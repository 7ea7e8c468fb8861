#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fjt/error.hpp"
#include "fjt/kernels.hpp"
#include "fjt/transforms.hpp"
#include "fjt/verify.hpp"

namespace fjt::cli {

enum ExitCode { ok = 0, invalid = 2, tolerance_breach = 3, non_convergence = 4 };

/// Shortest decimal string that reads back to exactly v.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

namespace detail {

inline std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  } visit;
  return std::visit(visit, c);
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (std::isfinite(v)) return v;
      return format_number(v);
    }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace detail

/// Header, rows, then one "# key,value" line per summary entry.
inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
    os << '\n';
  }
  for (const auto& [k, v] : t.summary) os << "# " << k << ',' << detail::csv_cell(v) << '\n';
}

inline void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json doc;
  doc["config"] = config;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = detail::json_cell(row[i]);
    doc["rows"].push_back(std::move(r));
  }
  doc["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.summary) doc["summary"][k] = detail::json_cell(v);
  os << doc.dump(2) << '\n';
}

/// "lo:hi:step" (inclusive of hi up to rounding) or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw DomainError("bad grid value '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw DomainError("grid range must be lo:hi:step");
    const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    if (!(hi >= lo)) throw DomainError("grid range needs hi >= lo");
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw DomainError("grid has too many points");
    for (long k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');)
      if (!p.empty()) out.push_back(number(p));
  }
  if (out.empty()) throw DomainError("grid is empty");
  return out;
}

struct RunConfig {
  std::string command;
  double a = 0.75;
  double c = 1.2;
  int n = 1;
  int N = 8;
  std::string grid;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double delta = 0.0;
  std::string profile = "sin";
  std::string sequence = "reference";
  std::string format = "csv";
  std::string out;
  bool check_decay = false;
  std::vector<std::string> identities;
  double max_error = 1e-4;

  JacobiParams params() const { return {a, c}; }

  quad::QuadratureSpec spec() const {
    quad::QuadratureSpec s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    s.validate();
    return s;
  }

  std::vector<double> grid_or(const std::string& fallback) const {
    return parse_grid(grid.empty() ? fallback : grid);
  }

  nlohmann::ordered_json to_json(const std::vector<double>& xs) const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["a"] = a;
    j["c"] = c;
    j["n"] = n;
    j["N"] = N;
    j["grid"] = xs;
    j["rel_tol"] = rel_tol;
    j["abs_tol"] = abs_tol;
    j["delta"] = delta;
    j["profile"] = profile;
    j["sequence"] = sequence;
    return j;
  }
};

/// Outcome of a subcommand: the table plus a tolerance verdict.
struct CommandResult {
  Table table;
  std::vector<double> grid;
  bool breach = false;
  std::string breach_message;
};

namespace detail {

inline void require_positive(int v, const char* name) {
  if (v < 1) throw DomainError(std::string(name) + " must be a positive integer");
}

/// Least-squares slope of ln|y| against ln x.
inline double fitted_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || ys[i] == 0.0) continue;
    const double lx = std::log(xs[i]), ly = std::log(std::abs(ys[i]));
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw DomainError("--check-decay needs at least two positive grid points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline transforms::CoefficientSequence make_sequence(const RunConfig& cfg) {
  require_positive(cfg.N, "--N");
  const auto p = cfg.params();
  if (cfg.sequence == "reference") return transforms::reference_sequence(p, cfg.N, cfg.delta);
  if (cfg.sequence == "zero") return transforms::zero_sequence(p, cfg.N);
  throw DomainError("unknown sequence '" + cfg.sequence + "' (expected reference or zero)");
}

inline CommandResult cmd_kernel(const RunConfig& cfg) {
  const auto p = cfg.params();
  p.require_theorems();
  require_positive(cfg.n, "--n");
  CommandResult r;
  r.grid = cfg.grid_or("0:2:0.25");
  r.table.columns = {"x", "F_n", "Phi_n"};
  std::vector<double> phis;
  for (double x : r.grid) {
    const double f = kernels::forward_kernel(p, cfg.n, x);
    const double phi = kernels::phi_kernel(p, cfg.n, x);
    phis.push_back(phi);
    r.table.rows.push_back({x, f, phi});
  }
  if (cfg.check_decay) {
    const auto d = kernel_decay(p);
    double forward = 0.0;
    int count = 0;
    for (double x : r.grid)
      if (x > 0.0) forward += kernels::forward_decay_exponent(p, cfg.n, x), ++count;
    if (count == 0) throw DomainError("--check-decay needs a positive grid point");
    r.table.summary.push_back({"decay_exponent", forward / count});
    r.table.summary.push_back({"expected_decay_exponent", d.exponent_forward});
    r.table.summary.push_back({"phi_decay_exponent", fitted_exponent(r.grid, phis)});
    r.table.summary.push_back({"expected_phi_decay_exponent", d.exponent_inverse});
  }
  return r;
}

inline CommandResult cmd_phi(const RunConfig& cfg) {
  const auto p = cfg.params();
  p.require_theorems();
  require_positive(cfg.n, "--n");
  CommandResult r;
  r.grid = cfg.grid_or("0:2:0.25");
  r.table.columns = {"x", "Phi_n", "Phi_n_full_range", "parity_residual"};
  for (double x : r.grid) {
    kernels::PhiKernelRequest req{p, cfg.n, x};
    const double half = kernels::phi_kernel(req);
    const double full = kernels::phi_kernel_full_range(req);
    r.table.rows.push_back({x, half, full, std::abs(full - half)});
  }
  return r;
}

inline CommandResult cmd_synth(const RunConfig& cfg) {
  const auto seq = make_sequence(cfg);
  CommandResult r;
  r.grid = cfg.grid_or("0.5:2:0.5");
  r.table.columns = {"x", "f", "tail_bound"};
  for (double x : r.grid) {
    const auto s = transforms::synthesize(seq, x);
    r.table.rows.push_back({x, s.value, s.tail_bound});
  }
  return r;
}

inline CommandResult cmd_analyze(const RunConfig& cfg) {
  const auto p = cfg.params();
  require_positive(cfg.N, "--N");
  const auto psi = transforms::profile(cfg.profile);
  const auto f = transforms::build_profile_function(psi, p, cfg.spec());
  CommandResult r;
  r.table.columns = {"n", "analyze", "closed_form", "abs_diff"};
  for (int n = 1; n <= cfg.N; ++n) {
    const double an = transforms::analyze(f, p, n, cfg.spec()).value;
    const double cf = transforms::closed_form_coefficients(psi, p, n, cfg.spec()).value;
    r.table.rows.push_back({static_cast<long long>(n), an, cf, std::abs(an - cf)});
  }
  return r;
}

inline CommandResult cmd_invert(const RunConfig& cfg, bool compare) {
  const auto p = cfg.params();
  p.require_theorems();
  const auto seq = make_sequence(cfg);
  const auto f = transforms::synthesized_function(seq);
  CommandResult r;
  r.table.columns = compare ? std::vector<std::string>{"n", "input", "recovered", "abs_error"}
                            : std::vector<std::string>{"n", "recovered", "error_estimate"};
  double worst = 0.0;
  int worst_n = 0;
  for (int n = 1; n <= cfg.N; ++n) {
    const auto q = transforms::invert_coefficients(f, p, n, cfg.spec());
    if (!compare) {
      r.table.rows.push_back({static_cast<long long>(n), q.value, q.error_estimate});
      continue;
    }
    const double err = std::abs(q.value - seq.values[n - 1]);
    if (err >= worst) worst = err, worst_n = n;
    r.table.rows.push_back({static_cast<long long>(n), seq.values[n - 1], q.value, err});
  }
  if (compare) {
    r.table.summary.push_back({"max_abs_error", worst});
    r.table.summary.push_back({"max_error_bound", cfg.max_error});
    if (worst > cfg.max_error) {
      r.breach = true;
      r.breach_message = "round trip error " + format_number(worst) + " at n=" + std::to_string(worst_n) +
                         " exceeds " + format_number(cfg.max_error);
    }
  }
  return r;
}

inline CommandResult cmd_roundtrip_func(const RunConfig& cfg) {
  const auto p = cfg.params();
  p.require_theorems();
  require_positive(cfg.N, "--N");
  const auto psi = transforms::profile(cfg.profile);
  const auto f = transforms::build_profile_function(psi, p, cfg.spec());
  CommandResult r;
  r.grid = cfg.grid_or("0.5,1,2");
  r.table.columns = {"kind", "n", "x", "value", "reference", "abs_error"};

  transforms::CoefficientSequence coeffs{{}, p, cfg.delta};
  double worst_coeff = 0.0;
  for (int n = 1; n <= cfg.N; ++n) {
    const double an = transforms::analyze(f, p, n, cfg.spec()).value;
    const double cf = transforms::closed_form_coefficients(psi, p, n, cfg.spec()).value;
    coeffs.values.push_back(cf);
    const double err = std::abs(an - cf);
    const double allowed = std::max(verify::identity_tolerance * std::abs(cf), verify::absolute_tolerance);
    worst_coeff = std::max(worst_coeff, err / allowed);
    r.table.rows.push_back({std::string("coefficient"), static_cast<long long>(n), {}, an, cf, err});
  }
  double worst = 0.0;
  std::optional<std::string> warning;
  for (double x : r.grid) {
    const auto rec = transforms::reconstruct(coeffs, p, x, cfg.N, cfg.spec());
    if (rec.warning) warning = rec.warning;
    const double fx = f(x);
    const double err = std::abs(rec.value - fx);
    worst = std::max(worst, err);
    r.table.rows.push_back({std::string("reconstruction"), {}, x, rec.value, fx, err});
  }
  r.table.summary.push_back({"max_reconstruction_error", worst});
  r.table.summary.push_back({"max_error_bound", cfg.max_error});
  r.table.summary.push_back({"coefficient_paths_agree", worst_coeff <= 1.0});
  if (warning) r.table.summary.push_back({"warning", *warning});
  if (worst_coeff > 1.0) {
    r.breach = true;
    r.breach_message = "coefficient paths disagree beyond relative 1e-6 / absolute 1e-9";
  } else if (worst > cfg.max_error) {
    r.breach = true;
    r.breach_message =
        "reconstruction error " + format_number(worst) + " exceeds " + format_number(cfg.max_error);
  }
  return r;
}

inline Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return {};
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
  std::vector<verify::IdentityId> ids;
  for (const auto& s : cfg.identities) ids.push_back(verify::identity_from_string(s));
  if (ids.empty()) ids.assign(std::begin(verify::all_identities), std::end(verify::all_identities));
  CommandResult r;
  r.table.columns = {"identity", "a", "c", "n", "u", "x", "delta", "lhs", "rhs", "residual", "tolerance",
                     "metric", "passed"};
  long long failed = 0, total = 0;
  const verify::IdentityReport* worst = nullptr;
  std::vector<verify::IdentityReport> all;
  for (auto id : ids) {
    auto reports = verify::run_default_grid(id);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  for (const auto& rep : all) {
    ++total;
    if (!rep.passed) {
      ++failed;
      if (!worst || rep.residual / std::max(rep.tolerance, 1e-300) >
                        worst->residual / std::max(worst->tolerance, 1e-300))
        worst = &rep;
    }
    const auto& g = rep.point;
    r.table.rows.push_back({std::string(verify::to_string(rep.id)), optional_cell(g.a), optional_cell(g.c),
                            optional_cell(g.n), optional_cell(g.u), optional_cell(g.x), optional_cell(g.delta),
                            rep.lhs, rep.rhs, rep.residual, rep.tolerance, std::string(verify::to_string(rep.metric)),
                            rep.passed});
  }
  r.table.summary.push_back({"checks", total});
  r.table.summary.push_back({"failed", failed});
  if (worst) {
    r.breach = true;
    r.breach_message = std::string("identity ") + verify::to_string(worst->id) + " failed: residual " +
                       format_number(worst->residual) + " > tolerance " + format_number(worst->tolerance);
    r.table.summary.push_back({"worst_identity", std::string(verify::to_string(worst->id))});
    r.table.summary.push_back({"worst_residual", worst->residual});
  }
  return r;
}

}  // namespace detail

inline CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "kernel") return detail::cmd_kernel(cfg);
  if (cfg.command == "phi") return detail::cmd_phi(cfg);
  if (cfg.command == "synth") return detail::cmd_synth(cfg);
  if (cfg.command == "analyze") return detail::cmd_analyze(cfg);
  if (cfg.command == "invert") return detail::cmd_invert(cfg, false);
  if (cfg.command == "roundtrip-seq") return detail::cmd_invert(cfg, true);
  if (cfg.command == "roundtrip-func") return detail::cmd_roundtrip_func(cfg);
  if (cfg.command == "verify") return detail::cmd_verify(cfg);
  throw DomainError("unknown command '" + cfg.command + "'");
}

/// Parses args (without the program name), runs the subcommand and writes the
/// table to `out` (or --out). Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Hypergeometric-kernel series transforms", "fjt"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.add_option("--a", cfg.a, "first kernel parameter a > 0")->capture_default_str();
  app.add_option("--c", cfg.c, "third kernel parameter c > 0")->capture_default_str();
  app.add_option("--n", cfg.n, "kernel index")->capture_default_str();
  app.add_option("--N", cfg.N, "number of series terms")->capture_default_str();
  app.add_option("--grid", cfg.grid, "abscissae: lo:hi:step or a comma list")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance")->capture_default_str();
  app.add_option("--abs-tol", cfg.abs_tol, "absolute quadrature tolerance")->capture_default_str();
  app.add_option("--delta", cfg.delta, "coefficient decay budget in [0, pi/2)")->capture_default_str();
  app.add_option("--profile", cfg.profile, "built-in profile: sin, sin+0.3sin3, ramp")->capture_default_str();
  app.add_option("--sequence", cfg.sequence, "built-in coefficients: reference, zero")->capture_default_str();
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "write the table to this path instead of standard output");
  app.add_flag("--check-decay", cfg.check_decay, "append fitted decay exponents (kernel)");
  app.add_option("--identity", cfg.identities, "restrict verify to these identities");
  app.add_option("--max-error", cfg.max_error, "round trip error bound")->capture_default_str();

  const std::pair<const char*, const char*> commands[] = {
      {"kernel", "F_n(x) and Phi_n(x) on the grid"},
      {"phi", "Phi_n(x) with the parity check"},
      {"synth", "series synthesis from a built-in coefficient sequence"},
      {"analyze", "coefficients of a profile function, quadrature and closed form"},
      {"invert", "coefficients recovered from a synthesized series"},
      {"roundtrip-seq", "synthesize then invert, compared with the input sequence"},
      {"roundtrip-func", "profile function: both coefficient paths and the reconstruction"},
      {"verify", "identity and inequality checks over their default grids"},
  };
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->callback([&cfg, cmd = std::string(name)] { cfg.command = cmd; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "fjt: " << e.what() << '\n';
    return invalid;
  }

  try {
    const auto result = run_command(cfg);
    std::ostringstream buffer;
    if (cfg.format == "json")
      write_json(buffer, result.table, cfg.to_json(result.grid));
    else
      write_csv(buffer, result.table);
    if (cfg.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw DomainError("cannot open output file '" + cfg.out + "'");
      file << buffer.str();
    }
    if (result.breach) {
      err << "fjt: " << result.breach_message << '\n';
      return tolerance_breach;
    }
    return ok;
  } catch (const DomainError& e) {
    err << "fjt: " << e.what() << '\n';
    return invalid;
  } catch (const DecayConditionError& e) {
    err << "fjt: " << e.what() << '\n';
    return invalid;
  } catch (const DivergenceError& e) {
    err << "fjt: " << e.what() << '\n';
    return invalid;
  } catch (const Error& e) {
    err << "fjt: " << e.what() << '\n';
    return non_convergence;
  }
}

}  // namespace fjt::cli
