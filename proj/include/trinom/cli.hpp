#pragma once

// Command-line front end. `run` parses arguments, dispatches to one
// subcommand and returns the process exit code:
//   0 success, 2 invalid input, 3 numerical failure (including a failed verify).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trinom/amoeba.hpp"
#include "trinom/errors.hpp"
#include "trinom/io.hpp"
#include "trinom/mellinbarnes.hpp"
#include "trinom/oracle.hpp"
#include "trinom/puiseux.hpp"
#include "trinom/systems.hpp"
#include "trinom/taylor.hpp"
#include "trinom/version.hpp"

namespace trinom::cli {

enum ExitCode : int { kSuccess = 0, kValidation = 2, kNumerical = 3 };

struct RunConfig {
  std::string subcommand;
  std::string system_path;
  std::string pairs;
  std::string d;
  std::int64_t max_degree = 10;
  std::string x;
  long branch = -1;
  double tolerance = 1e-8;
  int steps = 64;
  std::string path;
  std::string divisors;
  std::string cone;
  std::string gamma;
  std::string lo = "-3,-3";
  std::string hi = "3,3";
  double step = 0.1;
  int attempts = 8;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string output;
};

/// Tabular result plus summary key/values; rendered as CSV or JSON.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  std::optional<std::string> verdict;
};

namespace detail {

inline std::vector<ComplexVector> parse_points(const std::string& text) {
  std::vector<ComplexVector> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(io::parse_complex_list(item));
  if (out.empty()) throw validation_error("cli", "no point given");
  return out;
}

inline PairSelection selection_or_default(const std::string& pairs, std::size_t n) {
  if (pairs.empty()) return uniform_selection(n, PairTag::W0);
  auto s = parse_selection(pairs);
  if (s.size() != n) throw validation_error("cli", "--pairs needs " + std::to_string(n) + " tags");
  return s;
}

inline RationalVector exponent(const std::string& d, std::size_t n) {
  if (d.empty()) throw validation_error("cli", "--d is required");
  auto v = parse_rational_list(d);
  if (v.size() != n) throw validation_error("cli", "--d needs " + std::to_string(n) + " entries");
  return v;
}

inline std::string k_text(const MultiIndex& k) { return k.str(); }

inline void add_k_columns(Report& r, std::size_t n, const std::string& prefix) {
  for (std::size_t i = 0; i < n; ++i) r.columns.push_back(prefix + std::to_string(i + 1));
}

inline Report reduce(const TrinomialSystem& sys, const RunConfig& cfg) {
  if (cfg.pairs.empty()) throw validation_error("cli", "--pairs is required");
  auto red = build_reduction(sys, selection_or_default(cfg.pairs, sys.n()));
  auto set_text = [](const std::vector<std::size_t>& s) {
    std::string t = "{";
    for (std::size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + std::to_string(s[i] + 1);
    return t + "}";
  };
  Report r;
  r.columns = {"quantity", "value"};
  std::string inv;
  for (auto& q : red.snf.invariants()) inv += (inv.empty() ? "" : ",") + q.str();
  r.rows = {{"pairs", to_string(red.selection)},
            {"kappa", io::matrix_text(red.kappa)},
            {"beta_bar", io::matrix_text(red.beta_bar)},
            {"det_kappa", red.det_kappa.str()},
            {"J", set_text(red.J)},
            {"L", set_text(red.L)},
            {"T", set_text(red.T)},
            {"kappa_inv", io::matrix_text(red.kappa_inv)},
            {"Phi", io::matrix_text(red.phi)},
            {"Psi", io::matrix_text(red.psi)},
            {"snf_invariants", "[" + inv + "]"},
            {"branches", std::to_string(red.branch_count())}};
  return r;
}

inline Report taylor(const TrinomialSystem& sys, const RunConfig& cfg) {
  auto red = build_reduction(sys, selection_or_default(cfg.pairs, sys.n()));
  TaylorSeries series(red, exponent(cfg.d, sys.n()));
  Report r;
  add_k_columns(r, sys.n(), "k");
  r.columns.insert(r.columns.end(), {"numerator", "denominator"});
  for (auto& [k, c] : series.coefficients(cfg.max_degree)) {
    std::vector<std::string> row;
    for (auto v : k.values()) row.push_back(std::to_string(v));
    row.push_back(numerator(c).str());
    row.push_back(denominator(c).str());
    r.rows.push_back(std::move(row));
  }
  r.summary.push_back({"pairs", to_string(red.selection)});
  r.summary.push_back({"terms", std::to_string(r.rows.size())});
  return r;
}

inline Report puiseux(const TrinomialSystem& sys, const RunConfig& cfg) {
  if (cfg.pairs.empty()) throw validation_error("cli", "--pairs is required");
  auto red = build_reduction(sys, selection_or_default(cfg.pairs, sys.n()));
  PuiseuxSeries series(red, exponent(cfg.d, sys.n()));
  Report r;
  add_k_columns(r, sys.n(), "k");
  add_k_columns(r, sys.n(), "m");
  r.columns.insert(r.columns.end(), {"numerator", "denominator", "phase"});
  for (auto& t : series.terms(cfg.max_degree)) {
    std::vector<std::string> row;
    for (auto v : t.k.values()) row.push_back(std::to_string(v));
    for (auto& m : t.support) row.push_back(to_string(m));
    row.push_back(numerator(t.coefficient.magnitude).str());
    row.push_back(denominator(t.coefficient.magnitude).str());
    row.push_back(to_string(t.coefficient.phase));
    r.rows.push_back(std::move(row));
  }
  r.summary.push_back({"pairs", to_string(red.selection)});
  r.summary.push_back({"phase_convention", "coefficient = numerator/denominator * exp(i pi phase)"});
  return r;
}

// Series values at x, one per branch (a single entry for Taylor).
inline std::vector<Complex> series_values(const Reduction& red, const RationalVector& d, const ComplexVector& x,
                                          std::int64_t max_degree, long branch) {
  if (red.is_identity_reduction()) {
    if (branch > 0) throw BranchOutOfRange("a Taylor series has only branch 0");
    TaylorSeries s(red, d);
    return {evaluate_taylor(s, x, max_degree)};
  }
  PuiseuxSeries s(red, d);
  if (branch >= 0) return {evaluate_puiseux(s, x, max_degree, static_cast<std::size_t>(branch))};
  return evaluate_puiseux_all_branches(s, x, max_degree);
}

inline Report eval(const TrinomialSystem& sys, const RunConfig& cfg) {
  auto red = build_reduction(sys, selection_or_default(cfg.pairs, sys.n()));
  auto d = exponent(cfg.d, sys.n());
  Report r;
  r.columns = {"point", "branch", "value"};
  for (auto& x : parse_points(cfg.x)) {
    if (x.size() != sys.n()) throw validation_error("cli", "--x has wrong dimension");
    auto vals = series_values(red, d, x, cfg.max_degree, cfg.branch);
    std::string pt;
    for (auto& v : x) pt += (pt.empty() ? "" : " ") + io::format_complex(v);
    for (std::size_t b = 0; b < vals.size(); ++b)
      r.rows.push_back({pt, std::to_string(cfg.branch >= 0 ? static_cast<std::size_t>(cfg.branch) : b),
                        io::format_complex(vals[b])});
    if (!red.is_identity_reduction()) {
      auto rr = monomial_change(red, x);
      std::string rt;
      for (auto& v : rr) rt += (rt.empty() ? "" : " ") + io::format_complex(v);
      r.summary.push_back({"reduced_coordinates", rt});
    }
  }
  r.summary.push_back({"pairs", to_string(red.selection)});
  r.summary.push_back({"branches", std::to_string(red.is_identity_reduction() ? 1 : red.branch_count())});
  return r;
}

inline Report verify(const TrinomialSystem& sys, const RunConfig& cfg) {
  auto red = build_reduction(sys, selection_or_default(cfg.pairs, sys.n()));
  auto d = exponent(cfg.d, sys.n());
  oracle::TrackOptions opt;
  opt.steps = cfg.steps;
  opt.tolerance = std::min(1e-12, cfg.tolerance);
  Report r;
  r.columns = {"point", "branch", "series", "oracle", "abs_delta"};
  double worst = 0.0;
  for (auto& x : parse_points(cfg.x)) {
    if (x.size() != sys.n()) throw validation_error("cli", "--x has wrong dimension");
    std::vector<ComplexVector> waypoints;
    if (!cfg.path.empty()) waypoints = parse_points(cfg.path);
    waypoints.push_back(x);
    Complex truth = oracle::continued_monomial(oracle::principal_path(sys, waypoints, opt), d);
    auto vals = series_values(red, d, x, cfg.max_degree, cfg.branch);
    double best = std::numeric_limits<double>::infinity();
    std::string pt;
    for (auto& v : x) pt += (pt.empty() ? "" : " ") + io::format_complex(v);
    for (std::size_t b = 0; b < vals.size(); ++b) {
      double delta = std::abs(vals[b] - truth);
      best = std::min(best, delta);
      r.rows.push_back({pt, std::to_string(cfg.branch >= 0 ? static_cast<std::size_t>(cfg.branch) : b),
                        io::format_complex(vals[b]), io::format_complex(truth), io::format_double(delta)});
    }
    worst = std::max(worst, best);
  }
  r.summary.push_back({"pairs", to_string(red.selection)});
  r.summary.push_back({"max_abs_delta", io::format_double(worst)});
  r.summary.push_back({"tolerance", io::format_double(cfg.tolerance)});
  r.verdict = worst < cfg.tolerance ? "PASS" : "FAIL";
  return r;
}

inline std::vector<RationalVector> parse_rays(const std::string& text) {
  std::vector<RationalVector> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_rational_list(item));
  return out;
}

inline Report mb_residues(const TrinomialSystem& sys, const RunConfig& cfg) {
  auto d = exponent(cfg.d, sys.n());
  std::optional<RationalVector> gamma;
  if (!cfg.gamma.empty()) gamma = parse_rational_list(cfg.gamma);
  auto data = MBIntegralData::build(sys, d, gamma);
  if (cfg.divisors.empty()) throw validation_error("cli", "--divisors is required");
  if (cfg.cone.empty()) throw validation_error("cli", "--cone is required");
  auto pairing = DivisorPairing::parse(cfg.divisors, sys.n());
  ResidueCone cone(data.gamma, parse_rays(cfg.cone));
  auto terms = residue_terms(data, pairing, cone, cfg.max_degree);
  Report r;
  r.columns = {"nu", "families"};
  add_k_columns(r, sys.n(), "z");
  r.columns.insert(r.columns.end(), {"coefficient", "exact"});
  for (auto& t : terms) {
    std::vector<std::string> row{t.point.nu.str()};
    std::string fam;
    for (auto f : t.point.families) fam += (fam.empty() ? "L" : ",L") + std::to_string(f + 1);
    row.push_back(fam);
    for (auto& z : t.point.z) row.push_back(to_string(z));
    row.push_back(t.exact ? to_string(*t.exact) : io::format_double(t.coefficient.real()));
    row.push_back(t.exact ? "1" : "0");
    r.rows.push_back(std::move(row));
  }
  r.summary.push_back({"gamma", io::rational_list(data.gamma)});
  r.summary.push_back({"divisors", pairing.str()});
  r.summary.push_back({"convergence_nonempty", convergence_nonempty(sys.sigma()) ? "true" : "false"});
  if (!data.non_confluent()) r.summary.push_back({"warning", "integrand is confluent"});
  if (!cfg.x.empty()) {
    for (auto& x : parse_points(cfg.x)) {
      Complex s = 0.0;
      for (auto& t : terms) s += t.coefficient * principal_monomial(x, t.exponent);
      r.summary.push_back({"residue_sum", io::format_complex(s)});
    }
  }
  return r;
}

inline Report amoeba(const TrinomialSystem& sys, const RunConfig& cfg) {
  GridSpec grid{io::parse_real_list(cfg.lo), io::parse_real_list(cfg.hi), cfg.step};
  if (grid.lo.size() != sys.n() || grid.hi.size() != sys.n())
    throw validation_error("cli", "--lo/--hi need " + std::to_string(sys.n()) + " entries");
  if (cfg.step <= 0) throw validation_error("cli", "--step must be positive");
  MembershipOptions opt;
  opt.attempts = cfg.attempts;
  opt.tolerance = cfg.tolerance;
  opt.seed = cfg.seed;
  auto g = amoeba_scan(sys, grid, opt);
  Report r;
  for (std::size_t a = 0; a < sys.n(); ++a) r.columns.push_back("rho" + std::to_string(a + 1));
  r.columns.insert(r.columns.end(), {"member", "score"});
  char buf[32];
  for (auto& c : g.cells) {
    std::vector<std::string> row;
    for (double v : c.rho) {
      std::snprintf(buf, sizeof buf, "%.6g", v);
      row.push_back(buf);
    }
    row.push_back(c.member ? "1" : "0");
    std::snprintf(buf, sizeof buf, "%.6g", c.score);
    row.push_back(buf);
    r.rows.push_back(std::move(row));
  }
  if (sys.n() == 2 && !g.cells.empty()) {
    r.summary.push_back({"amoeba_components", std::to_string(count_components(g, true, true))});
    r.summary.push_back({"complement_components", std::to_string(count_components(g, false, false))});
  }
  return r;
}

inline void render(std::ostream& os, const Report& r, const RunConfig& cfg, const std::string& hash) {
  if (cfg.format == "json") {
    io::json j;
    j["tool"] = std::string("trinom ") + kVersion;
    j["seed"] = cfg.seed;
    j["input"] = hash;
    j["columns"] = r.columns;
    j["rows"] = r.rows;
    io::json s = io::json::object();
    for (auto& [k, v] : r.summary) s[k] = v;
    j["summary"] = s;
    if (r.verdict) j["result"] = *r.verdict;
    os << j.dump(1) << "\n";
    return;
  }
  os << "# trinom " << kVersion << " seed=" << cfg.seed << " input=" << hash << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << "\n";
  for (auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << io::csv_field(row[i]);
    os << "\n";
  }
  for (auto& [k, v] : r.summary) os << "# " << k << "=" << v << "\n";
  if (r.verdict) os << *r.verdict << "\n";
}

}  // namespace detail

inline Report dispatch(const RunConfig& cfg, const TrinomialSystem& sys) {
  if (cfg.subcommand == "reduce") return detail::reduce(sys, cfg);
  if (cfg.subcommand == "taylor") return detail::taylor(sys, cfg);
  if (cfg.subcommand == "puiseux") return detail::puiseux(sys, cfg);
  if (cfg.subcommand == "eval") return detail::eval(sys, cfg);
  if (cfg.subcommand == "verify") return detail::verify(sys, cfg);
  if (cfg.subcommand == "mb-residues") return detail::mb_residues(sys, cfg);
  if (cfg.subcommand == "amoeba") return detail::amoeba(sys, cfg);
  throw validation_error("cli", "unknown subcommand '" + cfg.subcommand + "'");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Series expansions for principal solutions of trinomial systems", "trinom"};
  app.set_version_flag("--version", std::string("trinom ") + kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--system", cfg.system_path, "system JSON file")->required();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--output,-o", cfg.output, "write to file instead of standard output");
  };
  auto series_opts = [&](CLI::App* sub, bool need_x) {
    sub->add_option("--pairs", cfg.pairs, "pair tags per equation, e.g. s0,w0");
    sub->add_option("--d", cfg.d, "monomial exponent, e.g. 1,1 or 1/2,0")->required();
    sub->add_option("--max-degree", cfg.max_degree, "largest |k|")->capture_default_str();
    if (need_x) {
      sub->add_option("--x", cfg.x, "point(s) a,b[;c,d], complex as 1+2i")->required();
      sub->add_option("--branch", cfg.branch, "radical branch (default: all)");
    }
  };

  auto* reduce = app.add_subcommand("reduce", "print the reduction data for a pair selection");
  common(reduce);
  reduce->add_option("--pairs", cfg.pairs, "pair tags per equation")->required();

  auto* taylor = app.add_subcommand("taylor", "exact Taylor coefficients");
  common(taylor);
  series_opts(taylor, false);

  auto* puiseux = app.add_subcommand("puiseux", "exact Puiseux coefficients and supports");
  common(puiseux);
  series_opts(puiseux, false);

  auto* eval = app.add_subcommand("eval", "evaluate a series");
  common(eval);
  series_opts(eval, true);

  auto* verify = app.add_subcommand("verify", "compare a series with the continuation oracle");
  common(verify);
  series_opts(verify, true);
  verify->add_option("--tol", cfg.tolerance, "pass threshold on the best branch")->capture_default_str();
  verify->add_option("--steps", cfg.steps, "initial continuation steps")->capture_default_str();
  verify->add_option("--path", cfg.path, "waypoints before x, a,b;c,d");

  auto* mb = app.add_subcommand("mb-residues", "residue lattice and coefficients of the Mellin-Barnes integral");
  common(mb);
  mb->add_option("--d", cfg.d, "monomial exponent")->required();
  mb->add_option("--divisors", cfg.divisors, "family groups, e.g. 3,4|1,2")->required();
  mb->add_option("--cone", cfg.cone, "rays r1;r2, e.g. 2,-1;-1,2")->required();
  mb->add_option("--gamma", cfg.gamma, "cone apex (default inside the convergence polytope)");
  mb->add_option("--max-degree", cfg.max_degree, "largest |nu|")->capture_default_str();
  mb->add_option("--x", cfg.x, "also report the residue sum at these points");

  auto* am = app.add_subcommand("amoeba", "sample the discriminant amoeba on a grid");
  common(am);
  am->add_option("--lo", cfg.lo, "lower corner")->capture_default_str();
  am->add_option("--hi", cfg.hi, "upper corner")->capture_default_str();
  am->add_option("--step", cfg.step, "grid step")->capture_default_str();
  am->add_option("--attempts", cfg.attempts, "starts per cell")->capture_default_str();
  am->add_option("--tol", cfg.tolerance, "residual tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    std::string text = io::read_file(cfg.system_path);
    auto sys = io::parse_system(text);
    std::uint64_t h = io::fnv1a(text);
    for (int i = 1; i < argc; ++i) h = io::fnv1a(std::string_view(argv[i], std::char_traits<char>::length(argv[i]) + 1), h);
    Report r = dispatch(cfg, sys);
    if (cfg.output.empty()) {
      detail::render(out, r, cfg, io::hex64(h));
    } else {
      std::ofstream f(cfg.output);
      if (!f) throw validation_error("cli", "cannot write '" + cfg.output + "'");
      detail::render(f, r, cfg, io::hex64(h));
    }
    if (r.verdict && *r.verdict != "PASS") return kNumerical;
    return kSuccess;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const numerical_error& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace trinom::cli
