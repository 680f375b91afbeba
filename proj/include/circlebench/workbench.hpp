#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "circlebench/analysis.hpp"
#include "circlebench/circle_map.hpp"
#include "circlebench/conjugacy.hpp"
#include "circlebench/partition.hpp"
#include "circlebench/report.hpp"
#include "circlebench/repro.hpp"
#include "circlebench/spec_json.hpp"

namespace circlebench {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_cap = 2, exit_io = 3 };

/// Everything one invocation needs. Unset paths are empty strings.
struct RunConfig {
  std::string command;     // validate | partition | conjugacy | analyze | repro
  std::string subcommand;  // analyze: qs|symmetry|uqs|measure|phi|tailsum; repro: falpha-uqs|rigidity-demo|all

  std::string map_path;
  std::string homeo_path;
  std::string from_path;
  std::string to_path;

  int level = -1;
  int coarse_level = 0;
  int grid = 16;
  double tolerance = defaults::conjugacy_tolerance;
  double x = 0.0;
  double t = 0.2;
  int n = 20;
  int j_max = 10;
  int dyadic_level = 8;
  std::string word = "0";
  int k_max = 10;
  bool enumerate = false;
  bool cells = false;
  double alpha = 0.6;

  bool json = false;
  std::string output_path;

  Limits limits{};
  int conjugacy_depth_cap = defaults::conjugacy_depth_cap;
};

/// Applies CIRCLEBENCH_WORK_CAP when set. Returns false on an unparsable value.
inline bool apply_environment(RunConfig& cfg) {
  const char* cap = std::getenv("CIRCLEBENCH_WORK_CAP");
  if (!cap || !*cap) return true;
  char* end = nullptr;
  const double value = std::strtod(cap, &end);
  if (end == cap || *end != '\0' || !(value > 0.0)) return false;
  cfg.limits.work_cap = value;
  return true;
}

namespace cli {

/// Refinement of h never goes deeper than the word depth cap.
inline int conjugacy_depth(const RunConfig& cfg) { return std::min(cfg.conjugacy_depth_cap, cfg.limits.depth_cap); }

inline void echo_limits(Table& t, const RunConfig& cfg) {
  t.meta("depth_cap", cfg.limits.depth_cap)
      .meta("cell_cap", static_cast<std::int64_t>(cfg.limits.cell_cap))
      .meta("work_cap", cfg.limits.work_cap);
}

inline CircleMap load_map(const std::string& path, const char* flag) {
  if (path.empty()) throw std::invalid_argument(std::string("missing --") + flag);
  return CircleMap::create(load_map_spec(path));
}

inline Table validate_cmd(const RunConfig& cfg) {
  Table t("validate");
  t.columns({"check", "location", "detail"});
  ValidationReport report;
  if (!cfg.map_path.empty()) {
    t.meta("map", cfg.map_path);
    report = validate(load_map_spec(cfg.map_path));
  } else if (!cfg.homeo_path.empty()) {
    t.meta("homeo", cfg.homeo_path);
    report = validate(load_homeo_spec(cfg.homeo_path));
  } else {
    throw std::invalid_argument("validate needs --map or --homeo");
  }
  t.meta("subject", report.subject);
  for (const auto& v : report.violations) t.add_row({v.check, v.location, v.detail});
  if (!report.ok()) t.set_status("invalid");
  return t;
}

inline Table partition_cmd(const RunConfig& cfg) {
  if (cfg.level < 0) throw std::invalid_argument("partition needs --level");
  const auto map = load_map(cfg.map_path, "map");
  Table t("partition");
  t.meta("map", cfg.map_path).meta("level", cfg.level).meta("solver_tolerance", map.solver_tolerance())
      .meta("endpoint_radius", map.endpoint_radius(cfg.level));
  echo_limits(t, cfg);
  t.columns({"word", "left", "right", "length"});
  for (const auto& c : enumerate_level(map, cfg.level, cfg.limits)) t.add_row({c.word.to_string(), c.left, c.right, c.length});
  return t;
}

inline Table conjugacy_cmd(const RunConfig& cfg) {
  const auto f = load_map(cfg.from_path, "from");
  const auto g = load_map(cfg.to_path, "to");
  Table t("conjugacy");
  t.meta("from", cfg.from_path).meta("to", cfg.to_path);
  if (cfg.level >= 0) {
    const auto table = endpoint_table(f, g, cfg.level, cfg.limits);
    t.meta("level", cfg.level)
        .meta("f_endpoint_radius", f.endpoint_radius(cfg.level))
        .meta("g_endpoint_radius", g.endpoint_radius(cfg.level));
    t.columns({"word", "f_endpoint", "g_endpoint"});
    for (std::size_t m = 0; m < table.size(); ++m)
      t.add_row({table.word(m).to_string(), table.f_endpoints[m], table.g_endpoints[m]});
    return t;
  }
  if (cfg.grid < 1) throw std::invalid_argument("--grid must be positive");
  const Conjugacy h(f, g, {conjugacy_depth(cfg)});
  t.meta("grid", cfg.grid).meta("tolerance", cfg.tolerance).meta("conjugacy_depth_cap", conjugacy_depth(cfg));
  t.columns({"x", "h_lo", "h_hi", "depth"});
  bool converged = true;
  for (int j = 0; j < cfg.grid; ++j) {
    const auto e = h.eval(static_cast<double>(j) / cfg.grid, cfg.tolerance);
    converged = converged && e.converged;
    t.add_row({e.x, e.lo, e.hi, static_cast<std::int64_t>(e.depth)});
  }
  if (!converged) t.set_status("tolerance_unreachable");
  return t;
}

/// The homeomorphism for qs/symmetry: a sine composition from --homeo, or the
/// conjugacy between --from and --to evaluated at --tol.
struct HomeoSource {
  std::optional<CircleHomeoSpec> spec;
  std::optional<ConjugacyLift> conjugacy;
  double resolution = 0.0;

  double operator()(double x) const { return spec ? spec->lift(x) : (*conjugacy)(x); }
};

inline HomeoSource load_homeo_source(const RunConfig& cfg, Table& t) {
  HomeoSource src;
  if (!cfg.homeo_path.empty()) {
    auto spec = load_homeo_spec(cfg.homeo_path);
    if (auto r = validate(spec); !r.ok()) throw ValidationError(r.summary());
    t.meta("homeo", cfg.homeo_path);
    src.spec = std::move(spec);
    src.resolution = 0.0;
  } else {
    const auto f = load_map(cfg.from_path, "from");
    const auto g = load_map(cfg.to_path, "to");
    t.meta("from", cfg.from_path).meta("to", cfg.to_path).meta("tolerance", cfg.tolerance);
    src.conjugacy.emplace(ConjugacyLift{Conjugacy(f, g, {conjugacy_depth(cfg)}), cfg.tolerance});
    src.resolution = cfg.tolerance;
  }
  return src;
}

inline Table analyze_cmd(const RunConfig& cfg) {
  const std::string& sub = cfg.subcommand;
  Table t("analyze " + sub);
  if (sub == "qs") {
    const auto h = load_homeo_source(cfg, t);
    t.meta("x", cfg.x).meta("t", cfg.t);
    t.columns({"x", "t", "ratio", "h_resolution"});
    t.add_row({cfg.x, cfg.t, qs_ratio(h, cfg.x, cfg.t), h.resolution});
  } else if (sub == "symmetry") {
    const auto h = load_homeo_source(cfg, t);
    const auto scales = dyadic_scales(cfg.j_max);
    const auto rep = symmetry_modulus(h, scales, cfg.grid, h.resolution);
    t.meta("grid", cfg.grid).meta("scales", "2^-j for j=1.." + std::to_string(cfg.j_max)).meta("note", rep.note);
    t.columns({"t", "epsilon_hat", "argmax_x", "h_resolution"});
    for (const auto& r : rep.rows) t.add_row({r.scale, r.value, r.argmax_x, h.resolution});
  } else if (sub == "uqs") {
    const auto map = load_map(cfg.map_path, "map");
    t.meta("map", cfg.map_path).meta("x", cfg.x).meta("t", cfg.t).meta("n", cfg.n);
    t.columns({"n", "ratio", "solver_tolerance"});
    for (int k = 1; k <= cfg.n; ++k)
      t.add_row({static_cast<std::int64_t>(k), uqs_ratio_endo(map, cfg.x, cfg.t, k, cfg.limits), map.step_error()});
  } else if (sub == "measure") {
    const auto map = load_map(cfg.map_path, "map");
    const auto intervals = dyadic_intervals(cfg.dyadic_level);
    t.meta("map", cfg.map_path).meta("dyadic_level", cfg.dyadic_level)
        .meta("max_deviation", measure_deviation(map, intervals));
    t.columns({"a", "b", "preimage_length", "deviation", "solver_tolerance"});
    const double err = 2.0 * map.degree() * map.step_error();
    for (const auto& iv : intervals) {
      const double len = preimage_length(map, iv.a, iv.b);
      t.add_row({iv.a, iv.b, len, len - (iv.b - iv.a), err});
    }
  } else if (sub == "phi") {
    if (cfg.level < 1) throw std::invalid_argument("analyze phi needs --level >= 1");
    const auto f = load_map(cfg.from_path, "from");
    const auto g = load_map(cfg.to_path, "to");
    const auto rep = dilatation_report(f, g, cfg.level, cfg.coarse_level, cfg.limits);
    t.meta("from", cfg.from_path).meta("to", cfg.to_path).meta("level", cfg.level)
        .meta("coarse_level", cfg.coarse_level)
        .meta("length_error", f.endpoint_radius(cfg.level) + g.endpoint_radius(cfg.level));
    if (cfg.cells) {
      t.columns({"cell", "max_ratio", "argmax_word"});
      for (const auto& c : rep.cells) t.add_row({c.cell.to_string(), c.max_ratio, c.argmax.to_string()});
    } else {
      t.columns({"level", "Phi", "phi"});
      for (std::size_t k = 0; k < rep.Phi_by_level.size(); ++k)
        t.add_row({static_cast<std::int64_t>(k + 1), rep.Phi_by_level[k], rep.phi_by_level[k]});
      t.meta("argmax_word", rep.argmax_word.to_string()).meta("argmin_word", rep.argmin_word.to_string());
    }
  } else if (sub == "tailsum") {
    const auto map = load_map(cfg.map_path, "map");
    TailSumOptions opts;
    opts.limits = cfg.limits;
    opts.force_enumeration = cfg.enumerate;
    const auto rep = tail_sum(map, Word::parse(cfg.word), cfg.k_max, opts);
    t.meta("map", cfg.map_path).meta("word", cfg.word).meta("k_max", cfg.k_max)
        .meta("closed_form", rep.closed_form ? "true" : "false").meta("A", rep.A)
        .meta("geometry_constant", rep.geometry_constant).meta("geometry_level", rep.geometry_level)
        .meta("geometry_A", rep.geometry_A);
    t.columns({"k", "S_k", "bound", "geometry_bound", "count", "sum_error"});
    const double err = map.endpoint_radius(map.degree() * cfg.k_max);
    for (const auto& r : rep.rows)
      t.add_row({static_cast<std::int64_t>(r.k), r.sum, r.bound, r.geometry_bound, r.count, r.count * 2.0 * err});
  } else {
    throw std::invalid_argument("unknown analyze subcommand '" + sub + "'");
  }
  echo_limits(t, cfg);
  return t;
}

inline void add_repro_rows(Table& t, const std::vector<ReproRow>& rows) {
  t.columns({"id", "status", "measured", "comparison", "threshold", "description", "note"});
  bool unreachable = false, failed = false;
  for (const auto& r : rows) {
    t.add_row({r.id, r.status, r.measured, r.comparison, r.threshold, r.description, r.note});
    unreachable = unreachable || r.status == "unreachable";
    failed = failed || !r.passed();
  }
  if (unreachable) t.set_status("tolerance_unreachable");
  else if (failed) t.set_status("failed");
}

inline Table repro_cmd(const RunConfig& cfg) {
  Table t("repro " + cfg.subcommand);
  ReproConfig rc;
  rc.limits = cfg.limits;
  rc.conjugacy_depth_cap = conjugacy_depth(cfg);
  if (cfg.subcommand == "falpha-uqs") {
    t.meta("alpha", cfg.alpha).meta("t", cfg.t).meta("n", cfg.n);
    t.columns({"n", "ratio", "expected", "relative_error"});
    for (const auto& r : falpha_uqs_table(cfg.alpha, cfg.t, cfg.n, cfg.limits))
      t.add_row({static_cast<std::int64_t>(r.n), r.ratio, r.expected, r.relative_error});
  } else if (cfg.subcommand == "rigidity-demo") {
    t.meta("conjugacy_depth_cap", conjugacy_depth(cfg));
    add_repro_rows(t, {repro::guarded("6-identity-rigidity", [&] { return repro::identity_rigidity(rc); }),
                       repro::guarded("7-rigidity-contrapositive", [&] { return repro::rigidity_contrapositive(rc); })});
  } else if (cfg.subcommand == "all") {
    t.meta("conjugacy_depth_cap", conjugacy_depth(cfg)).meta("seed", static_cast<std::int64_t>(rc.seed));
    add_repro_rows(t, repro_suite(rc));
  } else {
    throw std::invalid_argument("unknown repro subcommand '" + cfg.subcommand + "'");
  }
  echo_limits(t, cfg);
  return t;
}

inline int status_exit_code(const std::string& status) {
  if (status == "ok") return exit_ok;
  if (status == "invalid" || status == "failed") return exit_validation;
  return exit_cap;
}

}  // namespace cli

/// Dispatches one command, writes its report to `out` (or cfg.output_path),
/// and returns the exit code: 0 ok, 1 validation, 2 cap/tolerance, 3 I/O.
/// Reports flagged as partial are still written in full.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Table> table;
  try {
    if (cfg.command == "validate") table = cli::validate_cmd(cfg);
    else if (cfg.command == "partition") table = cli::partition_cmd(cfg);
    else if (cfg.command == "conjugacy") table = cli::conjugacy_cmd(cfg);
    else if (cfg.command == "analyze") table = cli::analyze_cmd(cfg);
    else if (cfg.command == "repro") table = cli::repro_cmd(cfg);
    else throw std::invalid_argument("unknown command '" + cfg.command + "'");
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return exit_cap;
  } catch (const ResolutionExhausted& e) {
    err << "error: " << e.what() << '\n';
    return exit_cap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }

  std::ostringstream text;
  if (cfg.json) table->write_json(text);
  else table->write_csv(text);
  if (cfg.output_path.empty()) {
    out << text.str();
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    file << text.str();
    if (!file) {
      err << "error: cannot write " << cfg.output_path << '\n';
      return exit_io;
    }
  }
  const int code = cli::status_exit_code(table->status());
  if (code != exit_ok) err << "status: " << table->status() << '\n';
  return code;
}

}  // namespace circlebench
