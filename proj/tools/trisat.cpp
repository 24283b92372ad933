// trisat: generate hard k-SAT instances, inspect their constraint graphs,
// solve them with the reference DPLL solver and run difficulty sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error. `solve` follows the
// SAT competition convention instead: 10 satisfiable, 20 unsatisfiable,
// 0 unknown.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "trisat/bench.hpp"
#include "trisat/constraint_graph.hpp"
#include "trisat/generators.hpp"
#include "trisat/ref_solver.hpp"
#include "trisat/sat_core.hpp"

namespace {

using namespace trisat;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Bad flag values detected after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t resolve_seed(const std::string& text, std::ostream& notice) {
  if (text == "random") {
    std::random_device device;
    std::uint64_t seed = (static_cast<std::uint64_t>(device()) << 32) | device();
    notice << "seed: " << seed << '\n';
    return seed;
  }
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("--seed must be an unsigned integer or 'random', got '{}'", text));
  }
  return seed;
}

GenKind resolve_kind(const std::string& text) {
  auto kind = parse_gen_kind(text);
  if (!kind) throw UsageError(fmt::format("unknown generator kind '{}'", text));
  return *kind;
}

std::vector<GenKind> resolve_kinds(const std::string& text) {
  if (text == "all") return {GenKind::random, GenKind::balanced, GenKind::no_triangle};
  std::vector<GenKind> kinds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) kinds.push_back(resolve_kind(item));
  return kinds;
}

SolveLimits resolve_limits(std::uint64_t max_decisions, double max_time) {
  SolveLimits limits;
  if (max_decisions > 0) limits.max_decisions = max_decisions;
  if (max_time > 0) {
    limits.max_wall_time = std::chrono::milliseconds(static_cast<long long>(max_time * 1000));
  }
  return limits;
}

// --- generate -------------------------------------------------------------

struct GenerateOptions {
  std::string kind = "random";
  std::uint32_t k = 3;
  Var n = 0;
  std::uint32_t m = 0;
  std::string seed;
  std::string out;
  bool comment = false;
};

int cmd_generate(const GenerateOptions& opt) {
  GenParams params;
  params.kind = resolve_kind(opt.kind);
  params.k = opt.k;
  params.n = opt.n;
  params.m = opt.m;
  try {
    validate(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ostream& info = opt.out.empty() ? std::cerr : std::cout;
  params.seed = resolve_seed(opt.seed, info);

  GenerationReport report;
  Instance instance = generate(params, &report);
  std::string text = write_dimacs(instance, opt.comment ? provenance_comment(params) : "");
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_file(opt.out, text);
  }

  GraphStats stats = compute_stats(build_graph(instance));
  info << fmt::format(
      "generated {} k={} n={} m={} seed={}\nrepeated pairs: {}\ntriangles: {}\n"
      "cluster coefficient: {:.6f}\naverage distance: {:.6f}\n",
      to_string(params.kind), params.k, params.n, params.m, params.seed, stats.repeated_pairs,
      stats.triangles, stats.cluster_coefficient, stats.average_distance);
  if (report.duplicate_clauses > 0) {
    std::cerr << "warning: " << report.duplicate_clauses << " duplicate clause(s) emitted\n";
  }
  return 0;
}

// --- stats ----------------------------------------------------------------

int cmd_stats(const std::string& path, bool json) {
  Instance instance = read_dimacs_file(path);
  GraphStats stats = compute_stats(build_graph(instance));
  if (json) {
    nlohmann::ordered_json j;
    j["variables"] = instance.variable_count();
    j["clauses"] = instance.clause_count();
    j["arity"] = instance.arity();
    j["repeated_pairs"] = stats.repeated_pairs;
    j["triangles"] = stats.triangles;
    j["incomplete_triangles"] = stats.incomplete_triangles;
    j["cluster_coefficient"] = stats.cluster_coefficient;
    j["average_distance"] = stats.average_distance;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << fmt::format(
        "variables: {}\nclauses: {}\narity: {}\nrepeated pairs: {}\ntriangles: {}\n"
        "incomplete triangles: {}\ncluster coefficient: {:.6f}\naverage distance: {:.6f}\n",
        instance.variable_count(), instance.clause_count(), instance.arity(), stats.repeated_pairs,
        stats.triangles, stats.incomplete_triangles, stats.cluster_coefficient,
        stats.average_distance);
  }
  return 0;
}

// --- solve ----------------------------------------------------------------

struct SolveOptions {
  std::string path;
  std::uint64_t max_decisions = 0;
  double max_time = 0;
  bool json = false;
  bool model = false;
};

int cmd_solve(const SolveOptions& opt) {
  Instance instance = read_dimacs_file(opt.path);
  SolveResult result = solve(instance, resolve_limits(opt.max_decisions, opt.max_time));

  if (opt.json) {
    nlohmann::ordered_json j;
    j["status"] = std::string(to_string(result.status));
    j["decisions"] = result.decisions;
    j["backtracks"] = result.backtracks;
    j["propagations"] = result.propagations;
    if (opt.model && result.model) {
      std::vector<int> values;
      for (Var v = 1; v <= instance.variable_count(); ++v) {
        values.push_back(result.model->value(v) ? static_cast<int>(v) : -static_cast<int>(v));
      }
      j["model"] = values;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    const char* line = result.status == SolveStatus::sat     ? "s SATISFIABLE"
                       : result.status == SolveStatus::unsat ? "s UNSATISFIABLE"
                                                             : "s UNKNOWN";
    std::string text = fmt::format("{}\nc decisions: {}\nc backtracks: {}\nc propagations: {}\n",
                                   line, result.decisions, result.backtracks, result.propagations);
    if (opt.model && result.model) {
      text += "v";
      for (Var v = 1; v <= instance.variable_count(); ++v) {
        fmt::format_to(std::back_inserter(text), " {}",
                       result.model->value(v) ? static_cast<int>(v) : -static_cast<int>(v));
      }
      text += " 0\n";
    }
    std::cout << text;
  }
  switch (result.status) {
    case SolveStatus::sat:
      return 10;
    case SolveStatus::unsat:
      return 20;
    default:
      return 0;
  }
}

// --- bench ----------------------------------------------------------------

struct BenchOptions {
  std::string kind = "all";
  std::uint32_t k = 3;
  Var n = 0;
  std::uint32_t m_from = 0;
  std::uint32_t m_to = 0;
  std::uint32_t step = 10;
  std::vector<std::uint32_t> m_values;
  std::uint32_t runs = 1;
  std::string solver = "internal";
  std::string solver_cmd;
  std::string decision_regex = R"(decisions:\s+(\d+))";
  std::string seed;
  std::string out;
  std::string records;
  std::string series;
  unsigned workers = 1;
  std::uint64_t max_decisions = 0;
  double max_time = 0;
  bool with_exclusions = false;
};

std::string aggregate_path(const std::string& out, GenKind kind, bool several) {
  if (!several) return out;
  std::filesystem::path p(out);
  std::string kind_name(to_string(kind));
  return (p.parent_path() / (p.stem().string() + "." + kind_name + p.extension().string())).string();
}

void print_peaks(GenKind kind, const std::vector<AggregateRow>& rows) {
  try {
    Peak peak = locate_peak(rows);
    GuaranteedPeak easiest = locate_guaranteed_peak(rows);
    std::cout << fmt::format("{}: peak mean decisions {:.2f} at m={}; guaranteed {} at m={}\n",
                             to_string(kind), peak.mean_decisions, peak.m, easiest.min_decisions,
                             easiest.m);
  } catch (const std::invalid_argument&) {
    std::cout << fmt::format("{}: no solved runs\n", to_string(kind));
  }
}

int cmd_bench(const BenchOptions& opt) {
  CampaignConfig config;
  config.k = opt.k;
  config.n = opt.n;
  config.kinds = resolve_kinds(opt.kind);
  config.runs_per_point = opt.runs;
  config.workers = opt.workers;
  config.limits = resolve_limits(opt.max_decisions, opt.max_time);
  try {
    config.m_values = opt.m_values.empty() ? m_range(opt.m_from, opt.m_to, opt.step) : opt.m_values;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (opt.solver == "external") {
    if (opt.solver_cmd.empty()) throw UsageError("--solver external requires --solver-cmd");
    config.external = ExternalSolver{opt.solver_cmd, opt.decision_regex, {}};
  } else if (opt.solver != "internal") {
    throw UsageError(fmt::format("--solver must be 'internal' or 'external', got '{}'", opt.solver));
  }
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  config.base_seed = resolve_seed(opt.seed, std::cout);

  std::vector<RunRecord> records = run_campaign(config);

  std::size_t errors = 0;
  for (const RunRecord& r : records) {
    if (r.status == RunStatus::error) {
      ++errors;
      std::cerr << fmt::format("error: {} m={} run={}: {}\n", to_string(r.kind), r.m, r.run,
                               r.error);
    }
  }

  if (!opt.records.empty()) {
    std::ostringstream text;
    write_records_csv(text, records);
    write_file(opt.records, text.str());
  }

  std::vector<Series> series;
  const bool several = config.kinds.size() > 1;
  for (GenKind kind : config.kinds) {
    std::vector<RunRecord> subset;
    for (const RunRecord& r : records) {
      if (r.kind == kind) subset.push_back(r);
    }
    std::vector<AggregateRow> rows = aggregate(subset);
    print_peaks(kind, rows);
    if (!opt.out.empty()) {
      std::ostringstream text;
      write_aggregate_csv(text, rows, opt.with_exclusions);
      write_file(aggregate_path(opt.out, kind, several), text.str());
    }
    series.push_back(Series{kind, std::move(rows)});
  }
  if (!opt.series.empty()) {
    std::ostringstream text;
    write_series_csv(text, series);
    write_file(opt.series, text.str());
  }
  if (errors > 0) std::cerr << errors << " run(s) failed\n";
  return 0;
}

// --- aggregate ------------------------------------------------------------

struct AggregateOptions {
  std::string path;
  std::string kind;
  std::string out;
  bool with_exclusions = false;
};

int cmd_aggregate(const AggregateOptions& opt) {
  std::ifstream in(opt.path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", opt.path));
  std::vector<RunRecord> records = read_records_csv(in);
  if (!opt.kind.empty()) {
    GenKind kind = resolve_kind(opt.kind);
    std::erase_if(records, [kind](const RunRecord& r) { return r.kind != kind; });
  }
  std::vector<AggregateRow> rows = aggregate(records);
  std::ostringstream text;
  write_aggregate_csv(text, rows, opt.with_exclusions);
  if (opt.out.empty()) {
    std::cout << text.str();
  } else {
    write_file(opt.out, text.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard k-SAT instance generation and difficulty benchmarking"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate an instance as DIMACS CNF");
  generate_cmd->add_option("--kind", gen.kind, "random | balanced | no-triangle")
      ->capture_default_str();
  generate_cmd->add_option("-k", gen.k, "Clause length")->capture_default_str();
  generate_cmd->add_option("-n", gen.n, "Variable count")->required();
  generate_cmd->add_option("-m", gen.m, "Clause count")->required();
  generate_cmd->add_option("--seed", gen.seed, "Unsigned 64-bit seed or 'random'")->required();
  generate_cmd->add_option("-o,--out", gen.out, "Output file (default: standard output)");
  generate_cmd->add_flag("--comment", gen.comment, "Prefix a provenance comment line");

  std::string stats_path;
  bool stats_json = false;
  auto* stats_cmd = app.add_subcommand("stats", "Constraint-graph statistics of a CNF file");
  stats_cmd->add_option("cnf", stats_path, "DIMACS file")->required();
  stats_cmd->add_flag("--json", stats_json, "Machine-readable output");

  SolveOptions sol;
  auto* solve_cmd = app.add_subcommand("solve", "Solve with the reference DPLL solver");
  solve_cmd->add_option("cnf", sol.path, "DIMACS file")->required();
  solve_cmd->add_option("--max-decisions", sol.max_decisions, "Decision budget (0 = none)");
  solve_cmd->add_option("--max-time", sol.max_time, "Wall-time budget in seconds (0 = none)");
  solve_cmd->add_flag("--json", sol.json, "Machine-readable output");
  solve_cmd->add_flag("--model", sol.model, "Print the satisfying assignment");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a difficulty sweep over clause counts");
  bench_cmd->add_option("--kind", bench.kind, "all, or a comma list of generator kinds")
      ->capture_default_str();
  bench_cmd->add_option("-k", bench.k, "Clause length")->capture_default_str();
  bench_cmd->add_option("-n", bench.n, "Variable count")->required();
  auto* m_from = bench_cmd->add_option("--m-from", bench.m_from, "First clause count");
  auto* m_to = bench_cmd->add_option("--m-to", bench.m_to, "Last clause count");
  bench_cmd->add_option("--step", bench.step, "Clause count step")->capture_default_str();
  auto* m_values = bench_cmd->add_option("--m-values", bench.m_values, "Explicit clause counts")
                       ->delimiter(',');
  m_from->needs(m_to);
  m_to->needs(m_from);
  m_values->excludes(m_from)->excludes(m_to);
  bench_cmd->add_option("--runs", bench.runs, "Instances per clause count")->capture_default_str();
  bench_cmd->add_option("--solver", bench.solver, "internal | external")->capture_default_str();
  bench_cmd->add_option("--solver-cmd", bench.solver_cmd,
                        "External solver command; {cnf} is replaced by the instance path");
  bench_cmd->add_option("--decision-regex", bench.decision_regex,
                        "Regex whose first group is the decision count")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Base seed or 'random'")->required();
  bench_cmd->add_option("--out", bench.out,
                        "Aggregate CSV (one file per kind, suffixed, when several)");
  bench_cmd->add_option("--records", bench.records, "Raw per-run CSV");
  bench_cmd->add_option("--series", bench.series, "kind,m,mean_decisions CSV for plotting");
  bench_cmd->add_option("--workers", bench.workers, "Parallel runs")->capture_default_str();
  bench_cmd->add_option("--max-decisions", bench.max_decisions, "Per-run decision budget");
  bench_cmd->add_option("--max-time", bench.max_time, "Per-run wall-time budget in seconds");
  bench_cmd->add_flag("--with-exclusions", bench.with_exclusions,
                      "Append limited,errors columns to the aggregate CSV");

  AggregateOptions agg;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregate a records CSV per clause count");
  aggregate_cmd->add_option("records", agg.path, "Records CSV written by bench --records")
      ->required();
  aggregate_cmd->add_option("--kind", agg.kind, "Keep only this generator kind");
  aggregate_cmd->add_option("--out", agg.out, "Output file (default: standard output)");
  aggregate_cmd->add_flag("--with-exclusions", agg.with_exclusions,
                          "Append limited,errors columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*generate_cmd) return cmd_generate(gen);
    if (*stats_cmd) return cmd_stats(stats_path, stats_json);
    if (*solve_cmd) return cmd_solve(sol);
    if (*bench_cmd) {
      if (bench.m_values.empty() && !*m_from) throw UsageError("give --m-from/--m-to or --m-values");
      return cmd_bench(bench);
    }
    if (*aggregate_cmd) return cmd_aggregate(agg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
