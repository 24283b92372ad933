#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisat/generators.hpp"
#include "trisat/ref_solver.hpp"
#include "trisat/sat_core.hpp"

namespace trisat {

// ---------------------------------------------------------------------------
// External solvers
// ---------------------------------------------------------------------------

/// A DIMACS solver driven as a subprocess. `command_template` is run through
/// /bin/sh with every `{cnf}` replaced by the (quoted) instance path.
struct ExternalSolver {
  std::string command_template;
  /// Searched in the combined stdout/stderr; the first capture group is the
  /// decision count.
  std::string decision_regex;
  /// Where instance files are written. Empty means the system temp dir.
  std::filesystem::path temp_dir;
};

class ExternalSolverError : public std::runtime_error {
 public:
  enum class Kind { launch_failure, unknown_status };
  ExternalSolverError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ExternalRunResult {
  SolveStatus status = SolveStatus::limit_exceeded;
  /// Absent when the regex did not match.
  std::optional<std::uint64_t> decisions;
  int exit_code = -1;
  /// Set when the instance file was kept for inspection.
  std::optional<std::filesystem::path> kept_file;
};

/// Writes the instance to a temp file, runs the solver and classifies the
/// result by exit code 10/20 or an `s SATISFIABLE` / `s UNSATISFIABLE` line.
/// Exceeding limits.max_wall_time kills the process group and reports
/// limit_exceeded. The temp file is removed unless the output could not be
/// fully parsed. Throws ExternalSolverError.
ExternalRunResult external_solver_run(const Instance& instance, const ExternalSolver& solver,
                                      const SolveLimits& limits = {});

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

struct CampaignConfig {
  std::uint32_t k = 3;
  Var n = 0;
  std::vector<std::uint32_t> m_values;
  std::uint32_t runs_per_point = 1;
  std::vector<GenKind> kinds;
  /// Internal DPLL when absent.
  std::optional<ExternalSolver> external;
  std::uint64_t base_seed = 0;
  SolveLimits limits;
  unsigned workers = 1;
};

/// m_min..m_max inclusive in steps of `step`.
std::vector<std::uint32_t> m_range(std::uint32_t m_min, std::uint32_t m_max, std::uint32_t step);

/// Throws std::invalid_argument on empty m_values or kinds, runs_per_point or
/// workers of 0, or generator parameters that fail validate().
void validate(const CampaignConfig& config);

/// Seed of run `run` at clause count m for a generator kind. Independent of
/// which other kinds and m values a campaign contains.
std::uint64_t campaign_seed(std::uint64_t base_seed, GenKind kind, std::uint32_t m,
                            std::uint32_t run);

enum class RunStatus { sat, unsat, limit, error };

std::string_view to_string(RunStatus status);
std::optional<RunStatus> parse_run_status(std::string_view name);

struct RunRecord {
  GenKind kind = GenKind::random;
  std::uint32_t k = 0;
  Var n = 0;
  std::uint32_t m = 0;
  std::uint32_t run = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::error;
  std::optional<std::uint64_t> decisions;
  std::uint64_t repeated_pairs = 0;
  double avg_distance = 0.0;
  double cluster_coeff = 0.0;
  /// Non-empty only for status == error.
  std::string error;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Generates, measures and solves every (kind, m, run) point. Records come
/// back in (kind order of the config, ascending m as listed, run) order no
/// matter how many workers ran. Per-record failures become error records.
std::vector<RunRecord> run_campaign(const CampaignConfig& config);

/// One row of the per-clause-count summary. Decision statistics cover only
/// the `decided` runs (solved with a known decision count); graph statistics
/// cover all `runs`. Error records are counted in `errors` only.
struct AggregateRow {
  std::uint32_t m = 0;
  std::uint32_t runs = 0;
  std::uint32_t sat_count = 0;
  std::uint64_t decisions_min = 0;
  std::uint64_t decisions_total = 0;
  std::uint64_t decisions_max = 0;
  std::uint64_t repeated_pairs_min = 0;
  std::uint64_t repeated_pairs_total = 0;
  std::uint64_t repeated_pairs_max = 0;
  double avg_distance_min = 0.0;
  double avg_distance_total = 0.0;
  double avg_distance_max = 0.0;
  double cluster_coeff_min = 0.0;
  double cluster_coeff_total = 0.0;
  double cluster_coeff_max = 0.0;
  std::uint32_t decided = 0;
  std::uint32_t limited = 0;
  std::uint32_t errors = 0;

  double mean_decisions() const {
    return decided == 0 ? 0.0 : static_cast<double>(decisions_total) / decided;
  }

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

/// One row per distinct m, ascending. Throws std::invalid_argument if the
/// records mix generator kinds, k or n.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

struct Peak {
  std::uint32_t m = 0;
  double mean_decisions = 0.0;
};

struct GuaranteedPeak {
  std::uint32_t m = 0;
  std::uint64_t min_decisions = 0;
};

/// m with the largest mean decision count (ties: smallest m). Rows without
/// decided runs are skipped. Throws std::invalid_argument if no row
/// qualifies.
Peak locate_peak(const std::vector<AggregateRow>& rows);

/// m whose easiest run is hardest (ties: smallest m). Records without a
/// decision count are ignored. Throws std::invalid_argument if none remain.
GuaranteedPeak locate_guaranteed_peak(const std::vector<RunRecord>& records);
GuaranteedPeak locate_guaranteed_peak(const std::vector<AggregateRow>& rows);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kAggregateHeader =
    "m,runs,sat,dec_min,dec_total,dec_max,rp_min,rp_total,rp_max,dist_min,dist_total,dist_max,"
    "cc_min,cc_total,cc_max";

inline constexpr const char* kRecordHeader =
    "kind,k,n,m,run,seed,status,decisions,repeated_pairs,avg_distance,cluster_coeff,error";

/// Aggregate schema, reals with 6 decimals. `with_exclusions` appends
/// `limited,errors` columns.
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                         bool with_exclusions = false);

/// Raw records; reals in shortest round-trip form so re-aggregating a
/// records file reproduces the in-memory aggregation exactly.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// Inverse of write_records_csv. Throws std::runtime_error with a line number
/// on malformed input.
std::vector<RunRecord> read_records_csv(std::istream& in);

/// Plot series: `kind,m,mean_decisions` for each kind's rows.
struct Series {
  GenKind kind;
  std::vector<AggregateRow> rows;
};
void write_series_csv(std::ostream& out, const std::vector<Series>& series);

/// Writes `text` to `path`, throwing std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace trisat
