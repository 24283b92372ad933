#include "trisat/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "trisat/constraint_graph.hpp"

namespace trisat {

std::vector<std::uint32_t> m_range(std::uint32_t m_min, std::uint32_t m_max, std::uint32_t step) {
  if (step == 0) throw std::invalid_argument("step must be positive");
  if (m_min > m_max) throw std::invalid_argument("m range is empty");
  std::vector<std::uint32_t> values;
  for (std::uint64_t m = m_min; m <= m_max; m += step) values.push_back(static_cast<std::uint32_t>(m));
  return values;
}

void validate(const CampaignConfig& config) {
  if (config.m_values.empty()) throw std::invalid_argument("m_values must not be empty");
  if (config.kinds.empty()) throw std::invalid_argument("at least one generator kind is required");
  if (config.runs_per_point == 0) throw std::invalid_argument("runs_per_point must be >= 1");
  if (config.workers == 0) throw std::invalid_argument("workers must be >= 1");
  for (std::uint32_t m : config.m_values) validate(GenParams{config.k, config.n, m, 0, GenKind::random});
  if (config.external && config.external->command_template.find("{cnf}") == std::string::npos) {
    throw std::invalid_argument("solver command must contain the {cnf} placeholder");
  }
}

std::uint64_t campaign_seed(std::uint64_t base_seed, GenKind kind, std::uint32_t m,
                            std::uint32_t run) {
  return derive_seed(base_seed, {kind_index(kind), m, run});
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::sat:
      return "sat";
    case RunStatus::unsat:
      return "unsat";
    case RunStatus::limit:
      return "limit";
    case RunStatus::error:
      return "error";
  }
  return "error";
}

std::optional<RunStatus> parse_run_status(std::string_view name) {
  if (name == "sat") return RunStatus::sat;
  if (name == "unsat") return RunStatus::unsat;
  if (name == "limit") return RunStatus::limit;
  if (name == "error") return RunStatus::error;
  return std::nullopt;
}

namespace {

struct Task {
  GenKind kind;
  std::uint32_t m;
  std::uint32_t run;
};

RunStatus from_solve_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::sat:
      return RunStatus::sat;
    case SolveStatus::unsat:
      return RunStatus::unsat;
    case SolveStatus::limit_exceeded:
      return RunStatus::limit;
  }
  return RunStatus::error;
}

RunRecord run_point(const CampaignConfig& config, const Task& task) {
  RunRecord record;
  record.kind = task.kind;
  record.k = config.k;
  record.n = config.n;
  record.m = task.m;
  record.run = task.run;
  record.seed = campaign_seed(config.base_seed, task.kind, task.m, task.run);

  Instance instance;
  try {
    instance = generate(GenParams{config.k, config.n, task.m, record.seed, task.kind});
  } catch (const std::exception& e) {
    record.status = RunStatus::error;
    record.error = fmt::format("generation failed: {}", e.what());
    return record;
  }

  ConstraintGraph graph = build_graph(instance);
  record.repeated_pairs = repeated_pair_count(graph);
  record.avg_distance = average_distance(graph);
  record.cluster_coeff = cluster_coefficient(graph);

  try {
    if (config.external) {
      ExternalRunResult result = external_solver_run(instance, *config.external, config.limits);
      record.status = from_solve_status(result.status);
      if (result.status != SolveStatus::limit_exceeded) record.decisions = result.decisions;
    } else {
      SolveResult result = solve(instance, config.limits);
      record.status = from_solve_status(result.status);
      if (result.status != SolveStatus::limit_exceeded) record.decisions = result.decisions;
    }
  } catch (const std::exception& e) {
    record.status = RunStatus::error;
    record.error = fmt::format("solver failed: {}", e.what());
  }
  return record;
}

template <typename T>
void fold(T value, bool first, T& lo, T& total, T& hi) {
  if (first) {
    lo = hi = value;
  } else {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  total += value;
}

}  // namespace

std::vector<RunRecord> run_campaign(const CampaignConfig& config) {
  validate(config);
  std::vector<Task> tasks;
  for (GenKind kind : config.kinds) {
    for (std::uint32_t m : config.m_values) {
      for (std::uint32_t r = 0; r < config.runs_per_point; ++r) tasks.push_back(Task{kind, m, r});
    }
  }

  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) records[i] = run_point(config, tasks[i]);
  };

  const std::size_t workers = std::min<std::size_t>(config.workers, tasks.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  std::map<std::uint32_t, AggregateRow> rows;
  for (const RunRecord& r : records) {
    const RunRecord& first = records.front();
    if (r.kind != first.kind || r.k != first.k || r.n != first.n) {
      throw std::invalid_argument(
          fmt::format("cannot aggregate mixed runs ({} k={} n={} vs {} k={} n={})",
                      to_string(first.kind), first.k, first.n, to_string(r.kind), r.k, r.n));
    }
    AggregateRow& row = rows[r.m];
    row.m = r.m;
    if (r.status == RunStatus::error) {
      ++row.errors;
      continue;
    }
    ++row.runs;
    const bool first_run = row.runs == 1;
    fold(r.repeated_pairs, first_run, row.repeated_pairs_min, row.repeated_pairs_total,
         row.repeated_pairs_max);
    fold(r.avg_distance, first_run, row.avg_distance_min, row.avg_distance_total,
         row.avg_distance_max);
    fold(r.cluster_coeff, first_run, row.cluster_coeff_min, row.cluster_coeff_total,
         row.cluster_coeff_max);
    if (r.status == RunStatus::sat) ++row.sat_count;
    if (r.status == RunStatus::limit) {
      ++row.limited;
    } else if (r.decisions) {
      ++row.decided;
      fold(*r.decisions, row.decided == 1, row.decisions_min, row.decisions_total,
           row.decisions_max);
    }
  }
  std::vector<AggregateRow> result;
  result.reserve(rows.size());
  for (auto& [m, row] : rows) result.push_back(row);
  return result;
}

Peak locate_peak(const std::vector<AggregateRow>& rows) {
  const AggregateRow* best = nullptr;
  for (const AggregateRow& row : rows) {
    if (row.decided == 0) continue;
    if (!best) {
      best = &row;
      continue;
    }
    // Exact comparison of total/decided ratios.
    __extension__ typedef unsigned __int128 Wide;
    Wide lhs = static_cast<Wide>(row.decisions_total) * best->decided;
    Wide rhs = static_cast<Wide>(best->decisions_total) * row.decided;
    if (lhs > rhs || (lhs == rhs && row.m < best->m)) best = &row;
  }
  if (!best) throw std::invalid_argument("no row with solved runs");
  return Peak{best->m, best->mean_decisions()};
}

GuaranteedPeak locate_guaranteed_peak(const std::vector<RunRecord>& records) {
  std::map<std::uint32_t, std::uint64_t> easiest;
  for (const RunRecord& r : records) {
    if (r.status == RunStatus::error || r.status == RunStatus::limit || !r.decisions) continue;
    auto [it, inserted] = easiest.try_emplace(r.m, *r.decisions);
    if (!inserted) it->second = std::min(it->second, *r.decisions);
  }
  if (easiest.empty()) throw std::invalid_argument("no record with a decision count");
  GuaranteedPeak best{easiest.begin()->first, easiest.begin()->second};
  for (const auto& [m, lo] : easiest) {
    if (lo > best.min_decisions) best = GuaranteedPeak{m, lo};
  }
  return best;
}

GuaranteedPeak locate_guaranteed_peak(const std::vector<AggregateRow>& rows) {
  std::optional<GuaranteedPeak> best;
  for (const AggregateRow& row : rows) {
    if (row.decided == 0) continue;
    if (!best || row.decisions_min > best->min_decisions ||
        (row.decisions_min == best->min_decisions && row.m < best->m)) {
      best = GuaranteedPeak{row.m, row.decisions_min};
    }
  }
  if (!best) throw std::invalid_argument("no row with solved runs");
  return *best;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                         bool with_exclusions) {
  std::string text = kAggregateHeader;
  if (with_exclusions) text += ",limited,errors";
  text += '\n';
  for (const AggregateRow& r : rows) {
    fmt::format_to(std::back_inserter(text),
                   "{},{},{},{},{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", r.m,
                   r.runs, r.sat_count, r.decisions_min, r.decisions_total, r.decisions_max,
                   r.repeated_pairs_min, r.repeated_pairs_total, r.repeated_pairs_max,
                   r.avg_distance_min, r.avg_distance_total, r.avg_distance_max,
                   r.cluster_coeff_min, r.cluster_coeff_total, r.cluster_coeff_max);
    if (with_exclusions) fmt::format_to(std::back_inserter(text), ",{},{}", r.limited, r.errors);
    text += '\n';
  }
  out << text;
}

namespace {

std::string sanitize(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t expected) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (fields.size() + 1 < expected) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) break;
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  fields.push_back(line.substr(start));
  return fields;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error(fmt::format("line {}: invalid {} '{}'", line_no, name, field));
  }
  return value;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  std::string text = kRecordHeader;
  text += '\n';
  for (const RunRecord& r : records) {
    std::string decisions = r.decisions ? fmt::format("{}", *r.decisions) : std::string();
    fmt::format_to(std::back_inserter(text), "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                   to_string(r.kind), r.k, r.n, r.m, r.run, r.seed, to_string(r.status), decisions,
                   r.repeated_pairs, r.avg_distance, r.cluster_coeff, sanitize(r.error));
  }
  out << text;
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw std::runtime_error("line 1: expected records header");
  }
  ++line_no;
  constexpr std::size_t kFields = 12;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_fields(line, kFields);
    if (f.size() != kFields) {
      throw std::runtime_error(fmt::format("line {}: expected {} fields, got {}", line_no, kFields,
                                           f.size()));
    }
    RunRecord r;
    auto kind = parse_gen_kind(f[0]);
    if (!kind) throw std::runtime_error(fmt::format("line {}: unknown kind '{}'", line_no, f[0]));
    r.kind = *kind;
    r.k = parse_field<std::uint32_t>(f[1], line_no, "k");
    r.n = parse_field<Var>(f[2], line_no, "n");
    r.m = parse_field<std::uint32_t>(f[3], line_no, "m");
    r.run = parse_field<std::uint32_t>(f[4], line_no, "run");
    r.seed = parse_field<std::uint64_t>(f[5], line_no, "seed");
    auto status = parse_run_status(f[6]);
    if (!status) throw std::runtime_error(fmt::format("line {}: unknown status '{}'", line_no, f[6]));
    r.status = *status;
    if (!f[7].empty()) r.decisions = parse_field<std::uint64_t>(f[7], line_no, "decisions");
    r.repeated_pairs = parse_field<std::uint64_t>(f[8], line_no, "repeated_pairs");
    r.avg_distance = parse_field<double>(f[9], line_no, "avg_distance");
    r.cluster_coeff = parse_field<double>(f[10], line_no, "cluster_coeff");
    r.error = std::string(f[11]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_series_csv(std::ostream& out, const std::vector<Series>& series) {
  std::string text = "kind,m,mean_decisions\n";
  for (const Series& s : series) {
    for (const AggregateRow& row : s.rows) {
      if (row.decided == 0) continue;
      fmt::format_to(std::back_inserter(text), "{},{},{:.6f}\n", to_string(s.kind), row.m,
                     row.mean_decisions());
    }
  }
  out << text;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace trisat
