#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trisat/sat_core.hpp"

namespace trisat {

enum class SolveStatus { sat, unsat, limit_exceeded };

std::string_view to_string(SolveStatus status);

/// Truth values for variables 1..n; a variable may be unset.
class Assignment {
 public:
  explicit Assignment(Var n = 0) : values_(static_cast<std::size_t>(n) + 1, kUnset) {}

  Var variable_count() const { return static_cast<Var>(values_.size() - 1); }
  bool is_set(Var v) const { return values_[v] != kUnset; }
  bool value(Var v) const { return values_[v] == 1; }
  void set(Var v, bool value) { values_[v] = value ? 1 : 0; }
  bool complete() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> values_;  // slot 0 unused
};

struct SolveLimits {
  std::optional<std::uint64_t> max_decisions;
  std::optional<std::chrono::milliseconds> max_wall_time;
};

struct SolveResult {
  SolveStatus status = SolveStatus::limit_exceeded;
  /// Branching assignments: the first value tried for a decision variable.
  /// Re-trying the opposite value after a refutation is a backtrack.
  std::uint64_t decisions = 0;
  std::uint64_t backtracks = 0;
  /// Assignments forced by unit clauses.
  std::uint64_t propagations = 0;
  std::optional<Assignment> model;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// Deterministic DPLL: unit propagation to fixpoint, chronological
/// backtracking, branching on the lowest-indexed unassigned variable that
/// occurs in the formula, true first. No learning, restarts or pure
/// literals. Throws std::invalid_argument on non-positive limits.
SolveResult solve(const Instance& instance, const SolveLimits& limits = {});

/// True iff every clause has a satisfied literal. Throws
/// std::invalid_argument if the assignment does not cover all n variables.
bool check_model(const Instance& instance, const Assignment& assignment);

inline constexpr Var kBruteForceMaxVars = 25;

/// Truth-table enumeration. Throws std::invalid_argument for n > 25.
bool brute_force_sat(const Instance& instance);

}  // namespace trisat
