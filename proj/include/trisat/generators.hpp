#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trisat/constraint_graph.hpp"
#include "trisat/rng.hpp"
#include "trisat/sat_core.hpp"

namespace trisat {

enum class GenKind { random, balanced, no_triangle };

/// "random", "balanced", "no-triangle".
std::string_view to_string(GenKind kind);
/// Accepts "no-triangle" and "no_triangle". Returns nullopt on unknown names.
std::optional<GenKind> parse_gen_kind(std::string_view name);
/// Stable index used in seed derivation; never reorder.
std::uint64_t kind_index(GenKind kind);

struct GenParams {
  std::uint32_t k = 3;
  Var n = 0;
  std::uint32_t m = 0;
  std::uint64_t seed = 0;
  GenKind kind = GenKind::random;
};

/// Rejects k < 2, n < k, m < 1. Message names the violated constraint
/// (e.g. "n must be >= k").
void validate(const GenParams& params);

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationReport {
  /// Whole-clause redraws (random kind only).
  std::uint64_t clause_redraws = 0;
  /// Clauses whose key repeats an earlier clause (balanced/no-triangle only;
  /// these are kept, not rejected).
  std::uint64_t duplicate_clauses = 0;
};

/// State visible to an observer right before a greedy placement is
/// committed. `ledger` is null for the balanced generator.
struct GreedyStep {
  std::size_t clause_index;
  std::span<const Var> partial;
  Var chosen;
  const std::vector<std::uint32_t>& occurrences;  // indexed by variable
  const ConstraintGraph& graph;
  const TriangleLedger* ledger;
};

using StepObserver = std::function<void(const GreedyStep&)>;

/// Uniform literals from the 2n choices with distinct variables per clause;
/// a clause equal (up to literal order) to an earlier one is redrawn whole.
/// Throws GenerationError if m exceeds the number of distinct clauses or the
/// redraw budget runs out.
Instance gen_random(const GenParams& params, GenerationReport* report = nullptr);

/// Slot-by-slot greedy: fewest occurrences, then fewest partners already
/// adjacent, then uniform random. Followed by assign_polarities.
Instance gen_balanced(const GenParams& params, GenerationReport* report = nullptr,
                      const StepObserver& observer = {});

/// As gen_balanced with one more tie-break before the random pick: fewest
/// triangles added to the constraint graph.
Instance gen_no_triangle(const GenParams& params, GenerationReport* report = nullptr,
                         const StepObserver& observer = {});

/// Dispatches on params.kind.
Instance generate(const GenParams& params, GenerationReport* report = nullptr);

/// Per variable in index order: a fair coin decides whether its first
/// occurrence is negative; later occurrences alternate. Occurrence order is
/// clause order, then position within the clause. Input polarities are
/// ignored.
Instance assign_polarities(const Instance& skeleton, Rng& rng);

/// One-line description of the generator run, for DIMACS comments.
std::string provenance_comment(const GenParams& params);

}  // namespace trisat
