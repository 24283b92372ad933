#include "trisat/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

namespace trisat {

namespace {

// Attempts per clause before the random generator gives up.
constexpr std::uint64_t kMaxClauseAttempts = 1'000'000;

bool contains(std::span<const Var> vars, Var v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

std::uint64_t count_duplicate_clauses(const Instance& instance) {
  std::unordered_set<ClauseKey, ClauseKeyHash> seen;
  std::uint64_t duplicates = 0;
  for (const Clause& c : instance.clauses()) {
    if (!seen.insert(clause_key(c)).second) ++duplicates;
  }
  return duplicates;
}

Instance greedy_generate(const GenParams& params, bool avoid_triangles,
                         GenerationReport* report, const StepObserver& observer) {
  validate(params);
  const Var n = params.n;
  Rng rng(params.seed);

  std::vector<std::uint32_t> occurrences(static_cast<std::size_t>(n) + 1, 0);
  ConstraintGraph graph(n);
  TriangleLedger ledger;
  std::vector<Clause> clauses;
  clauses.reserve(params.m);

  std::vector<Var> partial;
  std::vector<Var> tier;
  std::vector<std::uint64_t> scores;
  partial.reserve(params.k);

  // Keeps the members of `tier` whose score is minimal, preserving order.
  auto keep_minimal = [&](auto&& score) {
    if (tier.size() < 2) return;
    scores.resize(tier.size());
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < tier.size(); ++i) {
      scores[i] = score(tier[i]);
      best = std::min(best, scores[i]);
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < tier.size(); ++i) {
      if (scores[i] == best) tier[out++] = tier[i];
    }
    tier.resize(out);
  };

  for (std::uint32_t i = 0; i < params.m; ++i) {
    partial.clear();
    for (std::uint32_t j = 0; j < params.k; ++j) {
      tier.clear();
      std::uint32_t fewest = std::numeric_limits<std::uint32_t>::max();
      for (Var v = 1; v <= n; ++v) {
        if (contains(partial, v)) continue;
        if (occurrences[v] < fewest) {
          fewest = occurrences[v];
          tier.clear();
        }
        if (occurrences[v] == fewest) tier.push_back(v);
      }

      keep_minimal([&](Var v) { return pair_penalty(graph, partial, v); });
      if (avoid_triangles) {
        keep_minimal([&](Var v) { return triangle_delta(graph, ledger, partial, v); });
      }
      Var chosen = tier.size() == 1 ? tier[0] : tier[rng.below(tier.size())];

      if (observer) {
        observer(GreedyStep{i, partial, chosen, occurrences, graph,
                            avoid_triangles ? &ledger : nullptr});
      }

      for (Var u : partial) {
        if (avoid_triangles && !graph.adjacent(u, chosen)) ledger.record_new_edge(graph, u, chosen);
        graph.add_pair(u, chosen);
      }
      partial.push_back(chosen);
      ++occurrences[chosen];
    }
    Clause clause;
    clause.reserve(partial.size());
    for (Var v : partial) clause.push_back(Literal{v, false});
    clauses.push_back(std::move(clause));
  }

  Instance result = assign_polarities(Instance(n, std::move(clauses)), rng);
  if (report) report->duplicate_clauses = count_duplicate_clauses(result);
  return result;
}

}  // namespace

std::string_view to_string(GenKind kind) {
  switch (kind) {
    case GenKind::random:
      return "random";
    case GenKind::balanced:
      return "balanced";
    case GenKind::no_triangle:
      return "no-triangle";
  }
  return "unknown";
}

std::optional<GenKind> parse_gen_kind(std::string_view name) {
  if (name == "random") return GenKind::random;
  if (name == "balanced") return GenKind::balanced;
  if (name == "no-triangle" || name == "no_triangle") return GenKind::no_triangle;
  return std::nullopt;
}

std::uint64_t kind_index(GenKind kind) {
  switch (kind) {
    case GenKind::random:
      return 0;
    case GenKind::balanced:
      return 1;
    case GenKind::no_triangle:
      return 2;
  }
  return 3;
}

void validate(const GenParams& params) {
  if (params.k < 2) throw std::invalid_argument("k must be >= 2");
  if (params.n < params.k) throw std::invalid_argument("n must be >= k");
  if (params.m < 1) throw std::invalid_argument("m must be >= 1");
}

Instance gen_random(const GenParams& params, GenerationReport* report) {
  validate(params);
  const Var n = params.n;

  // C(n,k) * 2^k distinct clauses exist; log-space avoids overflow.
  long double log_space = std::lgamma(static_cast<long double>(n) + 1) -
                          std::lgamma(static_cast<long double>(params.k) + 1) -
                          std::lgamma(static_cast<long double>(n - params.k) + 1) +
                          params.k * std::log(2.0L);
  if (log_space < std::log(static_cast<long double>(params.m)) - 1e-9L) {
    throw GenerationError(fmt::format("only {:.0Lf} distinct clauses exist for k={} n={}, m={} requested",
                                      std::exp(log_space), params.k, n, params.m));
  }

  Rng rng(params.seed);
  std::unordered_set<ClauseKey, ClauseKeyHash> keys;
  std::vector<Clause> clauses;
  clauses.reserve(params.m);
  std::vector<Var> vars;
  std::uint64_t redraws = 0;

  for (std::uint32_t i = 0; i < params.m; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == kMaxClauseAttempts) {
        throw GenerationError(
            fmt::format("no fresh clause after {} attempts at clause {}", attempt, i + 1));
      }
      Clause clause;
      vars.clear();
      while (clause.size() < params.k) {
        std::uint64_t pick = rng.below(2 * static_cast<std::uint64_t>(n));
        Literal lit{static_cast<Var>(pick / 2 + 1), (pick & 1) != 0};
        if (contains(vars, lit.var)) continue;
        vars.push_back(lit.var);
        clause.push_back(lit);
      }
      if (keys.insert(clause_key(clause)).second) {
        clauses.push_back(std::move(clause));
        break;
      }
      ++redraws;
    }
  }
  if (report) report->clause_redraws = redraws;
  return Instance(n, std::move(clauses));
}

Instance gen_balanced(const GenParams& params, GenerationReport* report,
                      const StepObserver& observer) {
  return greedy_generate(params, false, report, observer);
}

Instance gen_no_triangle(const GenParams& params, GenerationReport* report,
                         const StepObserver& observer) {
  return greedy_generate(params, true, report, observer);
}

Instance generate(const GenParams& params, GenerationReport* report) {
  switch (params.kind) {
    case GenKind::random:
      return gen_random(params, report);
    case GenKind::balanced:
      return gen_balanced(params, report);
    case GenKind::no_triangle:
      return gen_no_triangle(params, report);
  }
  throw std::invalid_argument("unknown generator kind");
}

Instance assign_polarities(const Instance& skeleton, Rng& rng) {
  const Var n = skeleton.variable_count();
  // next_negative[v]: polarity the next occurrence of v receives.
  std::vector<char> next_negative(static_cast<std::size_t>(n) + 1, 0);
  for (Var v = 1; v <= n; ++v) next_negative[v] = rng.coin() ? 1 : 0;

  std::vector<Clause> clauses = skeleton.clauses();
  for (Clause& clause : clauses) {
    for (Literal& lit : clause) {
      lit.negative = next_negative[lit.var] != 0;
      next_negative[lit.var] ^= 1;
    }
  }
  return Instance(n, std::move(clauses));
}

std::string provenance_comment(const GenParams& params) {
  return fmt::format("generator={} k={} n={} m={} seed={}", to_string(params.kind), params.k,
                     params.n, params.m, params.seed);
}

}  // namespace trisat
