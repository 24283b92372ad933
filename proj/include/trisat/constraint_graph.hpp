#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "trisat/sat_core.hpp"

namespace trisat {

/// Key for an unordered variable pair.
inline std::uint64_t pair_key(Var u, Var v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Variable co-occurrence graph. Vertices are the variables 1..n; {u,v} is an
/// edge iff some clause mentions both, regardless of polarity. Each edge
/// carries the number of clauses it came from.
class ConstraintGraph {
 public:
  explicit ConstraintGraph(Var n = 0);

  Var vertex_count() const { return n_; }
  std::size_t edge_count() const { return multiplicity_.size(); }

  /// Number of clauses containing both u and v (0 if not adjacent).
  std::uint32_t multiplicity(Var u, Var v) const;
  bool adjacent(Var u, Var v) const { return multiplicity(u, v) > 0; }
  /// Neighbors of v in edge insertion order.
  const std::vector<Var>& neighbors(Var v) const { return adjacency_[v]; }
  std::size_t degree(Var v) const { return adjacency_[v].size(); }

  /// Increments the multiplicity of {u,v}. Returns true if the edge is new.
  /// Throws std::invalid_argument for u == v or out-of-range variables.
  bool add_pair(Var u, Var v);

  template <typename F>
  void for_each_edge(F&& f) const {
    for (const auto& [key, count] : multiplicity_) {
      f(static_cast<Var>(key >> 32), static_cast<Var>(key & 0xffffffffULL), count);
    }
  }

 private:
  void check_var(Var v) const;

  Var n_;
  std::vector<std::vector<Var>> adjacency_;  // slot 0 unused
  std::unordered_map<std::uint64_t, std::uint32_t> multiplicity_;
};

/// Graph of an instance. Each clause contributes at most one to a pair's
/// multiplicity, even if it lists a variable twice.
ConstraintGraph build_graph(const Instance& instance);

/// Running triangle count plus, for every non-adjacent pair with at least one
/// common neighbor, the size of that common neighborhood (the number of
/// incomplete triangles the pair would close). Pairs absent from the table
/// have no common neighbors.
class TriangleLedger {
 public:
  TriangleLedger() = default;

  /// Full recount from an existing graph.
  static TriangleLedger from_graph(const ConstraintGraph& graph);

  std::uint64_t triangle_count() const { return triangles_; }
  /// |N(u) ∩ N(w)| for a currently non-adjacent pair.
  std::uint32_t common_neighbors(Var u, Var w) const;
  std::size_t tracked_pairs() const { return common_.size(); }

  /// Accounts for the edge {u,v} about to be inserted. `graph` must not yet
  /// contain it.
  void record_new_edge(const ConstraintGraph& graph, Var u, Var v);

  template <typename F>
  void for_each_entry(F&& f) const {
    for (const auto& [key, count] : common_) {
      f(static_cast<Var>(key >> 32), static_cast<Var>(key & 0xffffffffULL), count);
    }
  }

 private:
  std::uint64_t triangles_ = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> common_;
};

/// Adds the pairs of one clause (pairwise distinct variables) to the graph and
/// keeps the ledger consistent. Throws std::invalid_argument on out-of-range
/// or repeated variables.
void add_clause(ConstraintGraph& graph, TriangleLedger& ledger, std::span<const Var> vars);

/// Number of variables in `partial` already adjacent to v.
std::size_t pair_penalty(const ConstraintGraph& graph, std::span<const Var> partial, Var v);

/// Exact increase of the triangle count if the clause `partial ∪ {v}` were
/// added: every triangle that uses at least one edge not yet in the graph.
std::uint64_t triangle_delta(const ConstraintGraph& graph, const TriangleLedger& ledger,
                             std::span<const Var> partial, Var v);

/// Pairs occurring in at least two clauses.
std::size_t repeated_pair_count(const ConstraintGraph& graph);

std::uint64_t triangle_count(const ConstraintGraph& graph);

/// Vertex triples with exactly two edges.
std::uint64_t incomplete_triangle_count(const ConstraintGraph& graph);

/// Average local clustering coefficient over all n vertices; vertices of
/// degree < 2 contribute 0.
double cluster_coefficient(const ConstraintGraph& graph);

/// Mean shortest-path length over connected vertex pairs. Pairs in different
/// components are ignored; 0 if no pair is connected.
double average_distance(const ConstraintGraph& graph);

struct GraphStats {
  std::size_t repeated_pairs = 0;
  std::uint64_t triangles = 0;
  std::uint64_t incomplete_triangles = 0;
  double cluster_coefficient = 0.0;
  double average_distance = 0.0;
};

GraphStats compute_stats(const ConstraintGraph& graph);

}  // namespace trisat
