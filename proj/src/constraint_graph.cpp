#include "trisat/constraint_graph.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace trisat {

ConstraintGraph::ConstraintGraph(Var n) : n_(n), adjacency_(static_cast<std::size_t>(n) + 1) {}

void ConstraintGraph::check_var(Var v) const {
  if (v == 0 || v > n_) {
    throw std::invalid_argument(fmt::format("variable {} outside 1..{}", v, n_));
  }
}

std::uint32_t ConstraintGraph::multiplicity(Var u, Var v) const {
  auto it = multiplicity_.find(pair_key(u, v));
  return it == multiplicity_.end() ? 0 : it->second;
}

bool ConstraintGraph::add_pair(Var u, Var v) {
  check_var(u);
  check_var(v);
  if (u == v) throw std::invalid_argument(fmt::format("self-loop on variable {}", u));
  std::uint32_t& count = multiplicity_[pair_key(u, v)];
  if (count++ > 0) return false;
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  return true;
}

ConstraintGraph build_graph(const Instance& instance) {
  ConstraintGraph graph(instance.variable_count());
  std::vector<Var> vars;
  for (const Clause& clause : instance.clauses()) {
    vars.clear();
    for (const Literal& lit : clause) {
      if (std::find(vars.begin(), vars.end(), lit.var) == vars.end()) vars.push_back(lit.var);
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) graph.add_pair(vars[i], vars[j]);
    }
  }
  return graph;
}

TriangleLedger TriangleLedger::from_graph(const ConstraintGraph& graph) {
  TriangleLedger ledger;
  std::uint64_t closed_wedges = 0;
  for (Var w = 1; w <= graph.vertex_count(); ++w) {
    const auto& nb = graph.neighbors(w);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (graph.adjacent(nb[i], nb[j])) {
          ++closed_wedges;
        } else {
          ++ledger.common_[pair_key(nb[i], nb[j])];
        }
      }
    }
  }
  // Each triangle is seen once from each of its corners.
  ledger.triangles_ = closed_wedges / 3;
  return ledger;
}

std::uint32_t TriangleLedger::common_neighbors(Var u, Var w) const {
  auto it = common_.find(pair_key(u, w));
  return it == common_.end() ? 0 : it->second;
}

void TriangleLedger::record_new_edge(const ConstraintGraph& graph, Var u, Var v) {
  auto it = common_.find(pair_key(u, v));
  if (it != common_.end()) {
    triangles_ += it->second;
    common_.erase(it);
  }
  // Every neighbor w of u becomes a common neighbor of {v,w}, and vice versa.
  for (Var w : graph.neighbors(u)) {
    if (w != v && !graph.adjacent(v, w)) ++common_[pair_key(v, w)];
  }
  for (Var w : graph.neighbors(v)) {
    if (w != u && !graph.adjacent(u, w)) ++common_[pair_key(u, w)];
  }
}

void add_clause(ConstraintGraph& graph, TriangleLedger& ledger, std::span<const Var> vars) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == 0 || vars[i] > graph.vertex_count()) {
      throw std::invalid_argument(
          fmt::format("variable {} outside 1..{}", vars[i], graph.vertex_count()));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (vars[i] == vars[j]) {
        throw std::invalid_argument(fmt::format("variable {} repeated in clause", vars[i]));
      }
    }
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (!graph.adjacent(vars[i], vars[j])) ledger.record_new_edge(graph, vars[i], vars[j]);
      graph.add_pair(vars[i], vars[j]);
    }
  }
}

std::size_t pair_penalty(const ConstraintGraph& graph, std::span<const Var> partial, Var v) {
  std::size_t penalty = 0;
  for (Var u : partial) {
    if (graph.adjacent(u, v)) ++penalty;
  }
  return penalty;
}

std::uint64_t triangle_delta(const ConstraintGraph& graph, const TriangleLedger& ledger,
                             std::span<const Var> partial, Var v) {
  std::vector<Var> members(partial.begin(), partial.end());
  members.push_back(v);

  // Edges of the clause clique missing from the graph, added one at a time.
  std::vector<std::uint64_t> overlay;
  auto adjacent_now = [&](Var a, Var b) {
    return graph.adjacent(a, b) ||
           std::find(overlay.begin(), overlay.end(), pair_key(a, b)) != overlay.end();
  };

  std::uint64_t delta = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      Var a = members[i];
      Var b = members[j];
      if (graph.adjacent(a, b)) continue;
      std::uint64_t closed = ledger.common_neighbors(a, b);
      // Common neighbors reached through edges added earlier in this clause.
      for (Var w : members) {
        if (w == a || w == b) continue;
        bool via_graph = graph.adjacent(a, w) && graph.adjacent(b, w);
        if (!via_graph && adjacent_now(a, w) && adjacent_now(b, w)) ++closed;
      }
      delta += closed;
      overlay.push_back(pair_key(a, b));
    }
  }
  return delta;
}

std::size_t repeated_pair_count(const ConstraintGraph& graph) {
  std::size_t count = 0;
  graph.for_each_edge([&](Var, Var, std::uint32_t m) {
    if (m >= 2) ++count;
  });
  return count;
}

namespace {

// Edges among the neighbors of each vertex.
std::vector<std::uint64_t> local_triangles(const ConstraintGraph& graph) {
  const Var n = graph.vertex_count();
  std::vector<std::uint64_t> result(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Var> mark(static_cast<std::size_t>(n) + 1, 0);
  for (Var v = 1; v <= n; ++v) {
    const auto& nb = graph.neighbors(v);
    if (nb.size() < 2) continue;
    for (Var u : nb) mark[u] = v;
    std::uint64_t links = 0;
    for (Var u : nb) {
      for (Var w : graph.neighbors(u)) {
        if (mark[w] == v) ++links;
      }
    }
    result[v] = links / 2;
  }
  return result;
}

}  // namespace

std::uint64_t triangle_count(const ConstraintGraph& graph) {
  std::uint64_t sum = 0;
  for (std::uint64_t t : local_triangles(graph)) sum += t;
  return sum / 3;
}

std::uint64_t incomplete_triangle_count(const ConstraintGraph& graph) {
  std::uint64_t wedges = 0;
  for (Var v = 1; v <= graph.vertex_count(); ++v) {
    std::uint64_t d = graph.degree(v);
    wedges += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  // Each triangle contains three closed wedges; every other wedge is an
  // incomplete triangle centered on its apex.
  return wedges - 3 * triangle_count(graph);
}

double cluster_coefficient(const ConstraintGraph& graph) {
  const Var n = graph.vertex_count();
  if (n == 0) return 0.0;
  auto local = local_triangles(graph);
  double sum = 0.0;
  for (Var v = 1; v <= n; ++v) {
    double d = static_cast<double>(graph.degree(v));
    if (d < 2) continue;
    sum += static_cast<double>(local[v]) / (d * (d - 1) / 2);
  }
  return sum / n;
}

double average_distance(const ConstraintGraph& graph) {
  const Var n = graph.vertex_count();
  std::vector<std::uint32_t> dist(static_cast<std::size_t>(n) + 1);
  std::vector<Var> queue;
  queue.reserve(n);
  std::uint64_t total = 0;
  std::uint64_t pairs = 0;
  constexpr std::uint32_t unseen = 0xffffffffu;
  for (Var s = 1; s <= n; ++s) {
    std::fill(dist.begin(), dist.end(), unseen);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Var u = queue[head];
      for (Var w : graph.neighbors(u)) {
        if (dist[w] != unseen) continue;
        dist[w] = dist[u] + 1;
        queue.push_back(w);
        // Count each unordered pair once, from its smaller endpoint.
        if (w > s) {
          total += dist[w];
          ++pairs;
        }
      }
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);
}

GraphStats compute_stats(const ConstraintGraph& graph) {
  GraphStats stats;
  stats.repeated_pairs = repeated_pair_count(graph);
  stats.triangles = triangle_count(graph);
  stats.incomplete_triangles = incomplete_triangle_count(graph);
  stats.cluster_coefficient = cluster_coefficient(graph);
  stats.average_distance = average_distance(graph);
  return stats;
}

}  // namespace trisat
