#pragma once

// Brute-force reference implementations used to check the library. They work
// on a plain adjacency matrix built straight from clause lists and share no
// code with the incremental structures under test.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <vector>

#include "trisat/sat_core.hpp"

namespace oracle {

using trisat::Var;

struct Matrix {
  Var n = 0;
  std::vector<std::vector<std::uint32_t>> mult;  // (n+1) x (n+1), symmetric

  explicit Matrix(Var vertices) : n(vertices), mult(vertices + 1, std::vector<std::uint32_t>(vertices + 1, 0)) {}

  bool edge(Var a, Var b) const { return mult[a][b] > 0; }
};

// Adds one clause, counting each pair at most once.
inline void add_clause(Matrix& g, const std::vector<Var>& vars) {
  std::vector<bool> seen(g.n + 1, false);
  std::vector<Var> distinct;
  for (Var v : vars) {
    if (!seen[v]) {
      seen[v] = true;
      distinct.push_back(v);
    }
  }
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      ++g.mult[distinct[i]][distinct[j]];
      ++g.mult[distinct[j]][distinct[i]];
    }
  }
}

inline Matrix from_instance(const trisat::Instance& instance) {
  Matrix g(instance.variable_count());
  for (const auto& clause : instance.clauses()) {
    std::vector<Var> vars;
    for (const auto& lit : clause) vars.push_back(lit.var);
    add_clause(g, vars);
  }
  return g;
}

inline std::uint64_t triangles(const Matrix& g) {
  std::uint64_t count = 0;
  for (Var a = 1; a <= g.n; ++a)
    for (Var b = a + 1; b <= g.n; ++b)
      for (Var c = b + 1; c <= g.n; ++c)
        if (g.edge(a, b) && g.edge(a, c) && g.edge(b, c)) ++count;
  return count;
}

inline std::uint64_t incomplete_triangles(const Matrix& g) {
  std::uint64_t count = 0;
  for (Var a = 1; a <= g.n; ++a)
    for (Var b = a + 1; b <= g.n; ++b)
      for (Var c = b + 1; c <= g.n; ++c)
        if (int(g.edge(a, b)) + int(g.edge(a, c)) + int(g.edge(b, c)) == 2) ++count;
  return count;
}

inline std::uint32_t common_neighbors(const Matrix& g, Var a, Var b) {
  std::uint32_t count = 0;
  for (Var w = 1; w <= g.n; ++w)
    if (w != a && w != b && g.edge(a, w) && g.edge(b, w)) ++count;
  return count;
}

inline std::size_t repeated_pairs(const Matrix& g) {
  std::size_t count = 0;
  for (Var a = 1; a <= g.n; ++a)
    for (Var b = a + 1; b <= g.n; ++b)
      if (g.mult[a][b] >= 2) ++count;
  return count;
}

inline std::size_t degree(const Matrix& g, Var v) {
  std::size_t d = 0;
  for (Var w = 1; w <= g.n; ++w)
    if (w != v && g.edge(v, w)) ++d;
  return d;
}

inline double cluster_coefficient(const Matrix& g) {
  if (g.n == 0) return 0.0;
  double sum = 0.0;
  for (Var v = 1; v <= g.n; ++v) {
    std::vector<Var> nb;
    for (Var w = 1; w <= g.n; ++w)
      if (w != v && g.edge(v, w)) nb.push_back(w);
    if (nb.size() < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (g.edge(nb[i], nb[j])) ++links;
    sum += double(links) / (double(nb.size()) * double(nb.size() - 1) / 2.0);
  }
  return sum / g.n;
}

// Floyd-Warshall over connected pairs.
inline double average_distance(const Matrix& g) {
  const std::uint64_t inf = ~std::uint64_t{0} / 4;
  std::vector<std::vector<std::uint64_t>> d(g.n + 1, std::vector<std::uint64_t>(g.n + 1, inf));
  for (Var a = 1; a <= g.n; ++a) {
    d[a][a] = 0;
    for (Var b = 1; b <= g.n; ++b)
      if (a != b && g.edge(a, b)) d[a][b] = 1;
  }
  for (Var k = 1; k <= g.n; ++k)
    for (Var a = 1; a <= g.n; ++a)
      for (Var b = 1; b <= g.n; ++b)
        if (d[a][k] + d[k][b] < d[a][b]) d[a][b] = d[a][k] + d[k][b];
  std::uint64_t total = 0;
  std::uint64_t pairs = 0;
  for (Var a = 1; a <= g.n; ++a)
    for (Var b = a + 1; b <= g.n; ++b)
      if (d[a][b] < inf) {
        total += d[a][b];
        ++pairs;
      }
  return pairs == 0 ? 0.0 : double(total) / double(pairs);
}

// Triangle count after adding `vars` as one more clause, minus before.
inline std::uint64_t triangle_delta(const Matrix& g, const std::vector<Var>& vars) {
  Matrix after = g;
  add_clause(after, vars);
  return triangles(after) - triangles(g);
}

// Random clause sequence over 1..n with distinct variables per clause.
inline std::vector<std::vector<Var>> random_clauses(std::mt19937_64& rng, Var n, std::size_t m,
                                                   std::size_t max_width) {
  std::vector<std::vector<Var>> clauses;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t width = 2 + rng() % (std::min<std::size_t>(max_width, n) - 1);
    std::vector<Var> pool;
    for (Var v = 1; v <= n; ++v) pool.push_back(v);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(width);
    clauses.push_back(pool);
  }
  return clauses;
}

// Random CNF with clause widths 1..max_width; variables may repeat in a clause.
inline trisat::Instance random_cnf(std::mt19937_64& rng, Var n, std::size_t m, std::size_t max_width) {
  std::vector<trisat::Clause> clauses;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t width = 1 + rng() % max_width;
    trisat::Clause clause;
    for (std::size_t j = 0; j < width; ++j) {
      clause.push_back(trisat::Literal{static_cast<Var>(1 + rng() % n), (rng() & 1) != 0});
    }
    clauses.push_back(clause);
  }
  return trisat::Instance(n, clauses);
}

}  // namespace oracle
