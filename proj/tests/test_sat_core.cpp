#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "trisat/generators.hpp"
#include "trisat/sat_core.hpp"

using namespace trisat;

namespace {

Clause lits(std::initializer_list<int> values) {
  Clause c;
  for (int v : values) c.push_back(Literal::from_dimacs(v));
  return c;
}

DimacsError::Kind parse_error_kind(std::string_view text, std::size_t* line = nullptr) {
  try {
    parse_dimacs(text);
  } catch (const DimacsError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  FAIL("expected a parse error");
  return DimacsError::Kind::bad_token;
}

}  // namespace

TEST_CASE("write_dimacs examples") {
  CHECK(write_dimacs(Instance(3, {lits({1, -2, 3})})) == "p cnf 3 1\n1 -2 3 0\n");
  CHECK(write_dimacs(Instance(1, {lits({1})})) == "p cnf 1 1\n1 0\n");
  CHECK(write_dimacs(Instance(2, {lits({1, 2}), lits({-1, -2})})) == "p cnf 2 2\n1 2 0\n-1 -2 0\n");
}

TEST_CASE("write_dimacs comment lines come first") {
  Instance inst(2, {lits({1, -2})});
  CHECK(write_dimacs(inst, "kind=random\nseed=4") == "c kind=random\nc seed=4\np cnf 2 1\n1 -2 0\n");
  CHECK(parse_dimacs(write_dimacs(inst, "x")) == inst);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance(2, {Clause{}}), std::invalid_argument);
  CHECK_THROWS_AS(Instance(2, {lits({1, 3})}), std::invalid_argument);
  CHECK_THROWS_AS(Instance(2, {Clause{Literal{0, false}}}), std::invalid_argument);
  Instance inst(4, {lits({1, 2}), lits({1, -2, 3, 4}), lits({2})});
  CHECK(inst.arity() == 4);
  CHECK(inst.clause_count() == 3);
  CHECK(Instance(5, {}).arity() == 0);
}

TEST_CASE("parse_dimacs examples") {
  CHECK(parse_dimacs("p cnf 3 1\n1 -2 3 0\n") == Instance(3, {lits({1, -2, 3})}));
  CHECK(parse_dimacs("c hi\np cnf 2 1\n1\n2 0\n") == Instance(2, {lits({1, 2})}));
  CHECK(parse_error_kind("p cnf 2 2\n1 0\n") == DimacsError::Kind::clause_count_mismatch);
}

TEST_CASE("parse_dimacs tolerates whitespace and comments anywhere") {
  Instance expected(3, {lits({1, -2}), lits({3})});
  CHECK(parse_dimacs("c a\n\n  p  cnf 3   2 \r\n1\t-2 0\n3\n0\nc end\n") == expected);
  CHECK(parse_dimacs("p cnf 3 2\n1 -2 0 3 0") == expected);
}

TEST_CASE("parse_dimacs distinct errors carry line numbers") {
  std::size_t line = 0;
  CHECK(parse_error_kind("1 2 0\n", &line) == DimacsError::Kind::missing_header);
  CHECK(line == 1);
  CHECK(parse_error_kind("c only\n") == DimacsError::Kind::missing_header);
  CHECK(parse_error_kind("p cnf x 1\n1 0\n", &line) == DimacsError::Kind::malformed_header);
  CHECK(line == 1);
  CHECK(parse_error_kind("p dnf 1 1\n1 0\n") == DimacsError::Kind::malformed_header);
  CHECK(parse_error_kind("p cnf 1 1\np cnf 1 1\n1 0\n") == DimacsError::Kind::malformed_header);
  CHECK(parse_error_kind("p cnf 2 1\n\n1 3 0\n", &line) == DimacsError::Kind::variable_out_of_range);
  CHECK(line == 3);
  CHECK(parse_error_kind("p cnf 2 1\n1 -x 0\n") == DimacsError::Kind::bad_token);
  CHECK(parse_error_kind("p cnf 2 2\n1 0\n0\n") == DimacsError::Kind::empty_clause);
  CHECK(parse_error_kind("p cnf 2 1\n1 0\n2\n-1\n", &line) == DimacsError::Kind::missing_terminator);
  CHECK(line == 3);
  CHECK(parse_error_kind("p cnf 2 1\n1 0\n2 0\n") == DimacsError::Kind::clause_count_mismatch);
}

TEST_CASE("round trip on random instances") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Var n = 1 + rng() % 40;
    Instance inst = oracle::random_cnf(rng, n, rng() % 30, 6);
    std::string text = write_dimacs(inst);
    CHECK(parse_dimacs(text) == inst);
    CHECK(write_dimacs(parse_dimacs(text)) == text);
  }
}

TEST_CASE("round trip on generated instances") {
  for (GenKind kind : {GenKind::random, GenKind::balanced, GenKind::no_triangle}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Instance inst = generate(GenParams{3, 50, 200, seed, kind});
      CHECK(parse_dimacs(write_dimacs(inst)) == inst);
    }
  }
}

TEST_CASE("clause_key examples") {
  CHECK(clause_key(lits({1, -2, 3})) == clause_key(lits({3, 1, -2})));
  CHECK(clause_key(lits({1, -2, 3})) != clause_key(lits({1, 2, 3})));
  CHECK(clause_key(lits({1, 1, 2})) != clause_key(lits({1, 2})));
}

TEST_CASE("clause_key is invariant under permutation") {
  std::mt19937_64 rng(5);
  ClauseKeyHash hash;
  for (int i = 0; i < 500; ++i) {
    Clause c = oracle::random_cnf(rng, 8, 1, 6).clause(0);
    Clause shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(clause_key(c) == clause_key(shuffled));
    CHECK(hash(clause_key(c)) == hash(clause_key(shuffled)));
  }
}

TEST_CASE("clause_key equality matches multiset equality") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    Clause a = oracle::random_cnf(rng, 3, 1, 3).clause(0);
    Clause b = oracle::random_cnf(rng, 3, 1, 3).clause(0);
    auto count = [](const Clause& c, Literal l) { return std::count(c.begin(), c.end(), l); };
    bool same = a.size() == b.size();
    for (const Literal& l : a) same = same && count(a, l) == count(b, l);
    CHECK((clause_key(a) == clause_key(b)) == same);
  }
}
