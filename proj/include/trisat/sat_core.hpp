#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trisat {

/// Variable index, 1-based as in DIMACS. Zero is never a valid variable.
using Var = std::uint32_t;

struct Literal {
  Var var = 1;
  bool negative = false;

  static Literal from_dimacs(int value) {
    return Literal{static_cast<Var>(std::abs(value)), value < 0};
  }
  int to_dimacs() const {
    return negative ? -static_cast<int>(var) : static_cast<int>(var);
  }
  Literal operator~() const { return Literal{var, !negative}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Literals in generator insertion order.
using Clause = std::vector<Literal>;

/// A CNF formula over variables 1..n. Validated on construction; immutable
/// afterwards.
class Instance {
 public:
  Instance() = default;
  /// Throws std::invalid_argument if a clause is empty, a literal refers to
  /// variable 0, or a variable exceeds n.
  Instance(Var n, std::vector<Clause> clauses);

  Var variable_count() const { return n_; }
  std::size_t clause_count() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_[i]; }
  /// Length of the longest clause (0 for an instance without clauses).
  std::size_t arity() const { return arity_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Var n_ = 0;
  std::vector<Clause> clauses_;
  std::size_t arity_ = 0;
};

/// Serializes to DIMACS CNF: `p cnf n m` followed by one zero-terminated line
/// per clause. A non-empty `comment` is emitted first as `c ` lines (one per
/// line of the comment).
std::string write_dimacs(const Instance& instance, std::string_view comment = {});

class DimacsError : public std::runtime_error {
 public:
  enum class Kind {
    missing_header,
    malformed_header,
    bad_token,
    variable_out_of_range,
    empty_clause,
    missing_terminator,
    clause_count_mismatch,
  };

  DimacsError(Kind kind, std::size_t line, const std::string& what);

  Kind kind() const { return kind_; }
  /// 1-based line number where the problem was detected.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Parses DIMACS CNF text. Comment lines (`c ...`) may appear anywhere;
/// clauses may span lines. Throws DimacsError.
Instance parse_dimacs(std::string_view text);

/// Reads and parses a DIMACS file. Throws std::runtime_error on I/O failure.
Instance read_dimacs_file(const std::string& path);

/// Canonical clause identity: the sorted multiset of signed literals.
using ClauseKey = std::vector<int>;

ClauseKey clause_key(const Clause& clause);

struct ClauseKeyHash {
  std::size_t operator()(const ClauseKey& key) const noexcept;
};

}  // namespace trisat
