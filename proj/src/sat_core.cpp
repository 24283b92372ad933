#include "trisat/sat_core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace trisat {

Instance::Instance(Var n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    const Clause& c = clauses_[i];
    if (c.empty()) throw std::invalid_argument(fmt::format("clause {} is empty", i + 1));
    for (const Literal& lit : c) {
      if (lit.var == 0 || lit.var > n_) {
        throw std::invalid_argument(
            fmt::format("clause {} refers to variable {} outside 1..{}", i + 1, lit.var, n_));
      }
    }
    arity_ = std::max(arity_, c.size());
  }
}

std::string write_dimacs(const Instance& instance, std::string_view comment) {
  std::string out;
  out.reserve(16 + instance.clause_count() * (instance.arity() * 5 + 2));
  if (!comment.empty()) {
    std::size_t start = 0;
    while (start <= comment.size()) {
      std::size_t end = comment.find('\n', start);
      if (end == std::string_view::npos) end = comment.size();
      out += "c ";
      out.append(comment.substr(start, end - start));
      out += '\n';
      start = end + 1;
    }
  }
  fmt::format_to(std::back_inserter(out), "p cnf {} {}\n", instance.variable_count(),
                 instance.clause_count());
  for (const Clause& c : instance.clauses()) {
    for (const Literal& lit : c) fmt::format_to(std::back_inserter(out), "{} ", lit.to_dimacs());
    out += "0\n";
  }
  return out;
}

DimacsError::DimacsError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), kind_(kind), line_(line) {}

namespace {

using Kind = DimacsError::Kind;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Instance parse_dimacs(std::string_view text) {
  bool have_header = false;
  std::uint64_t declared_vars = 0;
  std::uint64_t declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t clause_start_line = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0][0] == 'c') continue;

    if (tokens[0] == "p") {
      if (have_header) throw DimacsError(Kind::malformed_header, line_no, "duplicate problem line");
      if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_number(tokens[2], declared_vars) ||
          !parse_number(tokens[3], declared_clauses) || declared_vars > 0x7fffffffULL) {
        throw DimacsError(Kind::malformed_header, line_no,
                          fmt::format("expected 'p cnf <vars> <clauses>', got '{}'", line));
      }
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw DimacsError(Kind::missing_header, line_no, "clause data before 'p cnf' line");
    }

    for (std::string_view token : tokens) {
      long long value = 0;
      if (!parse_number(token, value)) {
        throw DimacsError(Kind::bad_token, line_no, fmt::format("invalid literal '{}'", token));
      }
      if (value == 0) {
        if (current.empty()) throw DimacsError(Kind::empty_clause, line_no, "empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      std::uint64_t var = static_cast<std::uint64_t>(value < 0 ? -value : value);
      if (var > declared_vars) {
        throw DimacsError(Kind::variable_out_of_range, line_no,
                          fmt::format("literal {} exceeds declared variable count {}", value,
                                      declared_vars));
      }
      if (current.empty()) clause_start_line = line_no;
      current.push_back(Literal{static_cast<Var>(var), value < 0});
    }
  }

  if (!have_header) throw DimacsError(Kind::missing_header, line_no, "no 'p cnf' line found");
  if (!current.empty()) {
    throw DimacsError(Kind::missing_terminator, clause_start_line,
                      "last clause is not terminated by 0");
  }
  if (clauses.size() != declared_clauses) {
    throw DimacsError(Kind::clause_count_mismatch, line_no,
                      fmt::format("declared {} clauses, found {}", declared_clauses,
                                  clauses.size()));
  }
  return Instance(static_cast<Var>(declared_vars), std::move(clauses));
}

Instance read_dimacs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dimacs(buffer.str());
}

ClauseKey clause_key(const Clause& clause) {
  ClauseKey key;
  key.reserve(clause.size());
  for (const Literal& lit : clause) key.push_back(lit.to_dimacs());
  std::sort(key.begin(), key.end());
  return key;
}

std::size_t ClauseKeyHash::operator()(const ClauseKey& key) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
  for (int v : key) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace trisat
