#include "trisat/ref_solver.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace trisat {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::sat:
      return "sat";
    case SolveStatus::unsat:
      return "unsat";
    case SolveStatus::limit_exceeded:
      return "limit";
  }
  return "unknown";
}

bool Assignment::complete() const {
  return std::none_of(values_.begin() + 1, values_.end(), [](std::int8_t v) { return v == kUnset; });
}

namespace {

// Literal code: 2 * var + (negative ? 1 : 0).
using Code = std::uint32_t;

inline Code encode(const Literal& lit) { return 2 * lit.var + (lit.negative ? 1 : 0); }
inline Var var_of(Code c) { return c >> 1; }

class Dpll {
 public:
  Dpll(const Instance& instance, const SolveLimits& limits)
      : n_(instance.variable_count()),
        limits_(limits),
        values_(static_cast<std::size_t>(n_) + 1, kUnassigned),
        occurs_(static_cast<std::size_t>(n_) + 1, 0),
        watches_(2 * static_cast<std::size_t>(n_) + 2) {
    load(instance);
  }

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    if (!enqueue_units() || !propagate()) return finish(SolveStatus::unsat);
    if (all_clauses_satisfied()) return finish(SolveStatus::sat);

    for (;;) {
      Var next = next_branch_variable();
      if (next == 0) return finish(SolveStatus::sat);
      if (limits_.max_decisions && result_.decisions >= *limits_.max_decisions) {
        return finish(SolveStatus::limit_exceeded);
      }
      if (out_of_time()) return finish(SolveStatus::limit_exceeded);
      ++result_.decisions;
      frames_.push_back(Frame{trail_.size(), 2 * next, false});
      assign(2 * next);

      while (!propagate()) {
        while (!frames_.empty() && frames_.back().flipped) frames_.pop_back();
        if (frames_.empty()) return finish(SolveStatus::unsat);
        Frame& frame = frames_.back();
        undo_to(frame.trail_position);
        frame.flipped = true;
        ++result_.backtracks;
        assign(frame.literal ^ 1);
        if (out_of_time()) return finish(SolveStatus::limit_exceeded);
      }
    }
  }

 private:
  static constexpr std::int8_t kUnassigned = -1;

  struct Frame {
    std::size_t trail_position;
    Code literal;
    bool flipped;
  };

  // 1 true, 0 false, -1 unassigned.
  int value(Code c) const {
    std::int8_t v = values_[var_of(c)];
    return v < 0 ? -1 : (v ^ static_cast<int>(c & 1));
  }

  void assign(Code c) {
    values_[var_of(c)] = static_cast<std::int8_t>((c & 1) ^ 1);
    trail_.push_back(c);
  }

  void load(const Instance& instance) {
    std::vector<Code> lits;
    for (const Clause& clause : instance.clauses()) {
      lits.clear();
      bool tautology = false;
      for (const Literal& lit : clause) {
        Code c = encode(lit);
        if (std::find(lits.begin(), lits.end(), c ^ 1) != lits.end()) tautology = true;
        if (std::find(lits.begin(), lits.end(), c) == lits.end()) lits.push_back(c);
      }
      if (tautology) continue;
      for (Code c : lits) occurs_[var_of(c)] = 1;
      if (lits.size() == 1) {
        units_.push_back(lits[0]);
        continue;
      }
      auto index = static_cast<std::uint32_t>(starts_.size());
      starts_.push_back(static_cast<std::uint32_t>(store_.size()));
      sizes_.push_back(static_cast<std::uint32_t>(lits.size()));
      store_.insert(store_.end(), lits.begin(), lits.end());
      watches_[lits[0]].push_back(index);
      watches_[lits[1]].push_back(index);
    }
  }

  bool enqueue_units() {
    for (Code c : units_) {
      int v = value(c);
      if (v == 0) return false;
      if (v < 0) {
        assign(c);
        ++result_.propagations;
      }
    }
    return true;
  }

  bool propagate() {
    while (queue_head_ < trail_.size()) {
      const Code falsified = trail_[queue_head_++] ^ 1;
      std::vector<std::uint32_t>& ws = watches_[falsified];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const std::uint32_t ci = ws[i++];
        Code* lits = &store_[starts_[ci]];
        const std::uint32_t size = sizes_[ci];
        if (lits[0] == falsified) std::swap(lits[0], lits[1]);
        if (value(lits[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::uint32_t k = 2; k < size; ++k) {
          if (value(lits[k]) != 0) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(lits[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          queue_head_ = trail_.size();
          return false;
        }
        assign(lits[0]);
        ++result_.propagations;
      }
      ws.resize(j);
    }
    return true;
  }

  bool all_clauses_satisfied() const {
    for (std::size_t ci = 0; ci < starts_.size(); ++ci) {
      const Code* lits = &store_[starts_[ci]];
      bool satisfied = false;
      for (std::uint32_t k = 0; k < sizes_[ci] && !satisfied; ++k) satisfied = value(lits[k]) == 1;
      if (!satisfied) return false;
    }
    return true;
  }

  Var next_branch_variable() {
    while (cursor_ <= n_ && (!occurs_[cursor_] || values_[cursor_] != kUnassigned)) ++cursor_;
    return cursor_ <= n_ ? cursor_ : 0;
  }

  void undo_to(std::size_t position) {
    for (std::size_t i = trail_.size(); i > position; --i) {
      Var v = var_of(trail_[i - 1]);
      values_[v] = kUnassigned;
      cursor_ = std::min(cursor_, v);
    }
    trail_.resize(position);
    queue_head_ = position;
  }

  bool out_of_time() {
    if (!limits_.max_wall_time) return false;
    if ((++time_probe_ & 0xff) != 0) return false;
    return std::chrono::steady_clock::now() - start_ >= *limits_.max_wall_time;
  }

  SolveResult finish(SolveStatus status) {
    result_.status = status;
    if (status == SolveStatus::sat) {
      Assignment model(n_);
      for (Var v = 1; v <= n_; ++v) model.set(v, values_[v] == 1);
      result_.model = std::move(model);
    }
    return result_;
  }

  Var n_;
  SolveLimits limits_;
  std::vector<std::int8_t> values_;
  std::vector<char> occurs_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<Code> store_;
  std::vector<std::uint32_t> starts_;
  std::vector<std::uint32_t> sizes_;
  std::vector<Code> units_;
  std::vector<Code> trail_;
  std::vector<Frame> frames_;
  std::size_t queue_head_ = 0;
  Var cursor_ = 1;
  std::uint64_t time_probe_ = 0;
  std::chrono::steady_clock::time_point start_;
  SolveResult result_;
};

}  // namespace

SolveResult solve(const Instance& instance, const SolveLimits& limits) {
  if (limits.max_decisions && *limits.max_decisions == 0) {
    throw std::invalid_argument("max_decisions must be positive");
  }
  if (limits.max_wall_time && limits.max_wall_time->count() <= 0) {
    throw std::invalid_argument("max_wall_time must be positive");
  }
  SolveResult result = Dpll(instance, limits).run();
  if (result.status == SolveStatus::sat && !check_model(instance, *result.model)) {
    throw std::logic_error("solver produced a model that violates the formula");
  }
  return result;
}

bool check_model(const Instance& instance, const Assignment& assignment) {
  if (assignment.variable_count() < instance.variable_count()) {
    throw std::invalid_argument(fmt::format("assignment covers {} of {} variables",
                                            assignment.variable_count(),
                                            instance.variable_count()));
  }
  for (Var v = 1; v <= instance.variable_count(); ++v) {
    if (!assignment.is_set(v)) {
      throw std::invalid_argument(fmt::format("variable {} is unassigned", v));
    }
  }
  for (const Clause& clause : instance.clauses()) {
    bool satisfied = std::any_of(clause.begin(), clause.end(), [&](const Literal& lit) {
      return assignment.value(lit.var) != lit.negative;
    });
    if (!satisfied) return false;
  }
  return true;
}

bool brute_force_sat(const Instance& instance) {
  const Var n = instance.variable_count();
  if (n > kBruteForceMaxVars) {
    throw std::invalid_argument(
        fmt::format("brute force limited to {} variables, got {}", kBruteForceMaxVars, n));
  }
  struct Masks {
    std::uint32_t positive = 0;
    std::uint32_t negative = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(instance.clause_count());
  for (const Clause& clause : instance.clauses()) {
    Masks m;
    for (const Literal& lit : clause) {
      (lit.negative ? m.negative : m.positive) |= 1u << (lit.var - 1);
    }
    masks.push_back(m);
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const auto a = static_cast<std::uint32_t>(bits);
    bool all = std::all_of(masks.begin(), masks.end(), [a](const Masks& m) {
      return (a & m.positive) != 0 || (~a & m.negative) != 0;
    });
    if (all) return true;
  }
  return false;
}

}  // namespace trisat
