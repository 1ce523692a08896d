// Test-only brute-force semantics: direct recursion over the satisfaction
// clauses plus exhaustive enumeration of assignments to basic subformulas.
// Deliberately independent of the library's clausal solver.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mwb/formula.hpp"

namespace oracle {

using mwb::Formula;

using Table = std::map<Formula, bool, mwb::FormulaLess>;

inline bool eval(const Formula& f, const Table& table, bool fallback = false) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Know: {
      auto it = table.find(f);
      return it == table.end() ? fallback : it->second;
    }
    case Formula::Kind::Not:
      return !eval(f.child(), table, fallback);
    case Formula::Kind::And:
      return eval(f.lhs(), table, fallback) && eval(f.rhs(), table, fallback);
    case Formula::Kind::Or:
      return eval(f.lhs(), table, fallback) || eval(f.rhs(), table, fallback);
    case Formula::Kind::Implies:
      return !eval(f.lhs(), table, fallback) || eval(f.rhs(), table, fallback);
  }
  return false;
}

inline std::vector<Formula> basics_of(const std::vector<Formula>& fs) {
  mwb::FormulaSet set;
  for (const Formula& f : fs) mwb::collect_basic_subformulas(f, set);
  return {set.begin(), set.end()};
}

// Every axiom true implies the goal true, over all 2^n assignments. n <= 24.
inline bool entails(const std::vector<Formula>& axioms, const Formula& goal) {
  std::vector<Formula> all = axioms;
  all.push_back(goal);
  const std::vector<Formula> basics = basics_of(all);
  if (basics.size() > 24) throw std::runtime_error("oracle: too many basics");
  const std::uint64_t limit = 1ull << basics.size();
  for (std::uint64_t bits = 0; bits < limit; ++bits) {
    Table table;
    for (std::size_t i = 0; i < basics.size(); ++i) table[basics[i]] = (bits >> i) & 1;
    bool all_true = true;
    for (const Formula& ax : axioms)
      if (!eval(ax, table)) {
        all_true = false;
        break;
      }
    if (all_true && !eval(goal, table)) return false;
  }
  return true;
}

inline bool valid(const Formula& f) { return entails(std::vector<Formula>{}, f); }

}  // namespace oracle
