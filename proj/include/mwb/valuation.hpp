#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mwb/formula.hpp"

namespace mwb {

// Classical two-valued semantics where the atoms of evaluation are the basic
// formulas (propositional atoms and K-formulas; K is never descended into).

using Assignment = std::map<Formula, bool, FormulaLess>;

// Structural evaluation; `basic` supplies the value of every basic formula.
bool eval_classical(const Formula& f, const std::function<bool(const Formula&)>& basic);

bool eval_under(const Formula& f, const Assignment& a, bool default_value = false);

// Basic subformulas of all inputs, deduplicated, in deterministic order.
std::vector<Formula> collect_basics(std::span<const Formula> formulas);

// Satisfying assignment over the basic subformulas of `constraints`
// (all constraints simultaneously true), or nullopt when unsatisfiable.
// Backtracking search over a clausal encoding; deterministic.
std::optional<Assignment> satisfying_assignment(const std::vector<Formula>& constraints);

// Valid iff true under every assignment to its basic subformulas.
bool is_valid(const Formula& f);

}  // namespace mwb
