#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "mwb/formula.hpp"
#include "mwb/theory.hpp"
#include "mwb/valuation.hpp"

namespace mwb {

// Named recursive model recipes. All of them are two-valued and terminate:
// every K-unwrapping step strictly shrinks the formula or is a syntactic test.
struct Recipe {
  enum class Kind {
    N2Transparent,   // atoms false; K f true iff f true here
    N1OverN2,        // atoms true; K f true iff N2 |= f
    N1OverN2WithKnP, // as N1OverN2, but K f also true when f = K^n(atom)
    BadFormula,      // atoms true; K f true iff f is not "bad"
    AllKnowing       // atoms from s; K f always true
  };

  Kind kind = Kind::N2Transparent;
  std::string atom;  // N1OverN2WithKnP, BadFormula
  AtomSet atoms;     // AllKnowing

  static Recipe n2() { return {Kind::N2Transparent, {}, {}}; }
  static Recipe n1() { return {Kind::N1OverN2, {}, {}}; }
  static Recipe n1_kn_override(std::string atom) { return {Kind::N1OverN2WithKnP, std::move(atom), {}}; }
  static Recipe bad_formula(std::string atom) { return {Kind::BadFormula, std::move(atom), {}}; }
  static Recipe all_knowing(AtomSet s) { return {Kind::AllKnowing, {}, std::move(s)}; }

  std::string name() const;  // CLI name, e.g. "n1k:p"
  friend bool operator==(const Recipe&, const Recipe&) = default;
};

// CLI recipe syntax: n2 | n1 | n1k:ATOM | bad:ATOM | allknowing[:a,b|:all]
Recipe parse_recipe(std::string_view text);

// Bad formulas: `atom | ~atom` itself, or any right-nested implication chain
// ending in it. Only the top-level implication spine is inspected.
bool is_bad_formula(const Formula& f, const std::string& atom);

struct EvalLimits {
  unsigned max_depth = 10000;
};

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A model: a total assignment of truth values to basic formulas, given as a
// finite table, a recipe, or a derived model whose K-queries go through an
// entailment oracle. Immutable and cheap to copy; derived models memoize
// K-query results per basic formula.
class Model {
public:
  enum class Kind { FiniteTable, Recipe, Derived };

  static Model finite_table(Assignment assignments, bool default_value);
  static Model from_recipe(struct Recipe r);
  // K f evaluates to k_oracle(f's body); used by derived_model() in entail.hpp.
  static Model derived(Theory t, AtomSet s, std::function<Ternary(const Formula&)> k_oracle);

  Ternary eval(const Formula& f, const EvalLimits& limits = {}) const;

  Kind kind() const;
  const struct Recipe& recipe() const;
  const Theory& derived_theory() const;
  const AtomSet& derived_atoms() const;
  const Assignment& table() const;
  bool table_default() const;

  std::string describe() const;

private:
  struct Impl;
  static Ternary eval_derived(const Impl& impl, const Formula& f);
  std::shared_ptr<Impl> impl_;
};

struct SatisfactionReport {
  enum class Outcome { HoldsOnSample, Violated, Unknown };
  Outcome outcome = Outcome::HoldsOnSample;
  std::size_t instances_checked = 0;
  std::size_t unknown_count = 0;
  std::optional<Formula> witness;  // first falsified (Violated) or first unknown
  // Structural satisfaction certificate covers the entire presentation, so
  // the sample is corroboration rather than the only evidence.
  bool exact = false;
};

// Evaluates every instance from enumerate_instances(t, candidates, bound).
// Violated reports the first falsified member in enumeration order.
// HoldsOnSample is not a proof that the model satisfies t unless `exact`.
SatisfactionReport satisfies_theory(const Model& m, const Theory& t,
                                    std::span<const Formula> candidates, unsigned bound,
                                    const EvalLimits& limits = {});

// Schema-level satisfaction check for recipe models: True means every member
// of t (not just a sample) holds, established structurally; False means a
// definite violation exists; Unknown means sampling is required.
Ternary recipe_satisfies_structurally(const Recipe& r, const Theory& t);

// Finite models serialize as `basic-formula = true|false` lines plus one
// `default = true|false` line.
Model parse_model(std::string_view text);
Model load_model_file(const std::string& path);
std::string to_text(const Model& m);

}  // namespace mwb
