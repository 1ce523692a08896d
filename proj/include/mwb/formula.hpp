#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mwb {

enum class Ternary : std::uint8_t { False, True, Unknown };

inline Ternary to_ternary(bool b) { return b ? Ternary::True : Ternary::False; }

// Immutable formula tree. Copies share structure; equality is syntactic
// identity (no normalization anywhere: `p|q` != `q|p`).
class Formula {
public:
  enum class Kind : std::uint8_t { Atom, Not, And, Or, Implies, Know };

  Formula() = default;  // empty handle; only valid() formulas may be inspected

  static Formula atom(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula know(Formula f);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& atom_name() const;  // Atom
  const Formula& lhs() const;            // And, Or, Implies
  const Formula& rhs() const;            // And, Or, Implies
  const Formula& child() const;          // Not, Know

  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_know() const { return kind() == Kind::Know; }
  // A formula is basic when it is an atom or a K-formula; models assign
  // truth values exactly to these.
  bool is_basic() const { return is_atom() || is_know(); }

  std::size_t node_count() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  // Total order: node count first, then structural. Deterministic across runs.
  static int compare(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const {
    return Formula::compare(a, b) < 0;
  }
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// Minimal-parenthesis concrete syntax; round-trips through parse().
std::string to_text(const Formula& f);

// K^0 f = f, K^{n+1} f = K(K^n f).
Formula kn(unsigned n, Formula f);

// Number of leading K's.
unsigned know_prefix_depth(const Formula& f);

// f with n leading K's removed; requires know_prefix_depth(f) >= n.
Formula strip_know(Formula f, unsigned n);

// True iff f = K^n(atom named `name`) for some n >= 0.
bool is_kn_of_atom(const Formula& f, const std::string& name);

// Maximal basic formulas reachable through boolean connectives only;
// K-formulas are opaque (never descended into). Nonempty for every formula.
FormulaSet basic_subformulas(const Formula& f);
void collect_basic_subformulas(const Formula& f, FormulaSet& out);

// Every atom name occurring anywhere in f, including under K.
std::set<std::string> collect_atoms(const Formula& f);

// Finite or cofinite set of propositional atoms.
class AtomSet {
public:
  AtomSet() = default;  // empty
  static AtomSet of(std::set<std::string> names);
  static AtomSet complement_of(std::set<std::string> names);
  static AtomSet all() { return complement_of({}); }
  static AtomSet none() { return of({}); }

  bool contains(const std::string& name) const;
  bool cofinite() const { return cofinite_; }
  const std::set<std::string>& names() const { return names_; }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

private:
  bool cofinite_ = false;
  std::set<std::string> names_;  // members if finite, non-members if cofinite
};

std::string to_text(const AtomSet& s);

}  // namespace mwb
