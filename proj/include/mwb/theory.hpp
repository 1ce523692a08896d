#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mwb/formula.hpp"

namespace mwb {

enum class Schema : std::uint8_t { V, Kdist, T, KK, Five };

const char* schema_name(Schema s);
std::optional<Schema> schema_from_name(std::string_view name);

// Shape of one schema instance (metavariables already substituted).
Formula kdist_instance(const Formula& a, const Formula& b);  // K(a->b) -> (Ka -> Kb)
Formula t_instance(const Formula& a);                        // Ka -> a
Formula kk_instance(const Formula& a);                       // Ka -> KKa
Formula five_instance(const Formula& a);                     // ~Ka -> K~Ka

// Syntactic schema match. Schema::V additionally checks that the formula
// under K is classically valid.
bool matches_schema(Schema s, const Formula& f);

// A theory presentation. Membership is decidable by syntactic matching;
// the denotation is
//
//   open.axioms  U  open schema instances
//   U  { K^n(x) : n >= 0, x in closed.axioms U closed schema instances }
//
// plus the two special forms: the all-formulas theory, and deductive-closure
// wrappers { f : base |= f } whose membership is delegated to the entailment
// engine (see contains() in entail.hpp).
class Theory {
public:
  struct Part {
    std::vector<Formula> axioms;  // sorted, deduplicated
    std::set<Schema> schemas;

    bool empty() const { return axioms.empty() && schemas.empty(); }
    void add_axiom(Formula f);
    friend bool operator==(const Part&, const Part&) = default;
  };

  Theory() = default;  // empty theory

  static Theory of_axioms(std::vector<Formula> axioms);
  static Theory of_schemas(std::set<Schema> schemas);
  static Theory all_formulas();
  static Theory deductive_closure(Theory base);

  Theory& add_axiom(Formula f);
  Theory& add_schema(Schema s);
  Theory& add_closed_axiom(Formula f);   // contributes every K^n prefix
  Theory& add_closed_schema(Schema s);   // schema family at every K^n prefix

  const Part& open_part() const { return open_; }
  const Part& closed_part() const { return closed_; }
  bool is_all_formulas() const { return all_; }
  bool is_deductive_closure() const { return base_ != nullptr; }
  const Theory& deductive_base() const;

  // Closed under f -> Kf. True for the all-formulas theory; false for
  // deductive-closure wrappers (not syntactically closed).
  bool is_closed() const;

  // Finite list of explicit axioms, nothing else (exact entailment applies).
  bool is_finite() const;

  bool has_schema(Schema s) const;
  bool empty() const { return !all_ && !base_ && open_.empty() && closed_.empty(); }

  // Open and closed explicit axioms, for candidate seeding.
  std::vector<Formula> explicit_axioms() const;
  std::set<std::string> atoms() const;

  friend bool operator==(const Theory& a, const Theory& b);

private:
  Part open_;
  Part closed_;
  std::shared_ptr<const Theory> base_;
  bool all_ = false;

  friend Theory close(Theory t);
  friend Theory union_theories(const Theory& a, const Theory& b);
};

// Membership by syntactic matching. Returns Unknown exactly for
// deductive-closure wrappers, which need the entailment engine.
// `why` (optional) receives a human-readable membership witness.
Ternary contains_syntactic(const Theory& t, const Formula& f, std::string* why = nullptr);

// Least closed theory including t; idempotent. Rejects wrappers.
Theory close(Theory t);

// Componentwise union of presentations; denotes the set union.
// Rejects deductive-closure wrappers.
Theory union_theories(const Theory& a, const Theory& b);

// Members of t instantiated from `candidates`, with K^n/closure prefix depth
// <= prefix_bound. Sound (every result is a member) and monotone in both
// arguments. Deterministic (size, structure) order.
std::vector<Formula> enumerate_instances(const Theory& t, std::span<const Formula> candidates,
                                         unsigned prefix_bound);

// Line-oriented theory files: one formula per line, plus directives
// `#schema V|K|T|KK|5`, `#schema-kn NAME`, `#axiom-kn FORMULA`, `#closed`.
// `# ` starts a comment.
Theory parse_theory(std::string_view text);
Theory load_theory_file(const std::string& path);
std::string to_text(const Theory& t);  // file-format serialization

// Short display form, e.g. "close(V u K u {p <-> K~p}) u T".
std::string describe(const Theory& t);

}  // namespace mwb
