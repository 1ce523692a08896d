#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwb/model.hpp"
#include "mwb/theory.hpp"
#include "mwb/valuation.hpp"

namespace mwb {

class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Premise {
  Formula formula;
  std::string membership;  // witness text; membership is re-verified by check_proof
};

// Compactness normal form: finitely many theory members plus one classically
// valid implication chain ending in the goal.
struct Proof {
  std::vector<Premise> premises;
  Formula core;  // premises[0] -> ... -> premises[n-1] -> goal
  Formula goal;
};

Formula implication_chain(std::span<const Premise> premises, const Formula& goal);

struct SearchLimits {
  unsigned rounds = 3;             // saturation rounds; K-prefix depth grows with the round
  std::size_t max_candidates = 48; // cap on un-prefixed candidate formulas
  std::size_t max_pool = 20000;    // cap on the instance pool per round
  bool use_recipes = true;         // recipe refutation for schematic theories
  bool enable_lifting = true;      // necessitation lifts/bridges on closed V,K parts
};

struct BoundReport {
  unsigned rounds = 0;
  std::size_t candidates = 0;
  std::size_t pool_size = 0;
  std::string note;
};

struct RecipeEvidence {
  // "n1", "bad:p", ... for recipe witnesses; "derived-self" when the theory is
  // a diagonal core refuted by its own derived model over the empty atom set.
  std::string witness;
  std::optional<Recipe> recipe;
  SatisfactionReport theory_report;  // exact flag set when the certificate covers all of t
};

struct Verdict {
  enum class Kind { Entailed, RefutedFinite, RefutedByRecipe, Unknown };

  Kind kind = Kind::Unknown;
  std::optional<Proof> proof;                   // Entailed
  std::optional<Model> countermodel;            // RefutedFinite
  std::optional<RecipeEvidence> recipe_evidence;  // RefutedByRecipe
  std::optional<BoundReport> bound_report;      // Unknown

  static Verdict entailed(Proof p);
  static Verdict refuted_finite(Model m);
  static Verdict refuted_by_recipe(RecipeEvidence e);
  static Verdict unknown(BoundReport r);

  bool entailed_kind() const { return kind == Kind::Entailed; }
};

const char* verdict_kind_name(Verdict::Kind k);

// Exact entailment for a finite list of axioms: Entailed with a premise-minimal
// proof, or RefutedFinite with a countermodel over the basic subformulas of
// axioms and goal (default false elsewhere). Never Unknown.
Verdict entails_finite(std::vector<Formula> axioms, const Formula& goal);

// Bounded-saturation entailment for any theory presentation. Sound in every
// verdict; Unknown when neither a proof nor a certified refutation was found
// within the limits.
Verdict entails(const Theory& t, const Formula& goal, const SearchLimits& limits = {});

// Full membership: syntactic matching, plus the entailment engine for
// deductive-closure wrappers (where Unknown is possible).
Ternary contains(const Theory& t, const Formula& f, const SearchLimits& limits = {},
                 std::string* why = nullptr);

// From a proof of t |= f, builds a proof of t |= Kf: the K-image of the proof
// core (a V member), the K-distribution instances along its spine, and the
// K-prefixed premises supplied by closure. Requires t closed with schemas V
// and K; throws PreconditionError naming the failing requirement otherwise.
Proof simulated_necessitation(const Theory& t, const Proof& proof_of_goal,
                              const SearchLimits& limits = {});

// Accepts iff the core is exactly the premise chain ending in the goal, the
// core is classically valid, and every premise is a member of t.
bool check_proof(const Theory& t, const Proof& pf, const SearchLimits& limits = {});

// Model with atoms from s and K f true iff t |= f; K-queries may be Unknown
// at the engine's bound. Memoized per basic formula.
Model derived_model(const Theory& t, AtomSet s, const SearchLimits& limits = {});

struct ConsistencyResult {
  enum class Kind { Consistent, Inconsistent, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Model> witness;                       // Consistent
  std::optional<SatisfactionReport> witness_report;   // exact or flagged sampled
  std::optional<Proof> proof;                         // Inconsistent
  std::optional<BoundReport> bound_report;
};

ConsistencyResult is_consistent(const Theory& t, const SearchLimits& limits = {});

// Basic-subformula closure of the seeds and the theory's explicit axioms,
// closed under stripping one K. prefix_depth adds K^j prefixes (j <= depth).
std::vector<Formula> default_candidates(const Theory& t, std::span<const Formula> seeds,
                                        unsigned prefix_depth);

// Refutation witnesses tried in order for schematic theories.
std::vector<Recipe> refutation_recipes(const Theory& t, const Formula& goal);

// (a -> K~a) & (K~a -> a), the self-referential axiom "a is known to be false".
Formula diagonal_axiom(const std::string& atom);

// Detects the consistency-theorem core shape: a closed theory whose schemas
// include V and K (at most V, K, KK) and whose only closed axiom is a
// diagonal. Such a theory is satisfied by its own derived model over any
// atom set not containing the diagonal atom.
std::optional<std::string> diagonal_core_atom(const Theory& t);

}  // namespace mwb
