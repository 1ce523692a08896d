#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwb/entail.hpp"
#include "mwb/generate.hpp"

namespace mwb {

enum class GenericityMode { Generic, ClosedGeneric };

const char* mode_name(GenericityMode m);

// Derivation tree in the certificate algebra. A certificate's denoted theory
// is generic (or closed generic, per mode()) whenever its leaves are, and the
// leaves are the V, K and V u K u KK facts.
class Certificate {
public:
  enum class Kind {
    AxiomV,
    AxiomK,
    Union,
    Closure,
    DeductiveClosure,
    NormalKripkeClosure,
    ClosedGenericVKKK,
    Weaken
  };

  static Certificate axiom_v();
  static Certificate axiom_k();
  static Certificate closed_generic_vkkk();
  static Certificate union_of(std::vector<Certificate> children);
  static Certificate closure(Certificate child);
  static Certificate deductive_closure(Certificate child);
  static Certificate normal_kripke_closure(Certificate child);
  static Certificate weaken(Certificate generic_child);  // generic -> closed generic

  Kind kind() const { return kind_; }
  const std::vector<Certificate>& children() const { return children_; }

  // Computed bottom-up; ClosedGenericVKKK and anything containing it is
  // closed-generic only.
  GenericityMode mode() const;
  Theory denoted_theory() const;
  std::string describe() const;

private:
  Certificate(Kind k, std::vector<Certificate> children)
      : kind_(k), children_(std::move(children)) {}
  Kind kind_;
  std::vector<Certificate> children_;
};

struct CertifyResult {
  std::optional<Certificate> certificate;
  std::string reason;  // why no derivation exists, when certificate is empty
};

// Certificate whose denoted theory equals the goal's presentation, or
// not-derivable. Never claims non-genericity.
CertifyResult certify(const Theory& goal, GenericityMode mode);

// One resolved K-subquery in a re-verifiable evaluation trace.
struct KResolution {
  Formula k_formula;  // the basic K-node
  Verdict verdict;    // exact: checked proof, finite countermodel, or exact recipe
};

struct Falsification {
  Theory base;
  Theory extension;  // includes base's presentation
  AtomSet s;
  Formula violated;  // member of base falsified by derived_model(extension, s)
  std::vector<KResolution> trace;
};

struct FalsifyStrategy {
  unsigned bound = 3;
  unsigned random_budget = 48;
  std::uint64_t seed = 0xC0FFEEULL;
  FormulaGen::Params gen;  // axiom generator for randomized extensions
  SearchLimits limits;
};

struct FalsifyOutcome {
  std::optional<Falsification> falsification;
  std::string note;
  std::size_t extensions_tried = 0;
  std::uint64_t seed = 0;  // for deterministic replay of the randomized part
};

// Named extension shapes first, then randomized ones. Any returned
// falsification re-verifies end to end with exact K-resolutions.
FalsifyOutcome falsify(const Theory& base, GenericityMode mode, const FalsifyStrategy& = {});

// Exact evaluation at derived_model(t, s): every K-subquery must resolve to a
// checked proof, a finite countermodel, or an exact recipe refutation.
// nullopt when some subquery cannot be resolved exactly.
std::optional<bool> exact_eval(const Theory& t, const AtomSet& s, const Formula& f,
                               std::vector<KResolution>& trace, const SearchLimits& limits = {});

bool verify_falsification(const Falsification& f, const SearchLimits& limits = {});

// ---- reproduction suite -------------------------------------------------

// Smallest closed theory with V, K, T and the diagonal axiom for `atom`.
Theory knower_theory(const std::string& atom = "p");

struct KnowerReport {
  Theory theory;
  Proof not_p;          // derived by the engine
  Proof k_not_p;        // simulated necessitation applied to not_p
  Proof p;              // closes the circle through the diagonal axiom
  Proof contradiction;  // p & ~p
  bool all_checked = false;
};

KnowerReport knower_paradox(const std::string& atom = "p", const SearchLimits& limits = {});

struct ConsistencyDemo {
  Theory core;  // smallest closed theory with H and the diagonal axiom
  Theory full;  // core plus the factivity schema
  Model witness;
  Verdict core_not_p;        // exact refutation of core |= ~p (all-knowing sub-model)
  SatisfactionReport sample; // witness against full
  GenericityMode mode;
};

// Requires: the diagonal atom not in s; h_cert certifies H (generic or closed
// generic; both hypothesis shapes work). Throws PreconditionError otherwise.
ConsistencyDemo knower_consistency(const Certificate& h_cert, const AtomSet& s,
                                   const std::string& atom = "p",
                                   const SearchLimits& limits = {});

// close(V u K u 5 u {diagonal}) u T: the negative-introspection reformulation.
Theory five_paradox_theory(const std::string& atom = "p");

struct SupersetDemo {
  Schema schema;  // Schema::T or Schema::Five
  Theory theory;  // the paradox theory the hypothetical genericity would make consistent
  std::vector<Proof> inconsistency_proofs;  // all accepted by check_proof
  SatisfactionReport would_be_witness;      // Violated: the would-be model fails
  std::optional<Formula> violated;
  std::string note;
};

SupersetDemo no_superset_demo(Schema which, const SearchLimits& limits = {});

struct NecessitationDemo {
  Theory closed_theory;
  Proof base_proof;       // |- p -> p
  Proof lifted;           // K(p -> p)
  bool lifted_checked = false;
  Theory blocked_theory;  // the weakened theory, deliberately not closed
  Proof blocked_goal_proof;  // its proof of ~p
  std::string blocked_error;  // the precondition failure that blocks the lift
};

NecessitationDemo necessitation_demo(const SearchLimits& limits = {});

struct SoundnessSample {
  std::size_t trials = 0;
  std::size_t instances_checked = 0;
  std::size_t violations = 0;
  std::size_t unknowns = 0;
  std::optional<Formula> first_violation;
};

// Random extensions of the certified theory (closed when the mode demands),
// random atom sets, sampled instances: genericity predicts zero violations.
SoundnessSample certificate_soundness_sample(const Certificate& cert, std::size_t trials,
                                             std::uint64_t seed,
                                             const SearchLimits& limits = {});

}  // namespace mwb
