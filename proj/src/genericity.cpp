#include "mwb/genericity.hpp"

#include <algorithm>
#include <cassert>

namespace mwb {

const char* mode_name(GenericityMode m) {
  return m == GenericityMode::Generic ? "generic" : "closed-generic";
}

Certificate Certificate::axiom_v() { return Certificate(Kind::AxiomV, {}); }
Certificate Certificate::axiom_k() { return Certificate(Kind::AxiomK, {}); }
Certificate Certificate::closed_generic_vkkk() { return Certificate(Kind::ClosedGenericVKKK, {}); }

Certificate Certificate::union_of(std::vector<Certificate> children) {
  return Certificate(Kind::Union, std::move(children));
}

Certificate Certificate::closure(Certificate child) {
  return Certificate(Kind::Closure, {std::move(child)});
}

Certificate Certificate::deductive_closure(Certificate child) {
  return Certificate(Kind::DeductiveClosure, {std::move(child)});
}

Certificate Certificate::normal_kripke_closure(Certificate child) {
  return Certificate(Kind::NormalKripkeClosure, {std::move(child)});
}

Certificate Certificate::weaken(Certificate generic_child) {
  if (generic_child.mode() != GenericityMode::Generic)
    throw std::invalid_argument("weaken applies to generic certificates only");
  return Certificate(Kind::Weaken, {std::move(generic_child)});
}

GenericityMode Certificate::mode() const {
  switch (kind_) {
    case Kind::AxiomV:
    case Kind::AxiomK:
      return GenericityMode::Generic;
    case Kind::ClosedGenericVKKK:
    case Kind::Weaken:
      return GenericityMode::ClosedGeneric;
    case Kind::Union: {
      for (const Certificate& c : children_)
        if (c.mode() == GenericityMode::ClosedGeneric) return GenericityMode::ClosedGeneric;
      return GenericityMode::Generic;
    }
    case Kind::Closure:
    case Kind::DeductiveClosure:
    case Kind::NormalKripkeClosure:
      return children_.front().mode();
  }
  return GenericityMode::ClosedGeneric;
}

Theory Certificate::denoted_theory() const {
  switch (kind_) {
    case Kind::AxiomV:
      return Theory::of_schemas({Schema::V});
    case Kind::AxiomK:
      return Theory::of_schemas({Schema::Kdist});
    case Kind::ClosedGenericVKKK:
      return Theory::of_schemas({Schema::V, Schema::Kdist, Schema::KK});
    case Kind::Union: {
      Theory t;
      for (const Certificate& c : children_) t = union_theories(t, c.denoted_theory());
      return t;
    }
    case Kind::Closure:
      return close(children_.front().denoted_theory());
    case Kind::DeductiveClosure:
      return Theory::deductive_closure(children_.front().denoted_theory());
    case Kind::NormalKripkeClosure:
      return Theory::deductive_closure(
          close(union_theories(children_.front().denoted_theory(),
                               Theory::of_schemas({Schema::V, Schema::Kdist}))));
    case Kind::Weaken:
      return children_.front().denoted_theory();
  }
  return {};
}

std::string Certificate::describe() const {
  switch (kind_) {
    case Kind::AxiomV: return "V";
    case Kind::AxiomK: return "K";
    case Kind::ClosedGenericVKKK: return "VKKK";
    case Kind::Weaken: return "weaken(" + children_.front().describe() + ")";
    case Kind::Closure: return "closure(" + children_.front().describe() + ")";
    case Kind::DeductiveClosure: return "deductive-closure(" + children_.front().describe() + ")";
    case Kind::NormalKripkeClosure:
      return "normal-kripke-closure(" + children_.front().describe() + ")";
    case Kind::Union: {
      std::string out = "union(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ", ";
        out += children_[i].describe();
      }
      return out + ")";
    }
  }
  return "?";
}

namespace {

struct LeafResult {
  std::optional<std::vector<Certificate>> leaves;
  std::string reason;
};

LeafResult leaves_for(const std::set<Schema>& schemas, GenericityMode mode) {
  LeafResult out;
  if (schemas.count(Schema::T)) {
    out.reason = "no constructor yields schema T";
    return out;
  }
  if (schemas.count(Schema::Five)) {
    out.reason = "no constructor yields schema 5";
    return out;
  }
  std::vector<Certificate> leaves;
  if (schemas.count(Schema::KK)) {
    if (mode == GenericityMode::Generic) {
      out.reason = "KK is derivable only in closed-generic mode (as part of V u K u KK)";
      return out;
    }
    if (!schemas.count(Schema::V) || !schemas.count(Schema::Kdist)) {
      out.reason = "KK is derivable only inside the bundle V u K u KK";
      return out;
    }
    leaves.push_back(Certificate::closed_generic_vkkk());
  } else {
    if (schemas.count(Schema::V)) leaves.push_back(Certificate::axiom_v());
    if (schemas.count(Schema::Kdist)) leaves.push_back(Certificate::axiom_k());
  }
  out.leaves = std::move(leaves);
  return out;
}

Certificate collapse_union(std::vector<Certificate> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  return Certificate::union_of(std::move(parts));
}

}  // namespace

CertifyResult certify(const Theory& goal, GenericityMode mode) {
  CertifyResult out;
  if (goal.is_all_formulas()) {
    out.reason = "the all-formulas theory is inconsistent; nothing derives it";
    return out;
  }
  if (goal.is_deductive_closure()) {
    CertifyResult inner = certify(goal.deductive_base(), mode);
    if (!inner.certificate) return inner;
    out.certificate = Certificate::deductive_closure(std::move(*inner.certificate));
    return out;
  }
  if (!goal.open_part().axioms.empty() || !goal.closed_part().axioms.empty()) {
    out.reason = "explicit axioms have no certificate constructor";
    return out;
  }

  std::vector<Certificate> parts;
  LeafResult open = leaves_for(goal.open_part().schemas, mode);
  if (!open.leaves) {
    out.reason = open.reason;
    return out;
  }
  for (Certificate& c : *open.leaves) parts.push_back(std::move(c));
  if (!goal.closed_part().schemas.empty()) {
    LeafResult closed = leaves_for(goal.closed_part().schemas, mode);
    if (!closed.leaves) {
      out.reason = closed.reason;
      return out;
    }
    parts.push_back(Certificate::closure(collapse_union(std::move(*closed.leaves))));
  }

  Certificate cert = collapse_union(std::move(parts));
  if (!(cert.denoted_theory() == goal)) {
    out.reason = "internal: derived certificate does not match the goal presentation";
    return out;
  }
  if (mode == GenericityMode::Generic && cert.mode() == GenericityMode::ClosedGeneric) {
    out.reason = "only a closed-generic certificate exists for this presentation";
    return out;
  }
  if (mode == GenericityMode::ClosedGeneric && cert.mode() == GenericityMode::Generic)
    cert = Certificate::weaken(std::move(cert));
  out.certificate = std::move(cert);
  return out;
}

std::optional<bool> exact_eval(const Theory& t, const AtomSet& s, const Formula& f,
                               std::vector<KResolution>& trace, const SearchLimits& limits) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return s.contains(f.atom_name());
    case Formula::Kind::Know: {
      for (const KResolution& r : trace)
        if (r.k_formula == f)
          return r.verdict.kind == Verdict::Kind::Entailed ? std::optional<bool>(true)
                                                           : std::optional<bool>(false);
      Verdict v = entails(t, f.child(), limits);
      switch (v.kind) {
        case Verdict::Kind::Entailed:
          if (!check_proof(t, *v.proof, limits)) return std::nullopt;
          trace.push_back({f, std::move(v)});
          return true;
        case Verdict::Kind::RefutedFinite:
          trace.push_back({f, std::move(v)});
          return false;
        case Verdict::Kind::RefutedByRecipe:
          if (!v.recipe_evidence->theory_report.exact) return std::nullopt;
          trace.push_back({f, std::move(v)});
          return false;
        case Verdict::Kind::Unknown:
          return std::nullopt;
      }
      return std::nullopt;
    }
    case Formula::Kind::Not: {
      auto v = exact_eval(t, s, f.child(), trace, limits);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Formula::Kind::And: {
      auto l = exact_eval(t, s, f.lhs(), trace, limits);
      if (l && !*l) return false;
      auto r = exact_eval(t, s, f.rhs(), trace, limits);
      if (r && !*r) return false;
      if (l && r) return true;
      return std::nullopt;
    }
    case Formula::Kind::Or: {
      auto l = exact_eval(t, s, f.lhs(), trace, limits);
      if (l && *l) return true;
      auto r = exact_eval(t, s, f.rhs(), trace, limits);
      if (r && *r) return true;
      if (l && r) return false;
      return std::nullopt;
    }
    case Formula::Kind::Implies: {
      auto l = exact_eval(t, s, f.lhs(), trace, limits);
      if (l && !*l) return true;
      auto r = exact_eval(t, s, f.rhs(), trace, limits);
      if (r && *r) return true;
      if (l && r) return false;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

bool theory_includes(const Theory& ext, const Theory& base) {
  if (ext.is_all_formulas()) return true;
  if (base.is_all_formulas() || base.is_deductive_closure() || ext.is_deductive_closure())
    return false;
  for (Schema s : base.open_part().schemas)
    if (!ext.open_part().schemas.count(s) && !ext.closed_part().schemas.count(s)) return false;
  for (Schema s : base.closed_part().schemas)
    if (!ext.closed_part().schemas.count(s)) return false;
  for (const Formula& ax : base.open_part().axioms)
    if (contains_syntactic(ext, ax) != Ternary::True) return false;
  for (const Formula& ax : base.closed_part().axioms) {
    const auto& ca = ext.closed_part().axioms;
    if (!std::binary_search(ca.begin(), ca.end(), ax, FormulaLess{})) return false;
  }
  return true;
}

std::vector<std::string> fresh_atoms(const Theory& base, std::size_t count) {
  const std::set<std::string> used = base.atoms();
  static const char* pool[] = {"p", "q", "r", "s", "t0", "u0"};
  std::vector<std::string> out;
  for (const char* name : pool) {
    if (out.size() == count) break;
    if (!used.count(name)) out.emplace_back(name);
  }
  std::size_t i = 0;
  while (out.size() < count) out.push_back("x" + std::to_string(i++));
  return out;
}

}  // namespace

bool verify_falsification(const Falsification& f, const SearchLimits& limits) {
  if (contains_syntactic(f.base, f.violated) != Ternary::True) return false;
  if (!theory_includes(f.extension, f.base)) return false;
  std::vector<KResolution> trace;
  const auto v = exact_eval(f.extension, f.s, f.violated, trace, limits);
  return v.has_value() && !*v;
}

FalsifyOutcome falsify(const Theory& base, GenericityMode mode, const FalsifyStrategy& strategy) {
  FalsifyOutcome out;
  out.seed = strategy.seed;
  const std::vector<std::string> ax = fresh_atoms(base, 2);
  const Formula x = Formula::atom(ax[0]);
  const Formula y = Formula::atom(ax[1]);

  std::vector<Theory> extensions;
  if (mode == GenericityMode::Generic) {
    extensions.push_back(union_theories(base, Theory::of_axioms({x})));
    extensions.push_back(close(union_theories(base, Theory::of_axioms({x}))));
    extensions.push_back(
        union_theories(base, Theory::of_axioms({x, Formula::implication(x, y)})));
  } else {
    extensions.push_back(close(base));
    extensions.push_back(close(union_theories(base, Theory::of_axioms({x}))));
    extensions.push_back(
        close(union_theories(base, Theory::of_axioms({x, Formula::implication(x, y)}))));
  }
  FormulaGen gen(strategy.gen, strategy.seed);
  for (unsigned i = 0; i < strategy.random_budget; ++i) {
    std::vector<Formula> extra;
    const unsigned n = 1 + gen.uniform(3);
    for (unsigned j = 0; j < n; ++j) extra.push_back(gen.next());
    Theory ext = union_theories(base, Theory::of_axioms(std::move(extra)));
    extensions.push_back(mode == GenericityMode::ClosedGeneric ? close(std::move(ext)) : ext);
  }

  // candidate seeds: the extension's atoms plus the classical tautology shape
  for (Theory& ext : extensions) {
    ++out.extensions_tried;
    if (mode == GenericityMode::ClosedGeneric && !ext.is_closed()) continue;
    std::vector<Formula> seeds = ext.explicit_axioms();
    seeds.push_back(x);
    seeds.push_back(Formula::disjunction(x, Formula::negation(x)));
    const std::vector<Formula> cands = default_candidates(ext, seeds, strategy.bound);
    Model m = derived_model(ext, AtomSet::none(), strategy.limits);
    SatisfactionReport rep = satisfies_theory(m, base, cands, strategy.bound);
    if (rep.outcome != SatisfactionReport::Outcome::Violated) continue;
    Falsification cand{base, ext, AtomSet::none(), *rep.witness, {}};
    std::vector<KResolution> trace;
    const auto v = exact_eval(ext, cand.s, cand.violated, trace, strategy.limits);
    if (!v || *v) continue;  // only exactly re-verified witnesses are reported
    cand.trace = std::move(trace);
    out.falsification = std::move(cand);
    return out;
  }
  out.note = "no falsification found within the extension budget";
  return out;
}

// ---- reproduction suite -------------------------------------------------

Theory knower_theory(const std::string& atom) {
  Theory t = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::T});
  t.add_axiom(diagonal_axiom(atom));
  return close(std::move(t));
}

KnowerReport knower_paradox(const std::string& atom, const SearchLimits& limits) {
  KnowerReport rep;
  rep.theory = knower_theory(atom);
  const Formula a = Formula::atom(atom);
  const Formula not_a = Formula::negation(a);

  Verdict v1 = entails(rep.theory, not_a, limits);
  if (v1.kind != Verdict::Kind::Entailed)
    throw std::logic_error("knower: the engine failed to derive the negated diagonal atom");
  rep.not_p = std::move(*v1.proof);

  rep.k_not_p = simulated_necessitation(rep.theory, rep.not_p, limits);

  // the diagonal axiom turns K~p into p
  std::vector<Formula> premises;
  for (const Premise& q : rep.k_not_p.premises) premises.push_back(q.formula);
  premises.push_back(diagonal_axiom(atom));
  Verdict v3 = entails_finite(premises, a);
  if (v3.kind != Verdict::Kind::Entailed)
    throw std::logic_error("knower: closing the circle through the diagonal failed");
  rep.p = std::move(*v3.proof);

  std::vector<Formula> all;
  for (const Premise& q : rep.not_p.premises) all.push_back(q.formula);
  for (const Premise& q : rep.p.premises) all.push_back(q.formula);
  Verdict v4 = entails_finite(all, Formula::conjunction(a, not_a));
  if (v4.kind != Verdict::Kind::Entailed)
    throw std::logic_error("knower: the combined premises do not yield the contradiction");
  rep.contradiction = std::move(*v4.proof);

  for (Proof* pf : {&rep.p, &rep.contradiction}) {
    for (Premise& q : pf->premises) {
      std::string why;
      if (contains(rep.theory, q.formula, limits, &why) != Ternary::True)
        throw std::logic_error("knower: premise lost theory membership");
      q.membership = why;
    }
  }
  rep.all_checked = check_proof(rep.theory, rep.not_p, limits) &&
                    check_proof(rep.theory, rep.k_not_p, limits) &&
                    check_proof(rep.theory, rep.p, limits) &&
                    check_proof(rep.theory, rep.contradiction, limits);
  return rep;
}

ConsistencyDemo knower_consistency(const Certificate& h_cert, const AtomSet& s,
                                   const std::string& atom, const SearchLimits& limits) {
  if (s.contains(atom))
    throw PreconditionError("the diagonal atom must not be in the atom set");
  const Theory h = h_cert.denoted_theory();
  if (h.is_deductive_closure())
    throw PreconditionError("deductive-closure hypotheses are not supported here");

  ConsistencyDemo demo;
  demo.mode = h_cert.mode();
  Theory with_diag = h;
  with_diag.add_axiom(diagonal_axiom(atom));
  demo.core = close(std::move(with_diag));
  demo.full = union_theories(demo.core, Theory::of_schemas({Schema::T}));
  demo.witness = derived_model(demo.core, s, limits);

  demo.core_not_p = entails(demo.core, Formula::negation(Formula::atom(atom)), limits);
  if (demo.core_not_p.kind == Verdict::Kind::Entailed)
    throw std::logic_error("consistency demo: the core unexpectedly entails the negated atom");

  const Formula a = Formula::atom(atom);
  std::vector<Formula> seeds = {a,
                                Formula::atom(atom == "q" ? "r" : "q"),
                                Formula::negation(a),
                                Formula::disjunction(a, Formula::negation(a)),
                                Formula::implication(a, Formula::atom(atom == "q" ? "r" : "q"))};
  const std::vector<Formula> cands = default_candidates(demo.full, seeds, limits.rounds);
  demo.sample = satisfies_theory(demo.witness, demo.full, cands, limits.rounds);
  return demo;
}

Theory five_paradox_theory(const std::string& atom) {
  Theory core = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::Five});
  core.add_axiom(diagonal_axiom(atom));
  return union_theories(close(std::move(core)), Theory::of_schemas({Schema::T}));
}

SupersetDemo no_superset_demo(Schema which, const SearchLimits& limits) {
  if (which != Schema::T && which != Schema::Five)
    throw std::invalid_argument("superset demos exist for schemas T and 5");
  SupersetDemo demo;
  demo.schema = which;
  const std::string atom = "p";

  if (which == Schema::T) {
    // would-be closed-generic H = V u K u T makes the knower theory itself
    // the consistency core; the paradox proofs contradict that directly
    demo.theory = knower_theory(atom);
    KnowerReport kr = knower_paradox(atom, limits);
    demo.inconsistency_proofs = {kr.not_p, kr.k_not_p, kr.p, kr.contradiction};
    Model would_be = derived_model(demo.theory, AtomSet::none(), limits);
    const Formula a = Formula::atom(atom);
    std::vector<Formula> seeds = {a, Formula::negation(a)};
    const std::vector<Formula> cands = default_candidates(demo.theory, seeds, limits.rounds);
    demo.would_be_witness = satisfies_theory(would_be, demo.theory, cands, limits.rounds);
    demo.violated = demo.would_be_witness.witness;
    demo.note =
        "a closed-generic superset of T would make this theory consistent via its derived "
        "model; the checked proofs derive a contradiction from it, and the derived model "
        "violates a member. S4 and S5 contain T, so neither is closed generic.";
  } else {
    demo.theory = five_paradox_theory(atom);
    Verdict v = entails(demo.theory, Formula::conjunction(Formula::atom(atom),
                                                          Formula::negation(Formula::atom(atom))),
                        limits);
    if (v.kind != Verdict::Kind::Entailed)
      throw std::logic_error("five-superset: the engine failed to derive the contradiction");
    demo.inconsistency_proofs = {std::move(*v.proof)};
    Theory core = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::Five});
    core.add_axiom(diagonal_axiom(atom));
    core = close(std::move(core));
    Model would_be = derived_model(core, AtomSet::none(), limits);
    const Formula a = Formula::atom(atom);
    std::vector<Formula> seeds = {a, Formula::negation(a)};
    const std::vector<Formula> cands = default_candidates(demo.theory, seeds, limits.rounds);
    demo.would_be_witness = satisfies_theory(would_be, demo.theory, cands, limits.rounds);
    demo.violated = demo.would_be_witness.witness;
    demo.note =
        "a closed-generic superset of 5 would make this theory consistent; the checked proof "
        "derives a contradiction from it. KD45 and S5 contain 5, so neither is closed generic.";
  }
  if (which == Schema::T || which == Schema::Five) {
    for (const Proof& pf : demo.inconsistency_proofs)
      if (!check_proof(demo.theory, pf, limits))
        throw std::logic_error("superset demo: a proof failed the kernel check");
  }
  return demo;
}

NecessitationDemo necessitation_demo(const SearchLimits& limits) {
  NecessitationDemo demo;
  demo.closed_theory = close(Theory::of_schemas({Schema::V, Schema::Kdist}));
  const Formula p = Formula::atom("p");
  const Formula p_imp_p = Formula::implication(p, p);
  Verdict v = entails(demo.closed_theory, p_imp_p, limits);
  if (v.kind != Verdict::Kind::Entailed)
    throw std::logic_error("necessitation demo: p -> p was not derived");
  demo.base_proof = std::move(*v.proof);
  demo.lifted = simulated_necessitation(demo.closed_theory, demo.base_proof, limits);
  demo.lifted_checked = check_proof(demo.closed_theory, demo.lifted, limits);

  Theory core = Theory::of_schemas({Schema::V, Schema::Kdist});
  core.add_axiom(diagonal_axiom("p"));
  demo.blocked_theory = union_theories(close(std::move(core)), Theory::of_schemas({Schema::T}));
  Verdict vb = entails(demo.blocked_theory, Formula::negation(p), limits);
  if (vb.kind != Verdict::Kind::Entailed)
    throw std::logic_error("necessitation demo: the weakened theory should entail ~p");
  demo.blocked_goal_proof = std::move(*vb.proof);
  try {
    simulated_necessitation(demo.blocked_theory, demo.blocked_goal_proof, limits);
    throw std::logic_error("necessitation demo: the lift should have been blocked");
  } catch (const PreconditionError& e) {
    demo.blocked_error = e.what();
  }
  return demo;
}

SoundnessSample certificate_soundness_sample(const Certificate& cert, std::size_t trials,
                                             std::uint64_t seed, const SearchLimits& limits) {
  SoundnessSample out;
  const Theory base = cert.denoted_theory();
  const GenericityMode mode = cert.mode();
  FormulaGen gen({}, seed);
  SearchLimits qlimits = limits;
  qlimits.rounds = 0;  // membership, validity and recipe routes already decide the typical query
  qlimits.max_candidates = std::min<std::size_t>(qlimits.max_candidates, 16);
  qlimits.enable_lifting = false;  // undecided queries count as unknowns, never violations

  for (std::size_t trial = 0; trial < trials; ++trial) {
    ++out.trials;
    std::vector<Formula> extra;
    const unsigned n = 1 + gen.uniform(3);
    for (unsigned j = 0; j < n; ++j) extra.push_back(gen.next());
    Theory ext;
    if (base.is_deductive_closure()) {
      // extend the wrapped base; the wrapper's members are its consequences
      Theory inner = union_theories(base.deductive_base(), Theory::of_axioms(extra));
      if (mode == GenericityMode::ClosedGeneric)
        inner = close(union_theories(inner, Theory::of_schemas({Schema::V, Schema::Kdist})));
      ext = Theory::deductive_closure(std::move(inner));
    } else {
      ext = union_theories(base, Theory::of_axioms(extra));
      if (mode == GenericityMode::ClosedGeneric) ext = close(ext);
    }

    AtomSet s;
    switch (gen.uniform(4)) {
      case 0: s = AtomSet::none(); break;
      case 1: s = AtomSet::of({gen.chance(1, 2) ? "p" : "q"}); break;
      case 2: s = AtomSet::of({"p", "q", "r"}); break;
      default: s = AtomSet::all(); break;
    }

    Theory query_theory = ext.is_deductive_closure() ? ext.deductive_base() : ext;
    Model m = derived_model(query_theory, s, qlimits);
    std::vector<Formula> seeds = extra;
    seeds.push_back(Formula::atom("p"));
    const std::vector<Formula> cands = default_candidates(base, seeds, 1);
    const std::vector<Formula> instances = enumerate_instances(base, cands, 1);
    // a handful of sampled members per trial keeps the suite fast
    for (unsigned pick = 0; pick < 5 && !instances.empty(); ++pick) {
      const Formula& inst = instances[gen.uniform(instances.size())];
      Ternary v = m.eval(inst);
      if (v == Ternary::Unknown && is_valid(inst)) v = Ternary::True;
      ++out.instances_checked;
      if (v == Ternary::False) {
        ++out.violations;
        if (!out.first_violation) out.first_violation = inst;
      } else if (v == Ternary::Unknown) {
        ++out.unknowns;
      }
    }
  }
  return out;
}

}  // namespace mwb
