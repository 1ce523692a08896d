#include "mwb/json_io.hpp"

#include "mwb/parse.hpp"

namespace mwb {

Json to_json(const Formula& f) { return to_text(f); }

Json to_json(const AtomSet& s) {
  Json j;
  j["kind"] = s.cofinite() ? "cofinite" : "finite";
  j["atoms"] = Json::array();
  for (const auto& a : s.names()) j["atoms"].push_back(a);
  return j;
}

Json to_json(const Proof& pf) {
  Json j;
  j["premises"] = Json::array();
  for (const Premise& p : pf.premises) {
    Json q;
    q["formula"] = to_text(p.formula);
    q["membership"] = p.membership;
    j["premises"].push_back(std::move(q));
  }
  j["core"] = to_text(pf.core);
  j["goal"] = to_text(pf.goal);
  return j;
}

Json to_json(const Model& m) {
  Json j;
  switch (m.kind()) {
    case Model::Kind::FiniteTable: {
      j["kind"] = "finite-table";
      Json table = Json::object();
      for (const auto& [f, v] : m.table()) table[to_text(f)] = v;
      j["assignments"] = std::move(table);
      j["default"] = m.table_default();
      break;
    }
    case Model::Kind::Recipe:
      j["kind"] = "recipe";
      j["recipe"] = m.recipe().name();
      break;
    case Model::Kind::Derived:
      j["kind"] = "derived";
      j["theory"] = describe(m.derived_theory());
      j["atoms"] = to_json(m.derived_atoms());
      break;
  }
  return j;
}

Json to_json(const SatisfactionReport& rep) {
  Json j;
  switch (rep.outcome) {
    case SatisfactionReport::Outcome::HoldsOnSample: j["outcome"] = "holds-on-sample"; break;
    case SatisfactionReport::Outcome::Violated: j["outcome"] = "violated"; break;
    case SatisfactionReport::Outcome::Unknown: j["outcome"] = "unknown"; break;
  }
  j["instances_checked"] = rep.instances_checked;
  j["unknown_count"] = rep.unknown_count;
  if (rep.witness) j["witness"] = to_text(*rep.witness);
  j["exact"] = rep.exact;
  return j;
}

Json to_json(const BoundReport& rep) {
  Json j;
  j["rounds"] = rep.rounds;
  j["candidates"] = rep.candidates;
  j["pool_size"] = rep.pool_size;
  j["note"] = rep.note;
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["kind"] = verdict_kind_name(v.kind);
  if (v.proof) j["proof"] = to_json(*v.proof);
  if (v.countermodel) j["countermodel"] = to_json(*v.countermodel);
  if (v.recipe_evidence) {
    j["recipe"] = v.recipe_evidence->witness;
    j["theory_report"] = to_json(v.recipe_evidence->theory_report);
  }
  if (v.bound_report) j["bound_report"] = to_json(*v.bound_report);
  return j;
}

Json to_json(const ConsistencyResult& r) {
  Json j;
  switch (r.kind) {
    case ConsistencyResult::Kind::Consistent: j["kind"] = "consistent"; break;
    case ConsistencyResult::Kind::Inconsistent: j["kind"] = "inconsistent"; break;
    case ConsistencyResult::Kind::Unknown: j["kind"] = "unknown"; break;
  }
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (r.witness_report) j["witness_report"] = to_json(*r.witness_report);
  if (r.proof) j["proof"] = to_json(*r.proof);
  if (r.bound_report) j["bound_report"] = to_json(*r.bound_report);
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  switch (c.kind()) {
    case Certificate::Kind::AxiomV: j["rule"] = "axiom-v"; break;
    case Certificate::Kind::AxiomK: j["rule"] = "axiom-k"; break;
    case Certificate::Kind::Union: j["rule"] = "union"; break;
    case Certificate::Kind::Closure: j["rule"] = "closure"; break;
    case Certificate::Kind::DeductiveClosure: j["rule"] = "deductive-closure"; break;
    case Certificate::Kind::NormalKripkeClosure: j["rule"] = "normal-kripke-closure"; break;
    case Certificate::Kind::ClosedGenericVKKK: j["rule"] = "closed-generic-vkkk"; break;
    case Certificate::Kind::Weaken: j["rule"] = "weaken"; break;
  }
  j["mode"] = mode_name(c.mode());
  j["theory"] = describe(c.denoted_theory());
  if (!c.children().empty()) {
    j["children"] = Json::array();
    for (const Certificate& ch : c.children()) j["children"].push_back(to_json(ch));
  }
  return j;
}

Json to_json(const Falsification& f) {
  Json j;
  j["base"] = describe(f.base);
  j["extension"] = describe(f.extension);
  j["atoms"] = to_json(f.s);
  j["violated"] = to_text(f.violated);
  j["trace"] = Json::array();
  for (const KResolution& r : f.trace) {
    Json step;
    step["k_formula"] = to_text(r.k_formula);
    step["verdict"] = to_json(r.verdict);
    j["trace"].push_back(std::move(step));
  }
  return j;
}

Json to_json(const FalsifyOutcome& o) {
  Json j;
  j["found"] = o.falsification.has_value();
  if (o.falsification) j["falsification"] = to_json(*o.falsification);
  if (!o.note.empty()) j["note"] = o.note;
  j["extensions_tried"] = o.extensions_tried;
  j["seed"] = o.seed;
  return j;
}

Json to_json(const KnowerReport& r) {
  Json j;
  j["theory"] = describe(r.theory);
  j["proof_not_p"] = to_json(r.not_p);
  j["proof_k_not_p"] = to_json(r.k_not_p);
  j["proof_p"] = to_json(r.p);
  j["proof_contradiction"] = to_json(r.contradiction);
  j["all_checked"] = r.all_checked;
  return j;
}

Json to_json(const ConsistencyDemo& d) {
  Json j;
  j["core"] = describe(d.core);
  j["full"] = describe(d.full);
  j["witness"] = to_json(d.witness);
  j["core_not_p"] = to_json(d.core_not_p);
  j["sample"] = to_json(d.sample);
  j["mode"] = mode_name(d.mode);
  return j;
}

Json to_json(const SupersetDemo& d) {
  Json j;
  j["schema"] = schema_name(d.schema);
  j["theory"] = describe(d.theory);
  j["inconsistency_proofs"] = Json::array();
  for (const Proof& pf : d.inconsistency_proofs) j["inconsistency_proofs"].push_back(to_json(pf));
  j["would_be_witness"] = to_json(d.would_be_witness);
  if (d.violated) j["violated"] = to_text(*d.violated);
  j["note"] = d.note;
  return j;
}

Json to_json(const NecessitationDemo& d) {
  Json j;
  j["closed_theory"] = describe(d.closed_theory);
  j["base_proof"] = to_json(d.base_proof);
  j["lifted"] = to_json(d.lifted);
  j["lifted_checked"] = d.lifted_checked;
  j["blocked_theory"] = describe(d.blocked_theory);
  j["blocked_goal_proof"] = to_json(d.blocked_goal_proof);
  j["blocked_error"] = d.blocked_error;
  return j;
}

Json to_json(const SoundnessSample& s) {
  Json j;
  j["trials"] = s.trials;
  j["instances_checked"] = s.instances_checked;
  j["violations"] = s.violations;
  j["unknowns"] = s.unknowns;
  if (s.first_violation) j["first_violation"] = to_text(*s.first_violation);
  return j;
}

Json ast_json(const Formula& f) {
  Json j;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      j["op"] = "atom";
      j["name"] = f.atom_name();
      break;
    case Formula::Kind::Not:
      j["op"] = "not";
      j["arg"] = ast_json(f.child());
      break;
    case Formula::Kind::Know:
      j["op"] = "K";
      j["arg"] = ast_json(f.child());
      break;
    case Formula::Kind::And:
      j["op"] = "and";
      j["lhs"] = ast_json(f.lhs());
      j["rhs"] = ast_json(f.rhs());
      break;
    case Formula::Kind::Or:
      j["op"] = "or";
      j["lhs"] = ast_json(f.lhs());
      j["rhs"] = ast_json(f.rhs());
      break;
    case Formula::Kind::Implies:
      j["op"] = "implies";
      j["lhs"] = ast_json(f.lhs());
      j["rhs"] = ast_json(f.rhs());
      break;
  }
  return j;
}

Json versioned(Json j) {
  j["schema_version"] = kSchemaVersion;
  return j;
}

Proof proof_from_json(const Json& j) {
  Proof pf;
  for (const Json& q : j.at("premises")) {
    pf.premises.push_back(
        {parse(q.at("formula").get<std::string>()), q.value("membership", std::string{})});
  }
  pf.core = parse(j.at("core").get<std::string>());
  pf.goal = parse(j.at("goal").get<std::string>());
  return pf;
}

}  // namespace mwb
