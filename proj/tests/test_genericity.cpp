#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwb/genericity.hpp"
#include "mwb/parse.hpp"

using namespace mwb;

namespace {
Formula f(const char* text) { return parse(text); }
Theory schemas(std::set<Schema> s) { return Theory::of_schemas(std::move(s)); }
}  // namespace

TEST_CASE("certificate algebra: modes and denotations") {
  const Certificate v = Certificate::axiom_v();
  const Certificate k = Certificate::axiom_k();
  CHECK(v.mode() == GenericityMode::Generic);
  CHECK(v.denoted_theory() == schemas({Schema::V}));

  const Certificate vk = Certificate::union_of({v, k});
  CHECK(vk.mode() == GenericityMode::Generic);
  CHECK(vk.denoted_theory() == schemas({Schema::V, Schema::Kdist}));

  const Certificate vkkk = Certificate::closed_generic_vkkk();
  CHECK(vkkk.mode() == GenericityMode::ClosedGeneric);
  CHECK(Certificate::union_of({v, vkkk}).mode() == GenericityMode::ClosedGeneric);

  CHECK(Certificate::closure(vk).mode() == GenericityMode::Generic);
  CHECK(Certificate::closure(vk).denoted_theory() == close(schemas({Schema::V, Schema::Kdist})));
  CHECK(Certificate::deductive_closure(vk).denoted_theory() ==
        Theory::deductive_closure(schemas({Schema::V, Schema::Kdist})));

  SUBCASE("weaken applies to generic children only") {
    CHECK(Certificate::weaken(vk).mode() == GenericityMode::ClosedGeneric);
    CHECK_THROWS(Certificate::weaken(Certificate::closed_generic_vkkk()));
  }
  SUBCASE("normal Kripke closure denotes the wrapped closed V,K extension") {
    const Certificate nkc = Certificate::normal_kripke_closure(v);
    const Theory expect = Theory::deductive_closure(
        close(union_theories(schemas({Schema::V}), schemas({Schema::V, Schema::Kdist}))));
    CHECK(nkc.denoted_theory() == expect);
    CHECK(nkc.mode() == GenericityMode::Generic);
  }
}

TEST_CASE("certify derives the positive cases") {
  CHECK(certify(schemas({Schema::V}), GenericityMode::Generic).certificate.has_value());
  CHECK(certify(schemas({Schema::Kdist}), GenericityMode::Generic).certificate.has_value());
  const auto vk = certify(schemas({Schema::V, Schema::Kdist}), GenericityMode::Generic);
  REQUIRE(vk.certificate.has_value());
  CHECK(vk.certificate->kind() == Certificate::Kind::Union);

  const auto vkkk =
      certify(schemas({Schema::V, Schema::Kdist, Schema::KK}), GenericityMode::ClosedGeneric);
  REQUIRE(vkkk.certificate.has_value());
  CHECK(vkkk.certificate->kind() == Certificate::Kind::ClosedGenericVKKK);

  SUBCASE("closed-generic requests on generic theories go through weaken") {
    const auto r = certify(schemas({Schema::V}), GenericityMode::ClosedGeneric);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->kind() == Certificate::Kind::Weaken);
  }
  SUBCASE("closed parts certify through closure") {
    const auto r = certify(close(schemas({Schema::V, Schema::Kdist})), GenericityMode::Generic);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->denoted_theory() == close(schemas({Schema::V, Schema::Kdist})));
  }
  SUBCASE("deductive wrappers certify through the wrapped base") {
    const auto r = certify(Theory::deductive_closure(schemas({Schema::V})), GenericityMode::Generic);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->kind() == Certificate::Kind::DeductiveClosure);
  }
  SUBCASE("the empty theory is trivially generic") {
    CHECK(certify(Theory{}, GenericityMode::Generic).certificate.has_value());
  }
}

TEST_CASE("certify never succeeds on the negative cases") {
  for (GenericityMode mode : {GenericityMode::Generic, GenericityMode::ClosedGeneric}) {
    CHECK(!certify(schemas({Schema::T}), mode).certificate.has_value());
    CHECK(!certify(schemas({Schema::Five}), mode).certificate.has_value());
    CHECK(!certify(schemas({Schema::V, Schema::Kdist, Schema::T}), mode).certificate.has_value());
    CHECK(!certify(schemas({Schema::V, Schema::Kdist, Schema::T, Schema::KK}), mode)
               .certificate.has_value());  // the S4 shape
    CHECK(!certify(schemas({Schema::KK}), mode).certificate.has_value());
  }
  CHECK(!certify(schemas({Schema::V, Schema::Kdist, Schema::KK}), GenericityMode::Generic)
             .certificate.has_value());
  CHECK(!certify(Theory::of_axioms({f("p")}), GenericityMode::Generic).certificate.has_value());
  CHECK(!certify(Theory::all_formulas(), GenericityMode::Generic).certificate.has_value());
}

TEST_CASE("falsify reproduces the layered-model refutation") {
  FalsifyStrategy fast;
  fast.random_budget = 0;
  const FalsifyOutcome out =
      falsify(schemas({Schema::V, Schema::Kdist, Schema::KK}), GenericityMode::Generic, fast);
  REQUIRE(out.falsification.has_value());
  CHECK(out.falsification->violated == f("Kp -> KKp"));
  CHECK(out.falsification->extension.open_part().axioms == std::vector<Formula>{f("p")});
  CHECK(verify_falsification(*out.falsification));
}

TEST_CASE("corollary coverage: dropped-union variants still fail") {
  FalsifyStrategy fast;
  fast.random_budget = 0;
  SUBCASE("V u KK is not generic") {
    const auto out = falsify(schemas({Schema::V, Schema::KK}), GenericityMode::Generic, fast);
    REQUIRE(out.falsification.has_value());
    CHECK(verify_falsification(*out.falsification));
  }
  SUBCASE("K u KK is not generic") {
    const auto out = falsify(schemas({Schema::Kdist, Schema::KK}), GenericityMode::Generic, fast);
    REQUIRE(out.falsification.has_value());
    CHECK(verify_falsification(*out.falsification));
  }
  SUBCASE("KK alone is not closed generic") {
    const auto out = falsify(schemas({Schema::KK}), GenericityMode::ClosedGeneric, fast);
    REQUIRE(out.falsification.has_value());
    CHECK(verify_falsification(*out.falsification));
  }
}

TEST_CASE("finite axiom theories are falsified through any extension") {
  FalsifyStrategy fast;
  fast.random_budget = 0;
  const auto out = falsify(Theory::of_axioms({parse("q")}), GenericityMode::Generic, fast);
  REQUIRE(out.falsification.has_value());
  CHECK(out.falsification->violated == parse("q"));
  CHECK(verify_falsification(*out.falsification));
}

TEST_CASE("falsify is honest about not finding anything") {
  FalsifyStrategy tiny;
  tiny.random_budget = 2;
  tiny.limits.rounds = 2;
  const auto out = falsify(schemas({Schema::V}), GenericityMode::Generic, tiny);
  CHECK(!out.falsification.has_value());
  CHECK(!out.note.empty());
}

TEST_CASE("verify_falsification rejects corrupted witnesses") {
  FalsifyStrategy fast;
  fast.random_budget = 0;
  auto out = falsify(schemas({Schema::V, Schema::Kdist, Schema::KK}), GenericityMode::Generic, fast);
  REQUIRE(out.falsification.has_value());
  SUBCASE("violated formula outside the base") {
    Falsification bad = *out.falsification;
    bad.violated = f("Kp -> p");
    CHECK(!verify_falsification(bad));
  }
  SUBCASE("extension that does not include the base") {
    Falsification bad = *out.falsification;
    bad.extension = Theory::of_axioms({f("p")});
    CHECK(!verify_falsification(bad));
  }
  SUBCASE("member that the model actually satisfies") {
    Falsification bad = *out.falsification;
    bad.violated = f("K(p -> p) -> Kp -> Kp");  // a K instance, true everywhere
    CHECK(!verify_falsification(bad));
  }
}

TEST_CASE("knower paradox report") {
  const KnowerReport rep = knower_paradox();
  CHECK(rep.all_checked);
  CHECK(rep.not_p.goal == f("~p"));
  CHECK(rep.k_not_p.goal == f("K~p"));
  CHECK(rep.p.goal == f("p"));
  // the engine's ~p proof is exactly factivity plus the diagonal
  CHECK(rep.not_p.premises.size() == 2);
  CHECK(rep.not_p.premises[0].formula == f("K~p -> ~p"));
  CHECK(rep.not_p.premises[1].formula == f("p <-> K~p"));
}

TEST_CASE("knower consistency demo") {
  const Certificate vk =
      Certificate::union_of({Certificate::axiom_v(), Certificate::axiom_k()});
  SUBCASE("the diagonal atom must stay out of the atom set") {
    CHECK_THROWS_AS((void)knower_consistency(vk, AtomSet::of({"p"})), PreconditionError);
  }
  SUBCASE("first-theorem shape with V u K") {
    SearchLimits limits;
    limits.rounds = 2;
    const ConsistencyDemo demo = knower_consistency(vk, AtomSet::none(), "p", limits);
    CHECK(demo.mode == GenericityMode::Generic);
    CHECK(demo.core_not_p.kind == Verdict::Kind::RefutedByRecipe);
    CHECK(demo.core_not_p.recipe_evidence->witness == "allknowing:p");
    CHECK(demo.core_not_p.recipe_evidence->theory_report.exact);
    CHECK(demo.sample.outcome == SatisfactionReport::Outcome::HoldsOnSample);
    CHECK(demo.sample.unknown_count == 0);
  }
  SUBCASE("second-theorem shape with V u K u KK") {
    SearchLimits limits;
    limits.rounds = 2;
    const ConsistencyDemo demo =
        knower_consistency(Certificate::closed_generic_vkkk(), AtomSet::none(), "p", limits);
    CHECK(demo.mode == GenericityMode::ClosedGeneric);
    CHECK(demo.sample.outcome == SatisfactionReport::Outcome::HoldsOnSample);
    CHECK(demo.sample.unknown_count == 0);
  }
}

TEST_CASE("superset demos") {
  SUBCASE("factivity") {
    const SupersetDemo demo = no_superset_demo(Schema::T);
    CHECK(demo.inconsistency_proofs.size() == 4);
    CHECK(demo.would_be_witness.outcome == SatisfactionReport::Outcome::Violated);
  }
  SUBCASE("negative introspection") {
    const SupersetDemo demo = no_superset_demo(Schema::Five);
    REQUIRE(demo.inconsistency_proofs.size() == 1);
    CHECK(demo.inconsistency_proofs[0].goal == f("p & ~p"));
    CHECK(check_proof(demo.theory, demo.inconsistency_proofs[0]));
    CHECK(demo.would_be_witness.outcome == SatisfactionReport::Outcome::Violated);
  }
  SUBCASE("only T and 5 have demos") { CHECK_THROWS(no_superset_demo(Schema::KK)); }
}

TEST_CASE("the five-variant paradox needs the factivity part") {
  // without the unclosed T layer the theory has an all-knowing model
  Theory core = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::Five});
  core.add_axiom(f("p <-> K~p"));
  core = close(std::move(core));
  CHECK(recipe_satisfies_structurally(Recipe::all_knowing(AtomSet::of({"p"})), core) ==
        Ternary::True);
  const ConsistencyResult r = is_consistent(core);
  CHECK(r.kind == ConsistencyResult::Kind::Consistent);
  CHECK(r.witness_report->exact);
}

TEST_CASE("necessitation demo") {
  const NecessitationDemo demo = necessitation_demo();
  CHECK(demo.lifted_checked);
  CHECK(demo.lifted.goal == f("K(p -> p)"));
  CHECK(!demo.blocked_error.empty());
  CHECK(demo.blocked_goal_proof.goal == f("~p"));
}

TEST_CASE("sampled certificate soundness, small run") {
  SearchLimits limits;
  limits.rounds = 2;
  const Certificate vk =
      Certificate::union_of({Certificate::axiom_v(), Certificate::axiom_k()});
  const SoundnessSample s = certificate_soundness_sample(vk, 40, 17, limits);
  CHECK(s.trials == 40);
  CHECK(s.violations == 0);
  const SoundnessSample s2 =
      certificate_soundness_sample(Certificate::closed_generic_vkkk(), 40, 18, limits);
  CHECK(s2.violations == 0);
  SUBCASE("wrapper certificates sample through their base") {
    const SoundnessSample s3 = certificate_soundness_sample(
        Certificate::normal_kripke_closure(Certificate::axiom_v()), 20, 19, limits);
    CHECK(s3.trials == 20);
    CHECK(s3.violations == 0);
    CHECK(s3.instances_checked > 0);
    const SoundnessSample s4 = certificate_soundness_sample(
        Certificate::deductive_closure(Certificate::weaken(vk)), 20, 21, limits);
    CHECK(s4.violations == 0);
  }
}
