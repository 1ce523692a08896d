#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwb/entail.hpp"
#include "mwb/generate.hpp"
#include "mwb/model.hpp"
#include "mwb/parse.hpp"
#include "oracle.hpp"

using namespace mwb;

namespace {
Formula f(const char* text) { return parse(text); }
}  // namespace

TEST_CASE("finite tables agree with the brute-force satisfaction clauses") {
  FormulaGen gen({{"p", "q"}, 8, 3}, 314);
  for (int i = 0; i < 500; ++i) {
    const Formula x = gen.next();
    const std::vector<Formula> basics = oracle::basics_of({x});
    Assignment a;
    oracle::Table table;
    for (std::size_t k = 0; k < basics.size(); ++k) {
      const bool v = gen.chance(1, 2);
      if (gen.chance(3, 4)) {  // leave some basics to the default
        a[basics[k]] = v;
        table[basics[k]] = v;
      }
    }
    const bool dflt = gen.chance(1, 2);
    const Model m = Model::finite_table(a, dflt);
    CHECK(m.eval(x) == to_ternary(oracle::eval(x, table, dflt)));
  }
}

TEST_CASE("finite tables reject non-basic assignments") {
  Assignment a;
  a[f("p & q")] = true;
  CHECK_THROWS(Model::finite_table(a, false));
}

TEST_CASE("transparent model: K is invisible") {
  const Model n2 = Model::from_recipe(Recipe::n2());
  FormulaGen gen({{"p", "q"}, 6, 3}, 2718);
  for (int i = 0; i < 800; ++i) {
    const Formula x = gen.next();
    CHECK(n2.eval(Formula::know(x)) == n2.eval(x));
  }
  CHECK(n2.eval(f("K(K(p | ~p))")) == Ternary::True);
  CHECK(n2.eval(f("Kp")) == Ternary::False);
}

TEST_CASE("layered model evaluates K through the transparent one") {
  const Model n1 = Model::from_recipe(Recipe::n1());
  CHECK(n1.eval(f("p")) == Ternary::True);
  CHECK(n1.eval(f("Kp")) == Ternary::False);  // the transparent layer has p false
  CHECK(n1.eval(f("K~p")) == Ternary::True);
  CHECK(n1.eval(f("K(p | ~p)")) == Ternary::True);
}

TEST_CASE("K^n override recipe") {
  const Model m = Model::from_recipe(Recipe::n1_kn_override("p"));
  CHECK(m.eval(f("Kp")) == Ternary::True);
  CHECK(m.eval(f("KKKKp")) == Ternary::True);
  CHECK(m.eval(f("Kq")) == Ternary::False);
  CHECK(m.eval(f("K(p -> q)")) == Ternary::True);  // the transparent layer has p false
  CHECK(m.eval(f("K(q -> p)")) == Ternary::True);
  CHECK(m.eval(f("K(q & p)")) == Ternary::False);
  CHECK(m.eval(f("K~p")) == Ternary::True);
}

TEST_CASE("bad-formula predicate inspects only the implication spine") {
  CHECK(is_bad_formula(f("p | ~p"), "p"));
  CHECK(is_bad_formula(f("q -> p | ~p"), "p"));
  CHECK(is_bad_formula(f("q -> r -> s -> (p | ~p)"), "p"));
  CHECK(!is_bad_formula(f("q | ~q"), "p"));
  CHECK(!is_bad_formula(f("~p | p"), "p"));
  CHECK(!is_bad_formula(f("~(p | ~p)"), "p"));
  CHECK(!is_bad_formula(f("q -> (p | ~p) -> r"), "p"));
  CHECK(!is_bad_formula(f("K(p | ~p)"), "p"));
  CHECK(!is_bad_formula(f("(p | ~p) & q"), "p"));
}

TEST_CASE("bad-formula model") {
  const Model m = Model::from_recipe(Recipe::bad_formula("p"));
  CHECK(m.eval(f("K(p | ~p)")) == Ternary::False);
  CHECK(m.eval(f("K(q -> p | ~p)")) == Ternary::False);
  CHECK(m.eval(f("Kq")) == Ternary::True);
  CHECK(m.eval(f("q")) == Ternary::True);
  CHECK(m.eval(f("KK(p | ~p)")) == Ternary::True);  // K(p|~p) is a K-form, not bad
}

TEST_CASE("all-knowing model") {
  const Model m = Model::from_recipe(Recipe::all_knowing(AtomSet::of({"p"})));
  FormulaGen gen({{"p", "q"}, 5, 3}, 99);
  for (int i = 0; i < 500; ++i) CHECK(m.eval(Formula::know(gen.next())) == Ternary::True);
  CHECK(m.eval(f("p")) == Ternary::True);
  CHECK(m.eval(f("q")) == Ternary::False);
  SUBCASE("satisfies the diagonal axiom when its atom is true") {
    CHECK(m.eval(f("p <-> K~p")) == Ternary::True);
    const Model empty = Model::from_recipe(Recipe::all_knowing(AtomSet::none()));
    CHECK(empty.eval(f("p <-> K~p")) == Ternary::False);
  }
}

TEST_CASE("recursion depth limit is an error, not a value") {
  const Model n2 = Model::from_recipe(Recipe::n2());
  EvalLimits tight;
  tight.max_depth = 5;
  CHECK_THROWS_AS((void)n2.eval(kn(10, f("p")), tight), EvalError);
  CHECK(n2.eval(kn(10, f("p"))) == Ternary::False);  // default limit is ample
}

TEST_CASE("recipe names round-trip through the CLI syntax") {
  for (const Recipe& r :
       {Recipe::n2(), Recipe::n1(), Recipe::n1_kn_override("p"), Recipe::bad_formula("q"),
        Recipe::all_knowing(AtomSet::none()), Recipe::all_knowing(AtomSet::of({"p", "q"})),
        Recipe::all_knowing(AtomSet::all()),
        Recipe::all_knowing(AtomSet::complement_of({"p", "r"}))}) {
    CHECK(parse_recipe(r.name()) == r);
  }
  CHECK_THROWS(parse_recipe("nope"));
}

TEST_CASE("model files round-trip") {
  const char* text =
      "Kp = true\n"
      "K(p -> q) = false\n"
      "p = true\n"
      "default = false\n";
  const Model m = parse_model(text);
  CHECK(m.eval(f("Kp")) == Ternary::True);
  CHECK(m.eval(f("K(p -> q)")) == Ternary::False);
  CHECK(m.eval(f("q")) == Ternary::False);  // default
  const Model again = parse_model(to_text(m));
  CHECK(to_text(again) == to_text(m));
  SUBCASE("non-basic left-hand sides are rejected") {
    CHECK_THROWS(parse_model("p & q = true\n"));
    CHECK_THROWS(parse_model("p = yes\n"));
  }
}

TEST_CASE("structural satisfaction tables") {
  const Theory vkkk = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::KK});
  CHECK(recipe_satisfies_structurally(Recipe::n1(), vkkk) == Ternary::True);
  CHECK(recipe_satisfies_structurally(Recipe::n2(), vkkk) == Ternary::True);

  Theory with_p = vkkk;
  with_p.add_axiom(f("p"));
  CHECK(recipe_satisfies_structurally(Recipe::n1(), with_p) == Ternary::True);
  CHECK(recipe_satisfies_structurally(Recipe::n2(), with_p) == Ternary::False);  // atoms false

  const Theory t_schema = Theory::of_schemas({Schema::T});
  CHECK(recipe_satisfies_structurally(Recipe::n1(), t_schema) == Ternary::Unknown);
  CHECK(recipe_satisfies_structurally(Recipe::n2(), t_schema) == Ternary::True);

  SUBCASE("the K^n override cannot promise K-distribution") {
    const Theory kd = Theory::of_schemas({Schema::Kdist});
    CHECK(recipe_satisfies_structurally(Recipe::n1_kn_override("p"), kd) == Ternary::Unknown);
    CHECK(recipe_satisfies_structurally(Recipe::n1_kn_override("p"),
                                        Theory::of_schemas({Schema::V, Schema::KK})) ==
          Ternary::True);
  }
  SUBCASE("the bad-formula model cannot promise V") {
    CHECK(recipe_satisfies_structurally(Recipe::bad_formula("p"),
                                        Theory::of_schemas({Schema::V})) == Ternary::Unknown);
    CHECK(recipe_satisfies_structurally(Recipe::bad_formula("p"),
                                        close(Theory::of_schemas({Schema::Kdist, Schema::KK}))) ==
          Ternary::True);
  }
  SUBCASE("closed axioms need the transparent layer too") {
    Theory closed_p;
    closed_p.add_closed_axiom(f("p"));
    CHECK(recipe_satisfies_structurally(Recipe::n1(), closed_p) == Ternary::False);  // Kp fails
    CHECK(recipe_satisfies_structurally(Recipe::n1_kn_override("p"), closed_p) == Ternary::True);
    Theory diag_core = Theory::of_schemas({Schema::V, Schema::Kdist});
    diag_core.add_axiom(f("p <-> K~p"));
    diag_core = close(diag_core);
    CHECK(recipe_satisfies_structurally(Recipe::all_knowing(AtomSet::of({"p"})), diag_core) ==
          Ternary::True);
    CHECK(recipe_satisfies_structurally(Recipe::all_knowing(AtomSet::none()), diag_core) ==
          Ternary::False);
  }
  SUBCASE("the all-formulas theory has no model") {
    CHECK(recipe_satisfies_structurally(Recipe::n1(), Theory::all_formulas()) == Ternary::False);
  }
}

TEST_CASE("satisfies_theory reports the first falsified member") {
  SUBCASE("default-false table violates the axiom p") {
    const Model m = Model::finite_table({}, false);
    const Theory t = Theory::of_axioms({f("p")});
    const std::vector<Formula> cands = {f("p")};
    const auto rep = satisfies_theory(m, t, cands, 0);
    CHECK(rep.outcome == SatisfactionReport::Outcome::Violated);
    CHECK(*rep.witness == f("p"));
  }
  SUBCASE("layered model holds on a VKKK sample") {
    Theory t = Theory::of_schemas({Schema::V, Schema::Kdist, Schema::KK});
    t.add_axiom(f("p"));
    const std::vector<Formula> seeds = {f("p"), f("q"), f("Kp"), f("p | ~p")};
    const std::vector<Formula> cands = default_candidates(t, seeds, 2);
    const auto rep = satisfies_theory(Model::from_recipe(Recipe::n1()), t, cands, 2);
    CHECK(rep.outcome == SatisfactionReport::Outcome::HoldsOnSample);
    CHECK(rep.exact);
    CHECK(rep.instances_checked > 100);
  }
}
