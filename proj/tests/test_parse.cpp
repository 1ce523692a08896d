#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwb/generate.hpp"
#include "mwb/parse.hpp"

using namespace mwb;

namespace {
Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }
Formula r() { return Formula::atom("r"); }
}  // namespace

TEST_CASE("iff expands to both implications") {
  const Formula knp = Formula::know(Formula::negation(p()));
  CHECK(parse("p <-> K(~p)") ==
        Formula::conjunction(Formula::implication(p(), knp), Formula::implication(knp, p())));
}

TEST_CASE("K is a tight right-associative prefix") {
  CHECK(parse("K K p") == Formula::know(Formula::know(p())));
  CHECK(parse("KKp") == Formula::know(Formula::know(p())));
  CHECK(parse("K p -> p") == Formula::implication(Formula::know(p()), p()));
  CHECK(parse("K~p") == Formula::know(Formula::negation(p())));
  CHECK(parse("~Kp") == Formula::negation(Formula::know(p())));
}

TEST_CASE("conditionals nest to the right") {
  CHECK(parse("K(p -> q) -> Kp -> Kq") ==
        Formula::implication(
            Formula::know(Formula::implication(p(), q())),
            Formula::implication(Formula::know(p()), Formula::know(q()))));
  CHECK(parse("p -> q -> r") == Formula::implication(p(), Formula::implication(q(), r())));
}

TEST_CASE("precedence and parentheses") {
  CHECK(parse("p & q | r") == Formula::disjunction(Formula::conjunction(p(), q()), r()));
  CHECK(parse("p & (q | r)") == Formula::conjunction(p(), Formula::disjunction(q(), r())));
  CHECK(parse("(p -> q) -> r") == Formula::implication(Formula::implication(p(), q()), r()));
  CHECK(parse("p | q | r") == Formula::disjunction(Formula::disjunction(p(), q()), r()));
}

TEST_CASE("comments and whitespace") {
  CHECK(parse("p & q # trailing note") == Formula::conjunction(p(), q()));
  CHECK(parse("  p\n\t| q") == Formula::disjunction(p(), q()));
}

TEST_CASE("printing uses minimal parentheses") {
  CHECK(to_text(Formula::know(Formula::know(p()))) == "KKp");
  CHECK(to_text(Formula::implication(Formula::implication(p(), q()), r())) == "(p -> q) -> r");
  CHECK(to_text(Formula::conjunction(p(), Formula::disjunction(q(), r()))) == "p & (q | r)");
  CHECK(to_text(Formula::know(Formula::implication(p(), q()))) == "K(p -> q)");
  CHECK(to_text(Formula::negation(Formula::conjunction(p(), q()))) == "~(p & q)");
  CHECK(to_text(Formula::know(Formula::negation(p()))) == "K~p");
}

TEST_CASE("round trip: parse after print is the identity") {
  FormulaGen gen({{"p", "q", "r", "s"}, 8, 4}, 42);
  for (int i = 0; i < 3000; ++i) {
    const Formula f = gen.next();
    CHECK(parse(to_text(f)) == f);
  }
}

TEST_CASE("syntax errors carry offsets and expected tokens") {
  SUBCASE("dangling operator") {
    try {
      parse("p &");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 3);
      CHECK(!e.expected().empty());
    }
  }
  SUBCASE("unbalanced parenthesis") {
    try {
      parse("(p | q");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 6);
    }
  }
  SUBCASE("word aliases are rejected") {
    CHECK_THROWS_AS(parse("p and q"), ParseError);
    CHECK_THROWS_AS(parse("not p"), ParseError);
    CHECK_THROWS_AS(parse("p or q"), ParseError);
  }
  SUBCASE("uppercase identifiers do not exist") {
    CHECK_THROWS_AS(parse("Q"), ParseError);
    CHECK_THROWS_AS(parse("K2"), ParseError);
  }
  SUBCASE("iff does not chain") { CHECK_THROWS_AS(parse("p <-> q <-> r"), ParseError); }
  SUBCASE("empty input") { CHECK_THROWS_AS(parse(""), ParseError); }
}

TEST_CASE("atoms may embed uppercase after the first character") {
  CHECK(parse("pK") == Formula::atom("pK"));
  CHECK(parse("k0_x") == Formula::atom("k0_x"));
}
