#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "presb/error.hpp"
#include "presb/formula.hpp"

using namespace presb;

TEST_CASE("division axiom parses to the expected tree") {
  auto f = parse_formula("A x. E y. 2*y = x or 2*y + 1 = x");
  REQUIRE(f->kind == Formula::Kind::Forall);
  CHECK(f->var == "x");
  auto e = f->args[0];
  REQUIRE(e->kind == Formula::Kind::Exists);
  auto body = e->args[0];
  REQUIRE(body->kind == Formula::Kind::Or);
  CHECK(body->args.size() == 2);
  CHECK(body->args[0]->kind == Formula::Kind::Atom);
  CHECK(print(f) == "A x. E y. 2*y = x or 2*y + 1 = x");
}

TEST_CASE("atoms of every shape") {
  auto d = parse_formula("3 | x + 2");
  CHECK(d->kind == Formula::Kind::Divides);
  CHECK(d->modulus == 3);
  CHECK(parse_formula("x <* y")->rel == Rel::StarLt);
  CHECK(parse_formula("x =* y")->rel == Rel::StarEq);
  CHECK(parse_formula("fin(x)")->kind == Formula::Kind::Fin);
  CHECK(parse_formula("E x. 0 < x & x < 1")->args[0]->kind == Formula::Kind::And);
  CHECK(parse_formula("(x < y)")->kind == Formula::Kind::Atom);
  CHECK(parse_formula("(x) < y")->kind == Formula::Kind::Atom);
  CHECK(parse_formula("((x < y) or true)")->kind == Formula::Kind::Or);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_formula("x < ");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_formula("E . x = x"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("0 | x"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("x < y )"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("x # y"), SyntaxError);
}

TEST_CASE("binders clashing with free variables are renamed") {
  auto f = parse_formula("x > 0 & E x. x < 0");
  CHECK(free_variables(f) == std::set<std::string>{"x"});
  CHECK(f->args[1]->var != "x");
  auto g = parse_formula("E x. E x. x = 0");
  CHECK(g->var != g->args[0]->var);
}

TEST_CASE("printing round trips on random sentences") {
  oracle::SentenceGen gen(77, 3, 4, 6);
  for (int i = 0; i < 300; ++i) {
    auto f = gen.sentence();
    auto text = print(f);
    auto back = parse_formula(text);
    CHECK_MESSAGE(equal(back, f), text);
    CHECK(print(back) == text);
  }
}

TEST_CASE("printing keeps negative literals and nested scalings apart") {
  for (auto s : {"x - (-3) = 0", "-(x + y) < 2", "2*(3*x) = y", "x - (y - z) > 0", "~(x < 0 & y < 0)",
                 "(E x. x = y) & y = 0", "~E x. x < 0", "-x = 2*(-y)"}) {
    auto f = parse_formula(s);
    CHECK(equal(parse_formula(print(f)), f));
  }
}

TEST_CASE("structural queries") {
  auto f = parse_formula("A x. E y. x < y & fin(z)");
  CHECK(quantifier_depth(f) == 2);
  CHECK_FALSE(is_star_free(f));
  CHECK_FALSE(is_quantifier_free(f));
  CHECK(free_variables(f) == std::set<std::string>{"z"});
}

TEST_CASE("linear terms") {
  auto t = linearize(parse_term("3*(x - 2*y) + y - 4"));
  CHECK(t.coeff("x") == 3);
  CHECK(t.coeff("y") == -5);
  CHECK(t.constant == -4);
  auto s = substitute(t, "x", linearize(parse_term("y + 1")));
  CHECK(s.coeff("y") == -2);
  CHECK(s.constant == -1);
  CHECK(print(to_term(linearize(parse_term("x - x")))) == "0");
  CHECK(linearize(to_term(t)) == t);
}
