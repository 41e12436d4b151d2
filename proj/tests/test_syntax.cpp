#include <doctest.h>

#include <random>

#include "lge/halmos.hpp"
#include "lge/model.hpp"
#include "lge/syntax.hpp"

using namespace lge;

namespace {

AlgSignature group_sig() {
    return AlgSignature({{"mul", 2}, {"inv", 1}, {"e", 0}});
}

RelSignature p_rel() {
    return RelSignature({{"P", 1}});
}

std::shared_ptr<const FiniteModel> load(const std::string& name) {
    const char* dir = std::getenv("LGE_MODELS");
    return load_model_file(std::string(dir ? dir : "models") + "/" + name + ".json", EngineCaps{});
}

// random terms/formulas over the group signature with P, for round-trip and
// semantic property tests
TermPtr random_term(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    if (depth == 0 || rng() % 3 == 0) {
        if (rng() % 4 == 0) return Term::app("e", {});
        return Term::var(vars[rng() % vars.size()]);
    }
    if (rng() % 3 == 0) return Term::app("inv", {random_term(rng, vars, depth - 1)});
    return Term::app("mul", {random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)});
}

FormulaPtr random_formula(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    if (depth == 0 || rng() % 4 == 0) {
        if (rng() % 3 == 0) return Formula::rel("P", {random_term(rng, vars, 1)});
        return Formula::equal(random_term(rng, vars, 2), random_term(rng, vars, 2));
    }
    switch (rng() % 5) {
    case 0: return Formula::lnot(random_formula(rng, vars, depth - 1));
    case 1:
        return Formula::land(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 2:
        return Formula::lor(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 3: return Formula::exists(vars[rng() % vars.size()], random_formula(rng, vars, depth - 1));
    default: return Formula::forall(vars[rng() % vars.size()], random_formula(rng, vars, depth - 1));
    }
}

} // namespace

TEST_CASE("parse_term basics") {
    AlgSignature sig = group_sig();
    TermPtr t = parse_term("x", sig);
    CHECK(t->kind() == Term::Kind::Var);
    CHECK(t->name() == "x");

    TermPtr u = parse_term("mul(x, inv(y))", sig);
    REQUIRE(u->kind() == Term::Kind::App);
    CHECK(u->name() == "mul");
    REQUIRE(u->args().size() == 2);
    CHECK(u->args()[0]->name() == "x");
    CHECK(u->args()[1]->name() == "inv");
    CHECK(u->args()[1]->args()[0]->name() == "y");

    // nullary ops are written bare
    TermPtr c = parse_term("e", sig);
    CHECK(c->kind() == Term::Kind::App);
    CHECK(c->args().empty());
}

TEST_CASE("parse_term errors carry positions") {
    AlgSignature sig = group_sig();
    CHECK_THROWS_AS(parse_term("mul(x)", sig), parse_error);
    CHECK_THROWS_AS(parse_term("mul(x,,y)", sig), parse_error);
    CHECK_THROWS_AS(parse_term("foo(x)", sig), parse_error); // unknown op used with parens
    try {
        parse_term("mul(x)", sig);
    } catch (const parse_error& e) {
        CHECK(e.position == 0);
        CHECK(std::string(e.what()).find("expects 2 arguments") != std::string::npos);
    }
}

TEST_CASE("parse_formula basics") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();

    FormulaPtr u = parse_formula("x == x", sig, rels);
    CHECK(u->kind() == Formula::Kind::Equal);

    FormulaPtr v = parse_formula("exists y. mul(y,y) == x", sig, rels);
    REQUIRE(v->kind() == Formula::Kind::Exists);
    CHECK(v->var() == "y");
    CHECK(v->child()->kind() == Formula::Kind::Equal);

    FormulaPtr w = parse_formula("forall x. P(x) | !P(x)", sig, rels);
    REQUIRE(w->kind() == Formula::Kind::Forall);
    REQUIRE(w->child()->kind() == Formula::Kind::Or);
    CHECK(w->child()->child(0)->kind() == Formula::Kind::RelAtom);
    CHECK(w->child()->child(1)->kind() == Formula::Kind::Not);
}

TEST_CASE("precedence and maximal-right quantifiers") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    // ! binds tighter than &, & tighter than |
    FormulaPtr u = parse_formula("P(x) & !P(y) | P(e)", sig, rels);
    CHECK(u->kind() == Formula::Kind::Or);
    CHECK(u->child(0)->kind() == Formula::Kind::And);
    // quantifier swallows everything to its right
    FormulaPtr v = parse_formula("P(x) & exists y. P(y) | P(x)", sig, rels);
    REQUIRE(v->kind() == Formula::Kind::And);
    REQUIRE(v->child(1)->kind() == Formula::Kind::Exists);
    CHECK(v->child(1)->child()->kind() == Formula::Kind::Or);
    CHECK_THROWS_AS(parse_formula("exists mul. P(x)", sig, rels), parse_error);
    CHECK_THROWS_AS(parse_formula("P(x) &", sig, rels), parse_error);
    CHECK_THROWS_AS(parse_formula("Q(x)", sig, rels), parse_error); // unknown relation
}

TEST_CASE("free_vars") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    CHECK(free_vars(parse_formula("x == x", sig, rels)) == std::set<std::string>{"x"});
    CHECK(free_vars(parse_formula("exists y. mul(y,y) == x", sig, rels)) == std::set<std::string>{"x"});
    CHECK(free_vars(parse_formula("forall x. P(x)", sig, rels)).empty());
}

TEST_CASE("substitution rewrites atoms") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    TermMorphism s;
    s.source = {"y"};
    s.target = {"x"};
    s.images = {parse_term("mul(x,x)", sig)};
    FormulaPtr u = parse_formula("P(y)", sig, rels);
    FormulaPtr moved = substitute(s, u);
    CHECK(print_formula(moved) == "P(mul(x, x))");

    // equalities go through term substitution on both sides
    FormulaPtr eq = parse_formula("y == inv(y)", sig, rels);
    CHECK(print_formula(substitute(s, eq)) == "mul(x, x) == inv(mul(x, x))");
}

TEST_CASE("identity substitution is the identity") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    TermMorphism id = TermMorphism::identity({"x", "y"});
    FormulaPtr u = parse_formula("exists z. mul(x,z) == y & P(z)", sig, rels);
    CHECK(formula_equal(substitute(id, u), u));
}

TEST_CASE("substitution renames captured binders deterministically") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    TermMorphism s;
    s.source = {"x"};
    s.target = {"y"};
    s.images = {Term::var("y")};
    FormulaPtr u = parse_formula("exists y. y == x", sig, rels);
    FormulaPtr moved = substitute(s, u);
    REQUIRE(moved->kind() == Formula::Kind::Exists);
    CHECK(moved->var() == "y_1");
    CHECK(print_formula(moved) == "exists y_1. y_1 == y");

    // semantic check on a 2-element model
    auto z2 = load("z2");
    DefSet lhs = val(moved, {"y"}, *z2, EngineCaps{});
    CHECK(lhs.is_full()); // exists y'. y' == y is a tautology
    CHECK_THROWS_AS(substitute(s, parse_formula("x == z", sig, rels)), sort_error);
}

TEST_CASE("parse/print round trip on random formulas") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    std::mt19937_64 rng(42);
    std::vector<std::string> vars{"x", "y", "z"};
    for (int i = 0; i < 300; ++i) {
        FormulaPtr u = random_formula(rng, vars, 4);
        FormulaPtr back = parse_formula(print_formula(u), sig, rels);
        CHECK(formula_equal(u, back));
    }
    for (int i = 0; i < 200; ++i) {
        TermPtr t = random_term(rng, vars, 4);
        CHECK(term_equal(t, parse_term(print_term(t), sig)));
    }
}

TEST_CASE("substitution functoriality up to semantics") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    std::mt19937_64 rng(7);
    std::vector<std::string> xs{"x", "y"};
    for (int i = 0; i < 40; ++i) {
        TermMorphism s2;
        s2.source = {"p", "q"};
        s2.target = {"x", "y"};
        s2.images = {random_term(rng, xs, 2), random_term(rng, xs, 2)};
        TermMorphism s1;
        s1.source = {"x", "y"};
        s1.target = {"x", "y"};
        s1.images = {random_term(rng, xs, 2), random_term(rng, xs, 2)};
        FormulaPtr u = random_formula(rng, {"p", "q"}, 3);
        // these models have no relations
        if (print_formula(u).find('P') != std::string::npos) continue;
        FormulaPtr two_step = substitute(s1, substitute(s2, u));
        FormulaPtr one_step = substitute(compose(s1, s2), u);
        for (const auto& m : {z2, z3}) {
            CHECK(val(two_step, {"x", "y"}, *m, EngineCaps{}) ==
                  val(one_step, {"x", "y"}, *m, EngineCaps{}));
        }
    }
}

TEST_CASE("forall/exists duality under valuation") {
    auto z3 = load("z3");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 60; ++i) {
        FormulaPtr body = random_formula(rng, {"x", "y"}, 3);
        if (print_formula(body).find('P') != std::string::npos) continue;
        FormulaPtr all = Formula::forall("x", body);
        FormulaPtr dual = Formula::lnot(Formula::exists("x", Formula::lnot(body)));
        CHECK(val(all, {"x", "y"}, *z3, EngineCaps{}) == val(dual, {"x", "y"}, *z3, EngineCaps{}));
    }
}

TEST_CASE("morphism literals") {
    AlgSignature sig = group_sig();
    TermMorphism s = parse_morphism("y := mul(x,x); z := e", {"y", "z"}, {"x"}, sig);
    CHECK(print_morphism(s) == "y := mul(x, x); z := e");
    CHECK_THROWS_AS(parse_morphism("y := mul(x,x)", {"y", "z"}, {"x"}, sig), sort_error); // z missing
    CHECK_THROWS_AS(parse_morphism("y := q", {"y"}, {"x"}, sig), sort_error); // q outside target
    CHECK_THROWS_AS(parse_morphism("w := x", {"y"}, {"x"}, sig), sort_error); // w outside source
}

TEST_CASE("quantifier rank and term depth") {
    AlgSignature sig = group_sig();
    RelSignature rels = p_rel();
    FormulaPtr u = parse_formula("exists x. (forall y. x == y) & P(x)", sig, rels);
    CHECK(quantifier_rank(u) == 2);
    CHECK(max_term_depth(parse_formula("mul(x, inv(y)) == e", sig, rels)) == 2);
    CHECK(term_depth(parse_term("x", sig)) == 0);
    CHECK(term_depth(parse_term("e", sig)) == 1);
}
