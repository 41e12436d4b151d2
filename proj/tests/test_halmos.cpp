#include <doctest.h>

#include <random>

#include "lge/enumerate.hpp"
#include "lge/halmos.hpp"

using namespace lge;

namespace {

std::shared_ptr<const FiniteModel> load(const std::string& name) {
    const char* dir = std::getenv("LGE_MODELS");
    return load_model_file(std::string(dir ? dir : "models") + "/" + name + ".json", EngineCaps{});
}

FormulaPtr parse(const FiniteModel& m, const std::string& text) {
    return parse_formula(text, m.alg(), m.rels());
}

// definitional cylindrification: point-pair scan straight off the definition
DefSet cylindrify_scan(const DefSet& a, const std::string& x) {
    int pos = sort_position(a.sort(), x);
    REQUIRE(pos >= 0);
    const FiniteModel& m = a.model();
    DefSet out(m, a.sort(), a.caps());
    std::uint64_t total = a.space_size();
    for (std::uint64_t i = 0; i < total; ++i) {
        std::vector<int> mu = point_values(i, a.sort().size(), m.carrier());
        for (std::uint64_t j = 0; j < total && !out.contains(i); ++j) {
            if (!a.contains(j)) continue;
            std::vector<int> nu = point_values(j, a.sort().size(), m.carrier());
            bool agrees = true;
            for (std::size_t k = 0; k < mu.size(); ++k)
                if (static_cast<int>(k) != pos && mu[k] != nu[k]) agrees = false;
            if (agrees) out.insert(i);
        }
    }
    return out;
}

} // namespace

TEST_CASE("boolean operations and tagging") {
    auto z2 = load("z2");
    DefSet a = DefSet::empty(*z2, {"x"}, EngineCaps{});
    DefSet zero = DefSet::empty(*z2, {"x"}, EngineCaps{});
    a.insert(std::vector<int>{0});
    CHECK(a.unite(zero) == a);
    CHECK(a.intersect(a.complement()).is_empty());
    DefSet b = DefSet::empty(*z2, {"x"}, EngineCaps{});
    b.insert(std::vector<int>{1});
    CHECK(a.unite(b).is_full());

    DefSet other_sort = DefSet::empty(*z2, {"y"}, EngineCaps{});
    CHECK_THROWS_AS(a.unite(other_sort), sort_error);
    auto z2_again = load("z2");
    DefSet other_model = DefSet::empty(*z2_again, {"x"}, EngineCaps{});
    CHECK_THROWS_AS(a.unite(other_model), sort_error);
}

TEST_CASE("cylindrification definition cases") {
    auto z2 = load("z2");
    Sort xy{"x", "y"};
    DefSet empty = DefSet::empty(*z2, xy, EngineCaps{});
    CHECK(cylindrify(empty, "x").is_empty()); // exists 0 = 0
    DefSet full = DefSet::full(*z2, xy, EngineCaps{});
    CHECK(cylindrify(full, "y").is_full());

    DefSet a = DefSet::empty(*z2, xy, EngineCaps{});
    a.insert(std::vector<int>{0, 1});
    DefSet smeared = cylindrify(a, "y");
    CHECK(smeared.count() == 2);
    CHECK(smeared.contains(std::vector<int>{0, 0}));
    CHECK(smeared.contains(std::vector<int>{0, 1}));
    CHECK_THROWS_AS(cylindrify(a, "q"), sort_error);
}

TEST_CASE("cylindrification matches the definitional scan") {
    auto z3 = load("z3");
    Sort xyz{"x", "y", "z"};
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        DefSet a = random_defset(rng, *z3, xyz, EngineCaps{});
        for (const auto& v : xyz) CHECK(cylindrify(a, v) == cylindrify_scan(a, v));
    }
}

TEST_CASE("constant sets") {
    auto z2 = load("z2");
    auto z2p = load("z2p");
    AlgSignature sig = z2->alg();
    CHECK(constant_set("==", {parse_term("x", sig), parse_term("x", sig)}, {"x"}, *z2, EngineCaps{})
              .is_full());
    DefSet p = constant_set("P", {parse_term("x", sig)}, {"x"}, *z2p, EngineCaps{});
    CHECK(p.count() == 1);
    CHECK(p.contains(std::vector<int>{1}));
    DefSet sq =
        constant_set("==", {parse_term("mul(x,x)", sig), parse_term("e", sig)}, {"x"}, *z2, EngineCaps{});
    CHECK(sq.is_full()); // both elements square to e in Z2
    CHECK_THROWS_AS(constant_set("P", {parse_term("x", sig)}, {"x"}, *z2, EngineCaps{}), sort_error);
    CHECK_THROWS_AS(constant_set("==", {parse_term("y", sig), parse_term("y", sig)}, {"x"}, *z2,
                                 EngineCaps{}),
                    sort_error);
}

TEST_CASE("valuation spec cases") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    CHECK(val(parse(*z2, "x == x"), {"x"}, *z2, EngineCaps{}).is_full());

    DefSet sq2 = val(parse(*z2, "exists y. mul(y,y) == x"), {"x"}, *z2, EngineCaps{});
    CHECK(sq2.count() == 1);
    CHECK(sq2.contains(std::vector<int>{0}));

    DefSet sq3 = val(parse(*z3, "exists y. mul(y,y) == x"), {"x"}, *z3, EngineCaps{});
    CHECK(sq3.is_full()); // squares cover Z3

    CHECK_THROWS_AS(val(parse(*z3, "x == y"), {"x"}, *z3, EngineCaps{}), sort_error);
}

TEST_CASE("extended-sort evaluation is sound") {
    // evaluating with the bound variable outside the sort agrees with the
    // evaluation in the extended sort followed by restriction
    auto z3 = load("z3");
    FormulaPtr u = parse(*z3, "exists y. mul(y,y) == x");
    DefSet narrow = val(u, {"x"}, *z3, EngineCaps{});
    DefSet wide = val(u->child(), {"x", "y"}, *z3, EngineCaps{});
    DefSet smeared = cylindrify(wide, "y");
    for (int a = 0; a < 3; ++a)
        CHECK(narrow.contains(std::vector<int>{a}) == smeared.contains(std::vector<int>{a, 0}));

    // quantifying a variable that never occurs is vacuous
    CHECK(val(parse(*z3, "exists q. x == e"), {"x"}, *z3, EngineCaps{}) ==
          val(parse(*z3, "x == e"), {"x"}, *z3, EngineCaps{}));
}

TEST_CASE("satisfaction and ultrafilter totality") {
    auto z2 = load("z2");
    auto z2p = load("z2p");
    Point one{{"x"}, {1}};
    CHECK(satisfies(one, parse(*z2, "mul(x,x) == e"), *z2, EngineCaps{}));
    CHECK(!satisfies(Point{{"x"}, {0}}, parse(*z2p, "P(x)"), *z2p, EngineCaps{}));

    std::mt19937_64 rng(3);
    FormulaFamilyOptions fam;
    auto family = formula_family(*z2p, {"x"}, fam, EngineCaps{});
    for (int i = 0; i < 50; ++i) {
        const FormulaPtr& u = family[rng() % family.size()];
        Point p{{"x"}, {static_cast<int>(rng() % 2)}};
        bool pos = satisfies(p, u, *z2p, EngineCaps{});
        bool neg = satisfies(p, Formula::lnot(u), *z2p, EngineCaps{});
        CHECK(pos != neg);
    }
}

TEST_CASE("theories") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    auto s3 = load("s3");
    CHECK(theory_contains(parse(*z2, "x == x"), {"x"}, *z2, EngineCaps{}));
    FormulaPtr comm = parse(*z2, "forall x. forall y. mul(x,y) == mul(y,x)");
    CHECK(theory_contains(comm, {}, *z2, EngineCaps{}));
    CHECK(theory_contains(comm, {}, *z3, EngineCaps{}));
    CHECK(!theory_contains(comm, {}, *s3, EngineCaps{}));
    CHECK(!theory_contains(parse(*z3, "x == e"), {"x"}, *z3, EngineCaps{}));
}

TEST_CASE("val is a boolean homomorphism") {
    auto z3 = load("z3");
    std::mt19937_64 rng(17);
    FormulaFamilyOptions fam;
    auto family = formula_family(*z3, {"x", "y"}, fam, EngineCaps{});
    Sort xy{"x", "y"};
    for (int i = 0; i < 40; ++i) {
        const FormulaPtr& u = family[rng() % family.size()];
        const FormulaPtr& v = family[rng() % family.size()];
        DefSet vu = val(u, xy, *z3, EngineCaps{});
        DefSet vv = val(v, xy, *z3, EngineCaps{});
        CHECK(val(Formula::lnot(u), xy, *z3, EngineCaps{}) == vu.complement());
        CHECK(val(Formula::land(u, v), xy, *z3, EngineCaps{}) == vu.intersect(vv));
        CHECK(val(Formula::lor(u, v), xy, *z3, EngineCaps{}) == vu.unite(vv));
        CHECK(val(Formula::exists("x", u), xy, *z3, EngineCaps{}) == cylindrify(vu, "x"));
    }
}

TEST_CASE("axiom suite passes on the corpus") {
    AxiomCheckOptions opts;
    opts.instances = 60;
    for (const char* name : {"z2", "z3", "v4", "q3", "z2p"}) {
        auto m = load(name);
        for (const auto& r : check_halmos_axioms(*m, {"x", "y"}, opts, EngineCaps{})) {
            INFO(name << ": " << r.axiom << " " << r.counterexample);
            CHECK(r.failures == 0);
        }
    }
}
