#include <doctest.h>

#include <random>

#include "lge/enumerate.hpp"
#include "lge/galois.hpp"

using namespace lge;

namespace {

std::shared_ptr<const FiniteModel> load(const std::string& name) {
    const char* dir = std::getenv("LGE_MODELS");
    return load_model_file(std::string(dir ? dir : "models") + "/" + name + ".json", EngineCaps{});
}

FormulaPtr parse(const FiniteModel& m, const std::string& text) {
    return parse_formula(text, m.alg(), m.rels());
}

DefSet singleton(const FiniteModel& m, const Sort& sort, std::vector<int> values) {
    DefSet s(m, sort, EngineCaps{});
    s.insert(values);
    return s;
}

} // namespace

TEST_CASE("definable_set_of") {
    auto z2 = load("z2");
    CHECK(definable_set_of({}, {"x"}, *z2, EngineCaps{}).is_full());
    DefSet idem = definable_set_of({parse(*z2, "x == mul(x,x)")}, {"x"}, *z2, EngineCaps{});
    CHECK(idem.count() == 1);
    CHECK(idem.contains(std::vector<int>{0}));
    FormulaPtr u = parse(*z2, "x == e");
    CHECK(definable_set_of({u, Formula::lnot(u)}, {"x"}, *z2, EngineCaps{}).is_empty());
}

TEST_CASE("filter membership") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    DefSet empty = DefSet::empty(*z2, {"x"}, EngineCaps{});
    CHECK(filter_contains(empty, parse(*z2, "!(x == x)")));
    CHECK(filter_contains(DefSet::full(*z2, {"x"}, EngineCaps{}), parse(*z2, "x == x")));
    DefSet a(*z3, {"x"}, EngineCaps{});
    a.insert(std::vector<int>{1});
    a.insert(std::vector<int>{2});
    CHECK(filter_contains(a, parse(*z3, "!(x == e)")));
    CHECK(!filter_contains(a, parse(*z3, "x == e")));
    FilterHandle h{a};
    CHECK(h.contains(parse(*z3, "!(x == e)")));
}

TEST_CASE("logical closure is the orbit closure") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    DefSet one = singleton(*z3, {"x"}, {1});
    DefSet closed = logical_closure(one);
    CHECK(closed.count() == 2);
    CHECK(closed.contains(std::vector<int>{1}));
    CHECK(closed.contains(std::vector<int>{2}));
    CHECK(logical_closure(closed) == closed); // idempotence

    // trivial automorphism group: everything is closed
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        DefSet a = random_defset(rng, *z2, {"x", "y"}, EngineCaps{});
        CHECK(logical_closure(a) == a);
    }
}

TEST_CASE("closure oracle on tiny models") {
    auto z3 = load("z3");
    DefSet one = singleton(*z3, {"x"}, {1});
    CHECK(logical_closure_oracle(one, 1) == logical_closure(one));
    CHECK(logical_closure_oracle(DefSet::full(*z3, {"x"}, EngineCaps{}), 2).is_full());

    // rank-0 closure: quantifier-free definability only
    auto z2 = load("z2");
    DefSet point = singleton(*z2, {"x", "y"}, {0, 1});
    DefSet qf = logical_closure_oracle(point, 0);
    CHECK(point.is_subset_of(qf));
    CHECK(logical_closure(point).is_subset_of(qf) == (qf == logical_closure(point)));

    auto s3 = load("s3");
    DefSet big = DefSet::full(*s3, {"x"}, EngineCaps{});
    CHECK_THROWS_AS(logical_closure_oracle(big, 2), cap_error); // carrier above oracle limit
}

TEST_CASE("oracle agreement sweep on z2") {
    auto z2 = load("z2");
    for (Sort sort : {Sort{"x"}, Sort{"x", "y"}}) {
        std::uint64_t total = space_size(*z2, sort.size(), EngineCaps{});
        int rank = z2->carrier() + static_cast<int>(sort.size());
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << total); ++mask) {
            DefSet a(*z2, sort, EngineCaps{});
            for (std::uint64_t p = 0; p < total; ++p)
                if (mask & (std::uint64_t(1) << p)) a.insert(p);
            CHECK(logical_closure(a) == logical_closure_oracle(a, rank));
        }
    }
}

TEST_CASE("formula closure membership") {
    auto z2 = load("z2");
    FormulaPtr gen = parse(*z2, "x == mul(x,x)");
    CHECK(formula_closure_contains({gen}, gen, {"x"}, *z2, EngineCaps{})); // extensive
    CHECK(formula_closure_contains({gen}, parse(*z2, "x == e"), {"x"}, *z2, EngineCaps{}));
    CHECK(!formula_closure_contains({}, parse(*z2, "x == e"), {"x"}, *z2, EngineCaps{}));
}

TEST_CASE("algebraic sets") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    CHECK(algebraic_set_of({}, {"x"}, *z3, EngineCaps{}).is_full());
    DefSet idem = algebraic_set_of({parse(*z3, "mul(x,x) == x")}, {"x"}, *z3, EngineCaps{});
    CHECK(idem.count() == 1);
    CHECK(idem.contains(std::vector<int>{0}));
    DefSet diag = algebraic_set_of({parse(*z2, "x == y")}, {"x", "y"}, *z2, EngineCaps{});
    CHECK(diag.count() == 2);
    CHECK(diag.contains(std::vector<int>{0, 0}));
    CHECK(diag.contains(std::vector<int>{1, 1}));
    CHECK_THROWS_AS(algebraic_set_of({parse(*z2, "!(x == x)")}, {"x"}, *z2, EngineCaps{}),
                    engine_error);
}

TEST_CASE("congruence membership") {
    auto z2 = load("z2");
    AlgSignature sig = z2->alg();
    DefSet empty = DefSet::empty(*z2, {"x"}, EngineCaps{});
    CHECK(congruence_contains(empty, parse_term("x", sig), parse_term("e", sig))); // full congruence
    DefSet full = DefSet::full(*z2, {"x"}, EngineCaps{});
    CHECK(congruence_contains(full, parse_term("x", sig), parse_term("x", sig)));
    CHECK(congruence_contains(full, parse_term("mul(x,x)", sig), parse_term("e", sig)));
    CHECK(!congruence_contains(full, parse_term("x", sig), parse_term("e", sig)));
    CongruenceHandle h{full};
    CHECK(h.contains(parse_term("mul(x,x)", sig), parse_term("e", sig)));
}

TEST_CASE("algebraic closure of the diagonal seed") {
    auto z2 = load("z2");
    DefSet a(*z2, {"x", "y"}, EngineCaps{});
    a.insert(std::vector<int>{0, 0});
    a.insert(std::vector<int>{1, 1});
    CHECK(algebraic_closure(a) == a); // x == y pins the diagonal
}

TEST_CASE("algebraic closure of a single Z3 point is the whole line") {
    // *not* {1}: every equation between one-variable group terms over Z3
    // (k*x == l*x) that holds at x=1 forces k=l, so it holds everywhere;
    // closed sets over (x) are only {0} and the full space, and the smallest
    // one containing 1 is the full space. Cross-checked against a brute-force
    // sweep of term pairs below.
    auto z3 = load("z3");
    DefSet one = singleton(*z3, {"x"}, {1});
    DefSet closed = algebraic_closure(one);
    CHECK(closed.is_full());

    // brute force: constraints from all term-function pairs agreeing at 1
    const GeneratedSubalgebra& tf = term_function_algebra(*z3, {"x"}, EngineCaps{});
    DefSet brute = DefSet::full(*z3, {"x"}, EngineCaps{});
    for (std::size_t f = 0; f < tf.elements.size(); ++f)
        for (std::size_t g = 0; g < tf.elements.size(); ++g) {
            if (tf.elements[f][1] != tf.elements[g][1]) continue; // agree at point x=1
            for (std::uint64_t p = 0; p < 3; ++p)
                if (tf.elements[f][static_cast<std::size_t>(p)] !=
                    tf.elements[g][static_cast<std::size_t>(p)])
                    brute.erase(p);
        }
    CHECK(closed == brute);

    // algebraic sets over Z3 on one variable: only {0} and the full space
    DefSet zero = algebraic_closure(singleton(*z3, {"x"}, {0}));
    CHECK(zero.count() == 1);
    CHECK(zero.contains(std::vector<int>{0}));
}

TEST_CASE("empty-set conventions for the equational closure") {
    // A'' = (A')' with the empty A: the full congruence, whose solution set
    // consists of the points where all term functions collapse
    auto z2 = load("z2");
    DefSet empty = DefSet::empty(*z2, {"x"}, EngineCaps{});
    DefSet closed = algebraic_closure(empty);
    CHECK(closed.count() == 1); // x == e forced
    CHECK(closed.contains(std::vector<int>{0}));

    auto q3 = load("q3");
    DefSet empty_q = DefSet::empty(*q3, {"x"}, EngineCaps{});
    // the quasigroup is idempotent with no constants: every point satisfies
    // all term-pair identifications of one variable
    CHECK(algebraic_closure(empty_q).is_full());
}

TEST_CASE("logical closure refines the algebraic closure") {
    std::mt19937_64 rng(31);
    for (const char* name : {"z3", "z4", "v4"}) {
        auto m = load(name);
        for (int i = 0; i < 30; ++i) {
            DefSet a = random_defset(rng, *m, {"x"}, EngineCaps{});
            DefSet ll = logical_closure(a);
            DefSet alg = algebraic_closure(a);
            CHECK(a.is_subset_of(ll));
            CHECK(ll.is_subset_of(alg)); // more formulas, finer closure
        }
    }
}

TEST_CASE("definable lattice shapes") {
    CHECK(definable_lattice(*load("trivial"), {"x"}, EngineCaps{}).size() == 2);
    CHECK(definable_lattice(*load("z2"), {"x"}, EngineCaps{}).size() == 4);
    auto z3 = load("z3");
    DefinableLattice lat = definable_lattice(*z3, {"x"}, EngineCaps{});
    REQUIRE(lat.size() == 4);
    CHECK(lat.elements[lat.bottom()].is_empty());
    CHECK(lat.elements[lat.top()].is_full());
    REQUIRE(lat.orbits.size() == 2);
    CHECK(lat.orbits[0].count() == 1); // {0}
    CHECK(lat.orbits[1].count() == 2); // {1,2}
    CHECK(definable_lattice(*load("q3"), {"x"}, EngineCaps{}).size() == 2);

    // meets/joins stay inside and match set operations
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (std::size_t j = 0; j < lat.size(); ++j) {
            int mi = lat.meet(static_cast<int>(i), static_cast<int>(j));
            int ji = lat.join(static_cast<int>(i), static_cast<int>(j));
            CHECK(lat.elements[static_cast<std::size_t>(mi)] ==
                  lat.elements[i].intersect(lat.elements[j]));
            CHECK(lat.elements[static_cast<std::size_t>(ji)] ==
                  lat.elements[i].unite(lat.elements[j]));
        }

    // index_of rejects non-closed sets
    DefSet one = singleton(*z3, {"x"}, {1});
    CHECK(lat.index_of(one) == -1);
    CHECK(lat.index_of(logical_closure(one)) >= 0);

    EngineCaps tight;
    tight.max_lattice_orbits = 1;
    CHECK_THROWS_AS(definable_lattice(*z3, {"x"}, tight), cap_error);
}

TEST_CASE("galois laws across the two correspondences") {
    auto z3 = load("z3");
    std::mt19937_64 rng(37);
    FormulaFamilyOptions fam;
    auto family = formula_family(*z3, {"x"}, fam, EngineCaps{});
    for (int i = 0; i < 50; ++i) {
        DefSet a = random_defset(rng, *z3, {"x"}, EngineCaps{});
        DefSet b = a.unite(random_defset(rng, *z3, {"x"}, EngineCaps{}));
        // antitone on the filter side, sampled through membership
        const FormulaPtr& u = family[rng() % family.size()];
        if (filter_contains(b, u)) CHECK(filter_contains(a, u));
        // extensive + idempotent on the point side
        CHECK(a.is_subset_of(logical_closure(a)));
        CHECK(logical_closure(logical_closure(a)) == logical_closure(a));
        // every definable_set_of output is closed
        std::vector<FormulaPtr> t{family[rng() % family.size()], family[rng() % family.size()]};
        DefSet content = definable_set_of(t, {"x"}, *z3, EngineCaps{});
        CHECK(logical_closure(content) == content);
    }
}
