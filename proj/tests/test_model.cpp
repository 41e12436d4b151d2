#include <doctest.h>

#include <nlohmann/json.hpp>

#include "lge/model.hpp"

using namespace lge;

namespace {

std::shared_ptr<const FiniteModel> load(const std::string& name) {
    const char* dir = std::getenv("LGE_MODELS");
    return load_model_file(std::string(dir ? dir : "models") + "/" + name + ".json", EngineCaps{});
}

FiniteModel from_text(const std::string& text) {
    return FiniteModel::from_json(nlohmann::json::parse(text), "inline");
}

} // namespace

TEST_CASE("loader accepts the whole corpus") {
    for (const char* name : {"trivial", "z2", "z3", "z4", "v4", "s3", "q3", "z2p", "z3r"}) {
        auto m = load(name);
        CHECK(m->carrier() >= 1);
        CHECK(m->name() == name);
    }
    auto z2 = load("z2");
    CHECK(z2->carrier() == 2);
    int mul = z2->alg().index_of("mul");
    CHECK(z2->op_value(mul, {1, 1}) == 0);
    CHECK(z2->op_value(mul, {0, 1}) == 1);
    auto z2p = load("z2p");
    int p = z2p->rels().index_of("P");
    CHECK(z2p->rel_contains(p, {1}));
    CHECK(!z2p->rel_contains(p, {0}));
}

TEST_CASE("loader validates and reports paths") {
    CHECK_THROWS_AS(from_text(R"({"carrier": 0})"), model_format_error);
    // wrong table length
    CHECK_THROWS_WITH_AS(
        from_text(R"({"carrier": 2, "ops": {"f": {"arity": 1, "table": [0]}}})"),
        doctest::Contains("ops.f.table"), model_format_error);
    // out-of-range entry
    CHECK_THROWS_WITH_AS(
        from_text(R"({"carrier": 2, "ops": {"f": {"arity": 1, "table": [0, 5]}}})"),
        doctest::Contains("out of range"), model_format_error);
    // tuple arity mismatch
    CHECK_THROWS_WITH_AS(
        from_text(R"({"carrier": 2, "rels": {"R": {"arity": 2, "tuples": [[1]]}}})"),
        doctest::Contains("rels.R.tuples[0]"), model_format_error);
    // op/rel name collision
    CHECK_THROWS_AS(
        from_text(
            R"({"carrier": 2, "ops": {"f": {"arity": 0, "table": [0]}}, "rels": {"f": {"arity": 1, "tuples": []}}})"),
        model_format_error);
    // reserved word as a symbol
    CHECK_THROWS_AS(from_text(R"({"carrier": 2, "ops": {"exists": {"arity": 0, "table": [0]}}})"),
                    model_format_error);
}

TEST_CASE("eval_term through the tables") {
    AlgSignature sig({{"mul", 2}, {"inv", 1}, {"e", 0}});
    auto z2 = load("z2");
    auto z3 = load("z3");
    TermPtr sq = parse_term("mul(x,x)", sig);
    CHECK(eval_term(sq, {"x"}, {1}, *z2) == 0);
    CHECK(eval_term(parse_term("x", sig), {"x"}, {1}, *z2) == 1);
    TermPtr cube = parse_term("mul(x, mul(x,x))", sig);
    CHECK(eval_term(cube, {"x"}, {2}, *z3) == 0);
    CHECK_THROWS_AS(eval_term(parse_term("y", sig), {"x"}, {0}, *z2), sort_error);
}

TEST_CASE("hom_space enumeration") {
    auto z2 = load("z2");
    auto z3 = load("z3");
    CHECK(hom_space({}, *z2, EngineCaps{}).size() == 1);
    auto pts = hom_space({"x", "y"}, *z2, EngineCaps{});
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].values == std::vector<int>{0, 0});
    CHECK(pts[1].values == std::vector<int>{0, 1});
    CHECK(pts[2].values == std::vector<int>{1, 0});
    CHECK(pts[3].values == std::vector<int>{1, 1});
    CHECK(hom_space({"x", "y", "z"}, *z3, EngineCaps{}).size() == 27);
    EngineCaps tight;
    tight.max_points = 8;
    CHECK_THROWS_AS(hom_space({"x", "y", "z", "w"}, *z3, tight), cap_error);
}

TEST_CASE("kernel membership") {
    AlgSignature sig({{"mul", 2}, {"inv", 1}, {"e", 0}});
    auto z2 = load("z2");
    auto z3 = load("z3");
    Point mu1{{"x"}, {1}};
    CHECK(kernel_contains(mu1, parse_term("x", sig), parse_term("x", sig), *z2));
    CHECK(kernel_contains(mu1, parse_term("mul(x,x)", sig), parse_term("e", sig), *z2));
    CHECK(!kernel_contains(Point{{"x"}, {1}}, parse_term("mul(x,x)", sig), parse_term("x", sig), *z3));
}

TEST_CASE("automorphism groups of the corpus") {
    CHECK(automorphisms(*load("trivial")).size() == 1);
    CHECK(automorphisms(*load("z2")).size() == 1);
    auto z3_auts = automorphisms(*load("z3"));
    REQUIRE(z3_auts.size() == 2);
    CHECK(z3_auts[0] == Automorphism{0, 1, 2});
    CHECK(z3_auts[1] == Automorphism{0, 2, 1}); // x -> 2x
    CHECK(automorphisms(*load("z4")).size() == 2);
    CHECK(automorphisms(*load("v4")).size() == 6); // GL(2,2)
    CHECK(automorphisms(*load("s3")).size() == 6); // inner
}

TEST_CASE("automorphisms against the brute-force oracle") {
    // every permutation either verifies as an isomorphism or is excluded
    for (const char* name : {"z3", "v4", "q3", "z2p"}) {
        auto m = load(name);
        int n = m->carrier();
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::vector<Automorphism> brute;
        do {
            if (is_isomorphism(*m, *m, perm)) brute.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(automorphisms(*m) == brute);
    }
}

TEST_CASE("automorphisms form a group") {
    for (const char* name : {"z4", "v4", "s3", "q3"}) {
        auto m = load(name);
        const auto& auts = automorphisms(*m);
        int n = m->carrier();
        std::vector<int> identity(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)] = i;
        CHECK(std::find(auts.begin(), auts.end(), identity) != auts.end());
        for (const auto& a : auts) {
            std::vector<int> inv(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] = i;
            CHECK(std::find(auts.begin(), auts.end(), inv) != auts.end());
            for (const auto& b : auts) {
                std::vector<int> comp(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i)
                    comp[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(b[static_cast<std::size_t>(i)])];
                CHECK(std::find(auts.begin(), auts.end(), comp) != auts.end());
            }
        }
    }
}

TEST_CASE("cross-model isomorphism search") {
    auto z3 = load("z3");
    auto z3r = load("z3r");
    auto iso = find_isomorphism(*z3, *z3r);
    REQUIRE(iso.has_value());
    CHECK(is_isomorphism(*z3, *z3r, *iso));
    CHECK(!find_isomorphism(*load("z4"), *load("v4")).has_value());
    CHECK_THROWS_AS(find_isomorphism(*load("z2"), *load("z2p")), signature_error);
}

TEST_CASE("generated subalgebra with witnesses") {
    auto z2 = load("z2");
    auto z3 = load("z3");

    // one point mu(x)=1 over Z2: closure {(1),(0)}
    GeneratedSubalgebra g = generated_subalgebra(*z2, 1, {{"x", {1}}}, EngineCaps{});
    REQUIRE(g.elements.size() == 2);
    CHECK(g.elements[0] == std::vector<int>{1});
    CHECK(g.elements[1] == std::vector<int>{0});
    for (std::size_t i = 0; i < g.elements.size(); ++i) {
        TermPtr w = g.witness(static_cast<int>(i));
        CHECK(eval_term(w, {"x"}, {1}, *z2) == g.elements[i][0]);
    }

    // two points over Z3: coordinatewise closure of (1,2)
    GeneratedSubalgebra g2 = generated_subalgebra(*z3, 2, {{"x", {1, 2}}}, EngineCaps{});
    std::set<std::vector<int>> got(g2.elements.begin(), g2.elements.end());
    CHECK(got == std::set<std::vector<int>>{{0, 0}, {1, 2}, {2, 1}});

    // constants only
    GeneratedSubalgebra g3 = generated_subalgebra(*z3, 1, {}, EngineCaps{});
    REQUIRE(g3.elements.size() == 1);
    CHECK(g3.elements[0] == std::vector<int>{0});

    EngineCaps tiny;
    tiny.max_subalgebra = 1;
    CHECK_THROWS_AS(generated_subalgebra(*z3, 2, {{"x", {1, 2}}, {"y", {0, 1}}}, tiny), cap_error);
}

TEST_CASE("term function algebra") {
    auto z3 = load("z3");
    // functions of one variable over the Z3 group: x, 2x, 0
    const GeneratedSubalgebra& tf = term_function_algebra(*z3, {"x"}, EngineCaps{});
    CHECK(tf.elements.size() == 3);
    // bounded at depth 0: just the projection
    const GeneratedSubalgebra& tf0 = term_function_algebra(*z3, {"x"}, EngineCaps{}, 0);
    CHECK(tf0.elements.size() == 1);
    // witnesses evaluate to their rows
    for (std::size_t f = 0; f < tf.elements.size(); ++f) {
        TermPtr w = tf.witness(static_cast<int>(f));
        for (int a = 0; a < 3; ++a)
            CHECK(eval_term(w, {"x"}, {a}, *z3) == tf.elements[f][static_cast<std::size_t>(a)]);
    }
}
