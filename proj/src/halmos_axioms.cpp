#include <random>

#include "lge/category.hpp"
#include "lge/enumerate.hpp"
#include "lge/halmos.hpp"

namespace lge {

namespace {

struct AxiomRecorder {
    std::vector<AxiomCheckResult> results;

    AxiomCheckResult& slot(const std::string& name) {
        for (auto& r : results)
            if (r.axiom == name) return r;
        results.push_back({name, 0, 0, ""});
        return results.back();
    }

    void record(const std::string& name, bool ok, const std::string& instance) {
        AxiomCheckResult& r = slot(name);
        r.instances++;
        if (!ok) {
            r.failures++;
            if (r.counterexample.empty()) r.counterexample = instance;
        }
    }
};

} // namespace

std::vector<AxiomCheckResult> check_halmos_axioms(const FiniteModel& m, const Sort& sort,
                                                  const AxiomCheckOptions& opts, const EngineCaps& caps) {
    std::mt19937_64 rng(opts.seed);
    AxiomRecorder rec;
    auto pick_var = [&](const Sort& s) { return s[rng() % s.size()]; };

    // --- extended boolean algebra: quantifier laws -------------------------
    if (!sort.empty()) {
        for (const auto& x : sort) {
            DefSet zero = DefSet::empty(m, sort, caps);
            rec.record("exists-zero (exists 0 = 0)", cylindrify(zero, x).is_empty(), "x=" + x);
        }
        for (int i = 0; i < opts.instances; ++i) {
            DefSet a = random_defset(rng, m, sort, caps);
            std::string x = pick_var(sort);
            rec.record("increasing (a <= exists a)", a.is_subset_of(cylindrify(a, x)),
                       "x=" + x + " a=" + set_to_string(a));
        }
        for (int i = 0; i < opts.instances; ++i) {
            DefSet a = random_defset(rng, m, sort, caps);
            DefSet b = random_defset(rng, m, sort, caps);
            std::string x = pick_var(sort);
            DefSet lhs = cylindrify(a.intersect(cylindrify(b, x)), x);
            DefSet rhs = cylindrify(a, x).intersect(cylindrify(b, x));
            rec.record("distribution (exists(a & exists b) = exists a & exists b)", lhs == rhs,
                       "x=" + x + " a=" + set_to_string(a) + " b=" + set_to_string(b));
        }
    }
    if (sort.size() >= 2) {
        for (int i = 0; i < opts.instances; ++i) {
            DefSet a = random_defset(rng, m, sort, caps);
            std::string x = pick_var(sort), y = pick_var(sort);
            DefSet lhs = cylindrify(cylindrify(a, x), y);
            DefSet rhs = cylindrify(cylindrify(a, y), x);
            rec.record("commuting quantifiers (exists x exists y = exists y exists x)", lhs == rhs,
                       "x=" + x + " y=" + y + " a=" + set_to_string(a));
        }
    }

    // --- sort-morphism axioms on the set level -----------------------------
    if (!sort.empty()) {
        for (int i = 0; i < opts.instances; ++i) {
            TermMorphism s = random_morphism(rng, m, sort, sort, opts.morphism_depth, caps);
            DefSet a = random_defset(rng, m, sort, caps);
            DefSet b = random_defset(rng, m, sort, caps);
            bool hom = preimage_set(s, a.unite(b)) == preimage_set(s, a).unite(preimage_set(s, b)) &&
                       preimage_set(s, a.complement()) == preimage_set(s, a).complement() &&
                       preimage_set(s, a.intersect(b)) == preimage_set(s, a).intersect(preimage_set(s, b));
            rec.record("transport is a boolean homomorphism", hom,
                       "s=[" + print_morphism(s) + "] a=" + set_to_string(a));
        }
        for (int i = 0; i < opts.instances; ++i) {
            TermMorphism s2 = random_morphism(rng, m, sort, sort, opts.morphism_depth, caps);
            TermMorphism s1 = random_morphism(rng, m, sort, sort, opts.morphism_depth, caps);
            DefSet a = random_defset(rng, m, sort, caps);
            DefSet lhs = preimage_set(s1, preimage_set(s2, a));
            DefSet rhs = preimage_set(compose(s1, s2), a);
            rec.record("functoriality (s1* s2* = (s1 s2)*)", lhs == rhs,
                       "s1=[" + print_morphism(s1) + "] s2=[" + print_morphism(s2) + "]");
        }
        for (int i = 0; i < opts.instances; ++i) {
            // two morphisms agreeing everywhere except at x
            TermMorphism s1 = random_morphism(rng, m, sort, sort, opts.morphism_depth, caps);
            TermMorphism s2 = s1;
            std::size_t xi = rng() % sort.size();
            std::vector<TermPtr> pool = term_pool(m, sort, opts.morphism_depth, 10000, caps);
            s2.images[xi] = pool[rng() % pool.size()];
            DefSet a = random_defset(rng, m, sort, caps);
            DefSet ex = cylindrify(a, sort[xi]);
            rec.record("quantifier interaction (a): agreement off x", preimage_set(s1, ex) == preimage_set(s2, ex),
                       "x=" + sort[xi] + " s1=[" + print_morphism(s1) + "] s2=[" + print_morphism(s2) + "]");
        }
        for (int i = 0; i < opts.instances; ++i) {
            // s(x) = y a variable, y outside the support of every other image
            std::size_t xi = rng() % sort.size();
            std::size_t yi = rng() % sort.size();
            const std::string& y = sort[yi];
            std::vector<TermPtr> pool = term_pool(m, sort, opts.morphism_depth, 10000, caps);
            std::vector<TermPtr> avoiding;
            for (const auto& t : pool)
                if (!term_vars(t).count(y)) avoiding.push_back(t);
            if (avoiding.empty()) continue;
            TermMorphism s;
            s.source = sort;
            s.target = sort;
            for (std::size_t v = 0; v < sort.size(); ++v)
                s.images.push_back(v == xi ? Term::var(y) : avoiding[rng() % avoiding.size()]);
            DefSet a = random_defset(rng, m, sort, caps);
            DefSet lhs = preimage_set(s, cylindrify(a, sort[xi]));
            DefSet rhs = cylindrify(preimage_set(s, a), y);
            rec.record("quantifier interaction (b): s*(exists x a) = exists s(x) (s* a)", lhs == rhs,
                       "x=" + sort[xi] + " y=" + y + " s=[" + print_morphism(s) + "]");
        }
        // atom action: substitution rewrites the atom and commutes with Val
        std::vector<TermPtr> pool = term_pool(m, sort, opts.morphism_depth, 10000, caps);
        for (int i = 0; i < opts.instances; ++i) {
            TermMorphism s = random_morphism(rng, m, sort, sort, opts.morphism_depth, caps);
            FormulaPtr atom;
            if (!m.rels().size() || (rng() & 1)) {
                atom = Formula::equal(pool[rng() % pool.size()], pool[rng() % pool.size()]);
            } else {
                std::size_t rel = rng() % m.rels().size();
                std::vector<TermPtr> args;
                for (int k = 0; k < m.rels().at(static_cast<int>(rel)).arity; ++k)
                    args.push_back(pool[rng() % pool.size()]);
                atom = Formula::rel(m.rels().at(static_cast<int>(rel)).name, std::move(args));
            }
            FormulaPtr moved = substitute(s, atom);
            // structural form: the same atom over substituted terms
            bool structural = moved->kind() == atom->kind();
            if (structural) {
                for (std::size_t t = 0; t < atom->terms().size(); ++t)
                    structural = structural &&
                                 term_equal(moved->terms()[t], apply_to_term(s, atom->terms()[t]));
            }
            bool semantic = val(moved, sort, m, caps) == preimage_set(s, val(atom, sort, m, caps));
            rec.record("atom action (s*(phi(w...)) = phi(sw...))", structural && semantic,
                       "s=[" + print_morphism(s) + "] atom=" + print_formula(atom));
        }
    }
    return rec.results;
}

} // namespace lge
