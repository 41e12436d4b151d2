#include "lge/enumerate.hpp"

#include <algorithm>

namespace lge {

std::vector<TermPtr> term_pool(const FiniteModel& m, const Sort& sort, int max_depth, std::size_t cap,
                               const EngineCaps& caps) {
    const GeneratedSubalgebra& tf = term_function_algebra(m, sort, caps, max_depth);
    std::vector<TermPtr> out;
    for (std::size_t i = 0; i < tf.elements.size() && out.size() < cap; ++i)
        if (tf.depth[i] <= max_depth) out.push_back(tf.witness(static_cast<int>(i)));
    return out;
}

std::vector<TermMorphism> enumerate_morphisms(const FiniteModel& m, const Sort& source,
                                              const Sort& target, int max_depth, std::size_t cap,
                                              const EngineCaps& caps) {
    std::vector<TermPtr> pool = term_pool(m, target, max_depth, 10000, caps);
    std::vector<TermMorphism> out;
    if (pool.empty()) {
        if (source.empty()) {
            TermMorphism s;
            s.source = source;
            s.target = target;
            out.push_back(std::move(s));
        }
        return out;
    }
    std::vector<std::size_t> sel(source.size(), 0);
    for (;;) {
        TermMorphism s;
        s.source = source;
        s.target = target;
        for (std::size_t i = 0; i < source.size(); ++i) s.images.push_back(pool[sel[i]]);
        out.push_back(std::move(s));
        if (out.size() >= cap) break;
        std::size_t i = source.size();
        while (i > 0) {
            --i;
            if (++sel[i] < pool.size()) break;
            sel[i] = 0;
            if (i == 0) return out;
        }
        if (source.empty()) break;
    }
    return out;
}

std::vector<FormulaPtr> formula_family(const FiniteModel& m, const Sort& sort,
                                       const FormulaFamilyOptions& opts, const EngineCaps& caps) {
    std::vector<TermPtr> pool = term_pool(m, sort, opts.max_term_depth, opts.max_terms, caps);
    std::vector<FormulaPtr> atoms;
    for (std::size_t i = 0; i < pool.size() && atoms.size() < opts.max_atoms; ++i)
        for (std::size_t j = i + 1; j < pool.size() && atoms.size() < opts.max_atoms; ++j)
            atoms.push_back(Formula::equal(pool[i], pool[j]));
    // degenerate sorts can have a single term function; keep the family
    // nonempty with the reflexive atom
    if (atoms.empty() && !pool.empty()) atoms.push_back(Formula::equal(pool[0], pool[0]));
    for (std::size_t rel = 0; rel < m.rels().size() && atoms.size() < opts.max_atoms; ++rel) {
        int arity = m.rels().at(static_cast<int>(rel)).arity;
        std::vector<std::size_t> sel(static_cast<std::size_t>(arity), 0);
        if (pool.empty()) break;
        for (;;) {
            std::vector<TermPtr> args;
            for (std::size_t s : sel) args.push_back(pool[s]);
            atoms.push_back(Formula::rel(m.rels().at(static_cast<int>(rel)).name, std::move(args)));
            if (atoms.size() >= opts.max_atoms) break;
            std::size_t i = sel.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++sel[i] < pool.size()) {
                    done = false;
                    break;
                }
                sel[i] = 0;
            }
            if (done) break;
        }
    }

    // layer 0: atoms and their negations
    std::vector<FormulaPtr> level = atoms;
    for (const auto& a : atoms) level.push_back(Formula::lnot(a));
    std::vector<FormulaPtr> family = level;

    auto add_boolean = [&](const std::vector<FormulaPtr>& src) {
        std::size_t added = 0;
        for (std::size_t i = 0; i + 1 < src.size() && added < opts.max_boolean; i += 2) {
            family.push_back(Formula::land(src[i], src[i + 1]));
            family.push_back(Formula::lor(src[i], src[i + 1]));
            added += 2;
        }
    };
    add_boolean(level);

    // quantifier layers over the sort variables, alternating flavors
    std::vector<FormulaPtr> prev = family;
    for (int rank = 1; rank <= opts.max_rank; ++rank) {
        std::vector<FormulaPtr> next;
        std::size_t added = 0;
        for (std::size_t i = 0; i < prev.size() && added < opts.max_quantified; ++i) {
            for (const auto& v : sort) {
                if (added >= opts.max_quantified) break;
                if (!free_vars(prev[i]).count(v)) continue;
                next.push_back((i + added) % 2 == 0 ? Formula::exists(v, prev[i])
                                                    : Formula::forall(v, prev[i]));
                ++added;
            }
        }
        if (!next.empty()) {
            // a few boolean mixes between ranks keep the family varied
            for (std::size_t i = 0; i + 1 < next.size() && i < 8; i += 2)
                next.push_back((i % 4 == 0) ? Formula::land(next[i], next[i + 1])
                                            : Formula::lor(next[i], Formula::lnot(next[i + 1])));
        }
        family.insert(family.end(), next.begin(), next.end());
        prev = std::move(next);
        if (prev.empty()) break;
    }
    return family;
}

DefSet random_defset(std::mt19937_64& rng, const FiniteModel& m, const Sort& sort,
                     const EngineCaps& caps) {
    DefSet out(m, sort, caps);
    std::uint64_t total = out.space_size();
    for (std::uint64_t i = 0; i < total; ++i)
        if (rng() & 1) out.insert(i);
    return out;
}

TermMorphism random_morphism(std::mt19937_64& rng, const FiniteModel& m, const Sort& source,
                             const Sort& target, int max_depth, const EngineCaps& caps) {
    std::vector<TermPtr> pool = term_pool(m, target, max_depth, 10000, caps);
    if (pool.empty()) throw engine_error("random_morphism: empty term pool for the target sort");
    TermMorphism s;
    s.source = source;
    s.target = target;
    for (std::size_t i = 0; i < source.size(); ++i)
        s.images.push_back(pool[rng() % pool.size()]);
    return s;
}

} // namespace lge
