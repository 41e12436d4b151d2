#include "lge/kb.hpp"

#include <algorithm>
#include <numeric>

#include "lge/efgame.hpp"
#include "lge/enumerate.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Orbit formulas and knowledge bases
// ---------------------------------------------------------------------------

std::vector<FormulaPtr> orbit_defining_formulas(const FiniteModel& m, const DefinableLattice& lat,
                                                const EngineCaps& caps) {
    std::vector<FormulaPtr> out;
    EfGame game(m, m, /*iso_pruning=*/true, caps);
    EfGame swapped(m, m, /*iso_pruning=*/true, caps);
    int cap = stabilization_rank(m, m);
    std::uint64_t total = space_size(m, lat.sort.size(), caps);
    for (std::size_t o = 0; o < lat.orbits.size(); ++o) {
        std::size_t rep_idx = lat.orbits[o].bits().indices().front();
        std::vector<int> rep = point_values(rep_idx, lat.sort.size(), m.carrier());
        std::vector<FormulaPtr> parts;
        std::vector<std::string> seen;
        for (std::uint64_t q = 0; q < total; ++q) {
            if (lat.orbits[o].contains(q)) continue;
            std::vector<int> other = point_values(q, lat.sort.size(), m.carrier());
            std::optional<int> rank = game.min_separation_rank(rep, other, cap);
            if (!rank) throw internal_error("orbit formula: points in distinct orbits not separable");
            std::vector<std::string> names =
                position_names(lat.sort, lat.sort.size() + static_cast<std::size_t>(*rank), m, m);
            FormulaPtr u = synthesize_separation(game, swapped, rep, other, *rank, names);
            std::string key = print_formula(u);
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                parts.push_back(u);
            }
        }
        FormulaPtr formula;
        if (parts.empty()) {
            // single orbit: the whole space; any tautology over the sort pins it
            TermPtr t = lat.sort.empty() ? term_pool(m, lat.sort, 2, 1, caps).at(0)
                                         : Term::var(lat.sort[0]);
            formula = Formula::equal(t, t);
        } else {
            formula = conjoin(std::move(parts));
        }
        if (val(formula, lat.sort, m, caps) != lat.orbits[o])
            throw internal_error("orbit formula valuation mismatch for orbit " + std::to_string(o));
        out.push_back(formula);
    }
    return out;
}

int KnowledgeBase::sort_index(const Sort& sort) const {
    for (std::size_t i = 0; i < sorts.size(); ++i)
        if (sorts[i] == sort) return static_cast<int>(i);
    return -1;
}

FormulaPtr KnowledgeBase::element_formula(int sort_idx, int element) const {
    const DefinableLattice& lat = lattices[static_cast<std::size_t>(sort_idx)];
    const auto& formulas = orbit_formulas[static_cast<std::size_t>(sort_idx)];
    std::uint32_t mask = lat.element_mask[static_cast<std::size_t>(element)];
    std::vector<FormulaPtr> parts;
    for (std::size_t o = 0; o < lat.orbits.size(); ++o)
        if (mask & (std::uint32_t(1) << o)) parts.push_back(formulas[o]);
    if (parts.empty()) {
        FormulaPtr any = formulas.at(0);
        return Formula::land(any, Formula::lnot(any));
    }
    return disjoin(std::move(parts));
}

KnowledgeBase build_kb(const FiniteModel& m, const std::vector<Sort>& sorts, const EngineCaps& caps) {
    KnowledgeBase kb;
    kb.model = &m;
    for (const auto& sort : sorts) {
        validate_sort(sort);
        try {
            kb.lattices.push_back(definable_lattice(m, sort, caps));
        } catch (const cap_error& e) {
            throw cap_error(std::string(e.what()) + " (sort " +
                            (sort.empty() ? std::string("()") : sort[0] + "...") + ")");
        }
        kb.sorts.push_back(sort);
        kb.orbit_formulas.push_back(orbit_defining_formulas(m, kb.lattices.back(), caps));
    }
    return kb;
}

KnowledgeTriple ct(const KnowledgeBase& kb, const std::vector<FormulaPtr>& description, const Sort& sort,
                   const EngineCaps& caps) {
    if (kb.sort_index(sort) < 0) throw sort_error("ct: sort not materialized in this knowledge base");
    return KnowledgeTriple{sort, description, definable_set_of(description, sort, *kb.model, caps)};
}

// ---------------------------------------------------------------------------
// Small lattices
// ---------------------------------------------------------------------------

SmallLattice to_small_lattice(const DefinableLattice& lat) {
    SmallLattice s;
    s.size = static_cast<int>(lat.size());
    s.leq.assign(static_cast<std::size_t>(s.size), std::vector<bool>(static_cast<std::size_t>(s.size), false));
    for (int i = 0; i < s.size; ++i)
        for (int j = 0; j < s.size; ++j) s.leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lat.leq(i, j);
    return s;
}

namespace {

struct LatticeShape {
    std::vector<std::vector<int>> lower_covers;
    std::vector<std::vector<int>> upper_covers;
    std::vector<int> height;
    std::vector<int> join_irreducibles;
    int bottom = -1;

    explicit LatticeShape(const SmallLattice& l) {
        int n = l.size;
        lower_covers.assign(static_cast<std::size_t>(n), {});
        upper_covers.assign(static_cast<std::size_t>(n), {});
        height.assign(static_cast<std::size_t>(n), 0);
        auto lt = [&](int a, int b) { return a != b && l.leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (!lt(i, j)) continue;
                bool cover = true;
                for (int k = 0; k < n && cover; ++k) cover = !(lt(i, k) && lt(k, j));
                if (cover) {
                    lower_covers[static_cast<std::size_t>(j)].push_back(i);
                    upper_covers[static_cast<std::size_t>(i)].push_back(j);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            bool is_bottom = true;
            for (int k = 0; k < n && is_bottom; ++k) is_bottom = !lt(k, i);
            if (is_bottom) bottom = i;
        }
        // heights by repeated relaxation over covers
        bool changed = true;
        while (changed) {
            changed = false;
            for (int j = 0; j < n; ++j)
                for (int i : lower_covers[static_cast<std::size_t>(j)])
                    if (height[static_cast<std::size_t>(j)] < height[static_cast<std::size_t>(i)] + 1) {
                        height[static_cast<std::size_t>(j)] = height[static_cast<std::size_t>(i)] + 1;
                        changed = true;
                    }
        }
        for (int i = 0; i < n; ++i)
            if (lower_covers[static_cast<std::size_t>(i)].size() == 1) join_irreducibles.push_back(i);
    }

    std::tuple<int, std::size_t, std::size_t> invariant(int i) const {
        return {height[static_cast<std::size_t>(i)], lower_covers[static_cast<std::size_t>(i)].size(),
                upper_covers[static_cast<std::size_t>(i)].size()};
    }
};

int lattice_join(const SmallLattice& l, const std::vector<int>& elems, int bottom) {
    if (elems.empty()) return bottom;
    std::vector<int> uppers;
    for (int u = 0; u < l.size; ++u) {
        bool ok = true;
        for (int e : elems) ok = ok && l.leq[static_cast<std::size_t>(e)][static_cast<std::size_t>(u)];
        if (ok) uppers.push_back(u);
    }
    for (int u : uppers) {
        bool minimal = true;
        for (int v : uppers)
            if (v != u && l.leq[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) minimal = false;
        if (minimal) return u;
    }
    throw engine_error("lattice_join: order relation is not a lattice");
}

} // namespace

std::optional<std::vector<int>> lattice_isomorphic(const SmallLattice& l1, const SmallLattice& l2) {
    if (l1.size != l2.size) return std::nullopt;
    if (l1.size == 0) return std::vector<int>{};
    LatticeShape s1(l1), s2(l2);
    if (s1.join_irreducibles.size() != s2.join_irreducibles.size()) return std::nullopt;

    const auto& ji1 = s1.join_irreducibles;
    const auto& ji2 = s2.join_irreducibles;
    std::vector<int> ji_map(ji1.size(), -1);
    std::vector<bool> used(ji2.size(), false);

    // order-embedding of the JI poset, then extension by joins
    std::vector<int> full;
    auto extend_and_verify = [&]() -> bool {
        full.assign(static_cast<std::size_t>(l1.size), -1);
        for (int e = 0; e < l1.size; ++e) {
            std::vector<int> below;
            for (std::size_t k = 0; k < ji1.size(); ++k)
                if (l1.leq[static_cast<std::size_t>(ji1[k])][static_cast<std::size_t>(e)])
                    below.push_back(ji2[static_cast<std::size_t>(ji_map[k])]);
            full[static_cast<std::size_t>(e)] = lattice_join(l2, below, s2.bottom);
        }
        std::vector<bool> hit(static_cast<std::size_t>(l2.size), false);
        for (int v : full) {
            if (hit[static_cast<std::size_t>(v)]) return false;
            hit[static_cast<std::size_t>(v)] = true;
        }
        for (int a = 0; a < l1.size; ++a)
            for (int b = 0; b < l1.size; ++b)
                if (l1.leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] !=
                    l2.leq[static_cast<std::size_t>(full[static_cast<std::size_t>(a)])]
                          [static_cast<std::size_t>(full[static_cast<std::size_t>(b)])])
                    return false;
        return true;
    };

    std::function<bool(std::size_t)> place = [&](std::size_t k) -> bool {
        if (k == ji1.size()) return extend_and_verify();
        for (std::size_t c = 0; c < ji2.size(); ++c) {
            if (used[c]) continue;
            if (s1.invariant(ji1[k]) != s2.invariant(ji2[c])) continue;
            bool ok = true;
            for (std::size_t p = 0; p < k && ok; ++p) {
                bool r1 = l1.leq[static_cast<std::size_t>(ji1[p])][static_cast<std::size_t>(ji1[k])];
                bool r1b = l1.leq[static_cast<std::size_t>(ji1[k])][static_cast<std::size_t>(ji1[p])];
                bool r2 = l2.leq[static_cast<std::size_t>(ji2[static_cast<std::size_t>(ji_map[p])])]
                                [static_cast<std::size_t>(ji2[c])];
                bool r2b = l2.leq[static_cast<std::size_t>(ji2[c])]
                                 [static_cast<std::size_t>(ji2[static_cast<std::size_t>(ji_map[p])])];
                ok = (r1 == r2) && (r1b == r2b);
            }
            if (!ok) continue;
            ji_map[k] = static_cast<int>(c);
            used[c] = true;
            if (place(k + 1)) return true;
            used[c] = false;
            ji_map[k] = -1;
        }
        return false;
    };

    if (!place(0)) return std::nullopt;
    return full;
}

// ---------------------------------------------------------------------------
// KB isomorphism
// ---------------------------------------------------------------------------

namespace {

// Naturality of a candidate family over the sampled morphism grid: the
// lattice maps must commute with both induced actions (image closure on the
// content side and filter transport on the description side).
struct NaturalityCheck {
    const KnowledgeBase& kb1;
    const KnowledgeBase& kb2;
    const std::vector<std::vector<int>>& beta;
    const KbIsoBounds& bounds;
    const EngineCaps& caps;
    int cells = 0;
    std::string failure;

    bool run() {
        for (std::size_t t = 0; t < kb1.sorts.size(); ++t) {
            for (std::size_t s = 0; s < kb1.sorts.size(); ++s) {
                auto morphisms = enumerate_morphisms(*kb1.model, kb1.sorts[s], kb1.sorts[t],
                                                     bounds.morphism_depth, bounds.max_morphisms, caps);
                const DefinableLattice& lat1_t = kb1.lattices[t];
                const DefinableLattice& lat1_s = kb1.lattices[s];
                const DefinableLattice& lat2_t = kb2.lattices[t];
                const DefinableLattice& lat2_s = kb2.lattices[s];
                for (const auto& mor : morphisms) {
                    for (std::size_t e = 0; e < lat1_t.size(); ++e) {
                        // content side
                        DefSet lhs1 = image_closure(mor, lat1_t.elements[e]);
                        int lhs_idx = lat1_s.index_of(lhs1);
                        DefSet rhs = image_closure(
                            mor, lat2_t.elements[static_cast<std::size_t>(beta[t][e])]);
                        int rhs_idx = lat2_s.index_of(rhs);
                        ++cells;
                        if (lhs_idx < 0 || rhs_idx < 0 || beta[s][static_cast<std::size_t>(lhs_idx)] != rhs_idx) {
                            failure = "content naturality fails at sort pair (" + std::to_string(t) +
                                      "," + std::to_string(s) + "), morphism [" + print_morphism(mor) +
                                      "], element " + std::to_string(e);
                            return false;
                        }
                    }
                    for (std::size_t e = 0; e < lat1_s.size(); ++e) {
                        // description side through the Galois representation
                        FilterHandle f1{lat1_s.elements[e]};
                        DefSet moved1 = filter_transport(mor, f1).defining;
                        int moved1_idx = lat1_t.index_of(moved1);
                        FilterHandle f2{lat2_s.elements[static_cast<std::size_t>(beta[s][e])]};
                        DefSet moved2 = filter_transport(mor, f2).defining;
                        int moved2_idx = lat2_t.index_of(moved2);
                        ++cells;
                        if (moved1_idx < 0 || moved2_idx < 0 ||
                            beta[t][static_cast<std::size_t>(moved1_idx)] != moved2_idx) {
                            failure = "description naturality fails at sort pair (" + std::to_string(s) +
                                      "," + std::to_string(t) + "), morphism [" + print_morphism(mor) +
                                      "], element " + std::to_string(e);
                            return false;
                        }
                    }
                }
            }
        }
        return true;
    }
};

DefSet apply_model_map(const std::vector<int>& alpha, const DefSet& a, const FiniteModel& m2) {
    DefSet out(m2, a.sort(), a.caps());
    for (std::size_t idx : a.bits().indices()) {
        std::vector<int> vals = point_values(idx, a.sort().size(), a.model().carrier());
        for (auto& v : vals) v = alpha[static_cast<std::size_t>(v)];
        out.insert(vals);
    }
    return out;
}

} // namespace

KbIsoVerdict kb_isomorphic(const KnowledgeBase& kb1, const KnowledgeBase& kb2, const KbIsoBounds& bounds,
                           const EngineCaps& caps) {
    if (kb1.sorts != kb2.sorts) throw sort_error("kb_isomorphic: sort families differ");
    if (!kb1.model->same_signature(*kb2.model))
        throw signature_error("kb_isomorphic: different signatures");
    if (kb1.sorts.empty()) throw engine_error("kb_isomorphic: no materialized sorts");

    KbIsoVerdict v;
    v.morphism_depth = bounds.morphism_depth;

    IsotypicVerdict iso = isotypic(*kb1.model, *kb2.model, kb1.sorts[0], caps);
    if (iso.isotypic) {
        // Theorem route: build beta from the model isomorphism, alpha on the
        // description side is the identity on formulas; verify the square on
        // every lattice element and naturality on the sampled grid.
        const std::vector<int>& alpha = *iso.witness_iso;
        if (!is_isomorphism(*kb1.model, *kb2.model, alpha))
            throw internal_error("kb_isomorphic: witness isomorphism failed verification");
        v.alpha = alpha;
        for (std::size_t i = 0; i < kb1.sorts.size(); ++i) {
            const DefinableLattice& l1 = kb1.lattices[i];
            const DefinableLattice& l2 = kb2.lattices[i];
            if (l1.size() != l2.size())
                throw internal_error("kb_isomorphic: isotypic models with different lattice sizes");
            std::vector<int> b(l1.size(), -1);
            for (std::size_t e = 0; e < l1.size(); ++e) {
                int idx = l2.index_of(apply_model_map(alpha, l1.elements[e], *kb2.model));
                if (idx < 0)
                    throw internal_error("kb_isomorphic: image of a closed set is not closed");
                b[e] = idx;
            }
            // bijectivity and lattice-structure preservation
            std::vector<bool> hit(l2.size(), false);
            for (int x : b) {
                if (hit[static_cast<std::size_t>(x)])
                    throw internal_error("kb_isomorphic: beta is not injective");
                hit[static_cast<std::size_t>(x)] = true;
            }
            for (std::size_t a1 = 0; a1 < l1.size(); ++a1)
                for (std::size_t a2 = 0; a2 < l1.size(); ++a2) {
                    bool ok = l1.leq(static_cast<int>(a1), static_cast<int>(a2)) ==
                                  l2.leq(b[a1], b[a2]) &&
                              b[static_cast<std::size_t>(l1.meet(static_cast<int>(a1), static_cast<int>(a2)))] ==
                                  l2.meet(b[a1], b[a2]) &&
                              b[static_cast<std::size_t>(l1.join(static_cast<int>(a1), static_cast<int>(a2)))] ==
                                  l2.join(b[a1], b[a2]);
                    if (!ok) throw internal_error("kb_isomorphic: beta does not preserve the lattice");
                }
            // commutative square, element by element, through real valuations
            for (std::size_t e = 0; e < l1.size(); ++e) {
                FormulaPtr u = kb1.element_formula(static_cast<int>(i), static_cast<int>(e));
                DefSet c1 = definable_set_of({u}, kb1.sorts[i], *kb1.model, caps);
                DefSet c2 = definable_set_of({u}, kb1.sorts[i], *kb2.model, caps);
                if (c1 != l1.elements[e] ||
                    c2 != l2.elements[static_cast<std::size_t>(b[e])])
                    throw internal_error("kb_isomorphic: commutative square fails on element " +
                                         std::to_string(e));
                v.checked_cells++;
            }
            v.beta.push_back(std::move(b));
        }
        NaturalityCheck nat{kb1, kb2, v.beta, bounds, caps, 0, ""};
        if (!nat.run()) throw internal_error("kb_isomorphic (isotypic route): " + nat.failure);
        v.checked_cells += nat.cells;
        v.status = KbIsoVerdict::Status::Isomorphic;
        v.route = "isotypic";
        return v;
    }

    // Direct route: sort-preserving candidate lattice isomorphisms are orbit
    // bijections; enumerate them within bounds and test each against the grid.
    std::vector<std::size_t> orbit_counts;
    for (std::size_t i = 0; i < kb1.sorts.size(); ++i) {
        const DefinableLattice& l1 = kb1.lattices[i];
        const DefinableLattice& l2 = kb2.lattices[i];
        if (l1.size() != l2.size()) {
            std::vector<std::size_t> sizes1, sizes2;
            for (const auto& l : kb1.lattices) sizes1.push_back(l.size());
            for (const auto& l : kb2.lattices) sizes2.push_back(l.size());
            std::sort(sizes1.begin(), sizes1.end());
            std::sort(sizes2.begin(), sizes2.end());
            v.status = KbIsoVerdict::Status::NotIsomorphic;
            v.route = "direct";
            v.obstruction = "content-lattice sizes differ for sort " + std::to_string(i) + ": " +
                            std::to_string(kb1.lattices[i].size()) + " vs " +
                            std::to_string(kb2.lattices[i].size());
            if (sizes1 == sizes2)
                v.obstruction += " (size multisets agree; sort-permuting isomorphisms not searched)";
            return v;
        }
        orbit_counts.push_back(l1.orbits.size());
    }

    // candidate count = product of per-sort orbit permutations
    double total = 1;
    for (std::size_t k : orbit_counts) {
        for (std::size_t f = 2; f <= k; ++f) total *= static_cast<double>(f);
        if (total > static_cast<double>(bounds.max_candidates)) break;
    }
    if (total > static_cast<double>(bounds.max_candidates)) {
        v.status = KbIsoVerdict::Status::Unknown;
        v.route = "direct";
        v.obstruction = "candidate family count exceeds bounds (" +
                        std::to_string(bounds.max_candidates) + ")";
        return v;
    }

    // iterate the product of per-sort orbit permutations in lex order
    std::vector<std::vector<int>> perms(kb1.sorts.size());
    for (std::size_t i = 0; i < perms.size(); ++i) {
        perms[i].resize(orbit_counts[i]);
        std::iota(perms[i].begin(), perms[i].end(), 0);
    }
    std::string first_failure;
    int candidates_tried = 0;
    for (;;) {
        // build beta from the orbit permutations (mask relabeling)
        std::vector<std::vector<int>> beta;
        bool valid = true;
        for (std::size_t i = 0; i < perms.size() && valid; ++i) {
            const DefinableLattice& l1 = kb1.lattices[i];
            const DefinableLattice& l2 = kb2.lattices[i];
            std::vector<int> b(l1.size(), -1);
            for (std::size_t e = 0; e < l1.size(); ++e) {
                std::uint32_t mask = l1.element_mask[e], mapped = 0;
                for (std::size_t o = 0; o < orbit_counts[i]; ++o)
                    if (mask & (std::uint32_t(1) << o))
                        mapped |= std::uint32_t(1) << perms[i][o];
                b[e] = l2.element_by_mask[mapped];
            }
            beta.push_back(std::move(b));
        }
        ++candidates_tried;
        NaturalityCheck nat{kb1, kb2, beta, bounds, caps, 0, ""};
        if (valid && nat.run()) {
            v.status = KbIsoVerdict::Status::Isomorphic;
            v.route = "direct";
            v.beta = beta;
            v.checked_cells = nat.cells;
            return v;
        }
        if (first_failure.empty()) first_failure = nat.failure;

        // next candidate
        std::size_t i = perms.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (std::next_permutation(perms[i].begin(), perms[i].end())) {
                done = false;
                break;
            }
            // perms[i] cycled back to identity; carry on to the next sort
        }
        if (done) break;
    }
    v.status = KbIsoVerdict::Status::NotIsomorphic;
    v.route = "direct";
    v.obstruction = "all " + std::to_string(candidates_tried) +
                    " sort-preserving candidate families fail the naturality grid; first: " +
                    first_failure;
    return v;
}

} // namespace lge
