#include "lge/galois.hpp"

#include <algorithm>

#include "lge/efgame.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Logical side
// ---------------------------------------------------------------------------

DefSet definable_set_of(const std::vector<FormulaPtr>& formulas, const Sort& sort, const FiniteModel& m,
                        const EngineCaps& caps) {
    DefSet out = DefSet::full(m, sort, caps);
    for (const auto& u : formulas) out = out.intersect(val(u, sort, m, caps));
    return out;
}

bool filter_contains(const DefSet& a, const FormulaPtr& u) {
    return a.is_subset_of(val(u, a.sort(), a.model(), a.caps()));
}

DefSet logical_closure(const DefSet& a) {
    const FiniteModel& m = a.model();
    const auto& auts = automorphisms(m);
    std::size_t k = a.sort().size();
    DefSet out = a;
    for (const auto& alpha : auts) {
        for (std::size_t idx : a.bits().indices()) {
            std::vector<int> vals = point_values(idx, k, m.carrier());
            for (auto& v : vals) v = alpha[static_cast<std::size_t>(v)];
            out.insert(point_index(vals, m.carrier()));
        }
    }
    return out;
}

DefSet logical_closure_oracle(const DefSet& a, int rank) {
    const FiniteModel& m = a.model();
    const EngineCaps& caps = a.caps();
    if (m.carrier() > caps.oracle_max_carrier)
        throw cap_error("closure oracle infeasible: carrier " + std::to_string(m.carrier()) +
                        " exceeds oracle limit " + std::to_string(caps.oracle_max_carrier));
    if (a.space_size() > caps.oracle_max_points)
        throw cap_error("closure oracle infeasible: point space exceeds oracle limit of " +
                        std::to_string(caps.oracle_max_points) + " points");
    if (rank < 0) throw engine_error("closure oracle: rank must be >= 0");

    // Rank-k definable sets are exactly the unions of rank-k equivalence
    // classes, so the intersection of all rank-<=k definable supersets of A
    // is the union of the classes A meets. The class partition is computed by
    // the game search with isomorphism pruning disabled.
    const std::vector<int>& cls = ef_point_classes_cached(m, a.sort(), rank, /*iso_pruning=*/false, caps);
    std::vector<bool> hit(cls.size(), false);
    for (std::size_t idx : a.bits().indices()) hit[static_cast<std::size_t>(cls[idx])] = true;
    DefSet out(m, a.sort(), caps);
    for (std::size_t idx = 0; idx < cls.size(); ++idx)
        if (hit[static_cast<std::size_t>(cls[idx])]) out.insert(idx);
    return out;
}

bool formula_closure_contains(const std::vector<FormulaPtr>& formulas, const FormulaPtr& u,
                              const Sort& sort, const FiniteModel& m, const EngineCaps& caps) {
    return filter_contains(definable_set_of(formulas, sort, m, caps), u);
}

// ---------------------------------------------------------------------------
// Equational side
// ---------------------------------------------------------------------------

DefSet algebraic_set_of(const std::vector<FormulaPtr>& equalities, const Sort& sort,
                        const FiniteModel& m, const EngineCaps& caps) {
    DefSet out = DefSet::full(m, sort, caps);
    for (const auto& u : equalities) {
        if (u->kind() != Formula::Kind::Equal)
            throw engine_error("algebraic_set_of: non-equational formula '" + print_formula(u) + "'");
        out = out.intersect(val(u, sort, m, caps));
    }
    return out;
}

bool congruence_contains(const DefSet& a, const TermPtr& w, const TermPtr& w2) {
    const FiniteModel& m = a.model();
    for (std::size_t idx : a.bits().indices()) {
        std::vector<int> vals = point_values(idx, a.sort().size(), m.carrier());
        if (eval_term(w, a.sort(), vals, m) != eval_term(w2, a.sort(), vals, m)) return false;
    }
    return true;
}

DefSet algebraic_closure(const DefSet& a) {
    const FiniteModel& m = a.model();
    const EngineCaps& caps = a.caps();
    const GeneratedSubalgebra& tf = term_function_algebra(m, a.sort(), caps);

    // Group term functions by their restriction to A; a point belongs to A''
    // iff every group is still constant at that point. The empty A puts all
    // functions into one group, which is the solution set of the full
    // congruence.
    std::vector<std::size_t> members = a.bits().indices();
    std::map<std::vector<int>, std::vector<int>> groups;
    for (std::size_t f = 0; f < tf.elements.size(); ++f) {
        std::vector<int> key;
        key.reserve(members.size());
        for (std::size_t p : members) key.push_back(tf.elements[f][p]);
        groups[key].push_back(static_cast<int>(f));
    }

    DefSet out = DefSet::full(m, a.sort(), caps);
    std::uint64_t total = out.space_size();
    for (std::uint64_t p = 0; p < total; ++p) {
        bool ok = true;
        for (const auto& [key, fs] : groups) {
            int v = tf.elements[static_cast<std::size_t>(fs[0])][static_cast<std::size_t>(p)];
            for (std::size_t i = 1; i < fs.size() && ok; ++i)
                ok = tf.elements[static_cast<std::size_t>(fs[i])][static_cast<std::size_t>(p)] == v;
            if (!ok) break;
        }
        if (!ok) out.erase(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Definable lattice
// ---------------------------------------------------------------------------

int DefinableLattice::index_of(const DefSet& s) const {
    std::uint32_t mask = 0;
    for (std::size_t idx : s.bits().indices()) mask |= std::uint32_t(1) << orbit_of_point[idx];
    // every orbit touched must be fully contained
    for (std::size_t o = 0; o < orbits.size(); ++o)
        if (mask & (std::uint32_t(1) << o))
            if (!orbits[o].is_subset_of(s)) return -1;
    return element_by_mask[mask];
}

bool DefinableLattice::leq(int i, int j) const {
    return (element_mask[static_cast<std::size_t>(i)] & ~element_mask[static_cast<std::size_t>(j)]) == 0;
}

int DefinableLattice::meet(int i, int j) const {
    return element_by_mask[element_mask[static_cast<std::size_t>(i)] & element_mask[static_cast<std::size_t>(j)]];
}

int DefinableLattice::join(int i, int j) const {
    return element_by_mask[element_mask[static_cast<std::size_t>(i)] | element_mask[static_cast<std::size_t>(j)]];
}

int DefinableLattice::bottom() const { return element_by_mask[0]; }

int DefinableLattice::top() const {
    return element_by_mask[(std::uint32_t(1) << orbits.size()) - 1];
}

DefinableLattice definable_lattice(const FiniteModel& m, const Sort& sort, const EngineCaps& caps) {
    DefinableLattice lat;
    lat.model = &m;
    lat.sort = sort;
    std::uint64_t total = space_size(m, sort.size(), caps);
    lat.orbit_of_point.assign(static_cast<std::size_t>(total), -1);

    const auto& auts = automorphisms(m);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        if (lat.orbit_of_point[static_cast<std::size_t>(idx)] != -1) continue;
        int orbit_id = static_cast<int>(lat.orbits.size());
        if (orbit_id >= caps.max_lattice_orbits)
            throw cap_error("definable lattice exceeds orbit cap of " +
                            std::to_string(caps.max_lattice_orbits));
        DefSet orbit(m, sort, caps);
        std::vector<std::uint64_t> stack{idx};
        lat.orbit_of_point[static_cast<std::size_t>(idx)] = orbit_id;
        orbit.insert(idx);
        while (!stack.empty()) {
            std::uint64_t cur = stack.back();
            stack.pop_back();
            std::vector<int> vals = point_values(cur, sort.size(), m.carrier());
            for (const auto& alpha : auts) {
                std::vector<int> mapped = vals;
                for (auto& v : mapped) v = alpha[static_cast<std::size_t>(v)];
                std::uint64_t to = point_index(mapped, m.carrier());
                if (lat.orbit_of_point[static_cast<std::size_t>(to)] == -1) {
                    lat.orbit_of_point[static_cast<std::size_t>(to)] = orbit_id;
                    orbit.insert(to);
                    stack.push_back(to);
                }
            }
        }
        lat.orbits.push_back(std::move(orbit));
    }

    std::size_t k = lat.orbits.size();
    std::vector<std::pair<std::pair<std::size_t, std::vector<std::size_t>>, std::uint32_t>> order;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << k); ++mask) {
        DefSet el(m, sort, caps);
        for (std::size_t o = 0; o < k; ++o)
            if (mask & (std::uint32_t(1) << o)) el = el.unite(lat.orbits[o]);
        order.push_back({{el.count(), el.bits().indices()}, mask});
    }
    std::sort(order.begin(), order.end());
    lat.element_by_mask.assign(std::size_t(1) << k, -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t mask = order[i].second;
        DefSet el(m, sort, caps);
        for (std::size_t o = 0; o < k; ++o)
            if (mask & (std::uint32_t(1) << o)) el = el.unite(lat.orbits[o]);
        lat.elements.push_back(std::move(el));
        lat.element_mask.push_back(mask);
        lat.element_by_mask[mask] = static_cast<int>(i);
    }
    return lat;
}

} // namespace lge
