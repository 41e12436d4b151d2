#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lge/halmos.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Logical correspondence: definable sets and H-closed filters
// ---------------------------------------------------------------------------

// T^L: all points satisfying every formula of T; the empty T gives the full
// space.
DefSet definable_set_of(const std::vector<FormulaPtr>& formulas, const Sort& sort, const FiniteModel& m,
                        const EngineCaps& caps);

// u in A^L iff A is contained in Val(u).
bool filter_contains(const DefSet& a, const FormulaPtr& u);

// A^{LL}: the smallest definable set containing A. For a finite model a
// parameter-free definable set is exactly an automorphism-invariant one, so
// the closure is the orbit closure of A under the automorphism group acting
// coordinatewise. The rank-bounded oracle below is the definitional
// cross-check for this shortcut.
DefSet logical_closure(const DefSet& a);

// Definitional oracle: the intersection of Val(u) over all formulas u of
// quantifier rank <= rank with A contained in Val(u), enumerated through
// rank-k equivalence classes of points rather than raw syntax. Feasible only
// for tiny models; throws cap_error above the configured oracle limits.
DefSet logical_closure_oracle(const DefSet& a, int rank);

// u in T^{LL} iff T^L is contained in Val(u).
bool formula_closure_contains(const std::vector<FormulaPtr>& formulas, const FormulaPtr& u,
                              const Sort& sort, const FiniteModel& m, const EngineCaps& caps);

// An H-closed filter, represented by its defining definable set under the
// one-to-one Galois correspondence; membership is decided on demand.
struct FilterHandle {
    DefSet defining;
    bool contains(const FormulaPtr& u) const { return filter_contains(defining, u); }
};

// ---------------------------------------------------------------------------
// Equational correspondence: algebraic sets and H-closed congruences
// ---------------------------------------------------------------------------

// T': the algebraic set of a system of equalities. Every formula must be an
// Equality atom.
DefSet algebraic_set_of(const std::vector<FormulaPtr>& equalities, const Sort& sort,
                        const FiniteModel& m, const EngineCaps& caps);

// (w, w') in A' iff the two terms agree on every point of A. The empty A
// yields the full congruence.
bool congruence_contains(const DefSet& a, const TermPtr& w, const TermPtr& w2);

// A'': a point lies in the closure iff every pair of term functions that
// agree everywhere on A also agree at the point; decided through the term
// function algebra of the sort. For the empty A this is the solution set of
// the full congruence (all term functions forced equal), per the Galois
// composition A'' = (A')'.
DefSet algebraic_closure(const DefSet& a);

// An H-closed congruence, represented by its algebraic set.
struct CongruenceHandle {
    DefSet defining;
    bool contains(const TermPtr& w, const TermPtr& w2) const {
        return congruence_contains(defining, w, w2);
    }
};

// ---------------------------------------------------------------------------
// The lattice of definable sets
// ---------------------------------------------------------------------------

// The complete list of Galois-closed subsets of Hom(W(X),H): all unions of
// automorphism orbits of points. Elements are listed in canonical order
// (point count, then lexicographic by smallest members); meets and joins stay
// inside the list.
struct DefinableLattice {
    const FiniteModel* model = nullptr;
    Sort sort;
    std::vector<DefSet> orbits;               // orbit id -> point set
    std::vector<int> orbit_of_point;          // point idx -> orbit id
    std::vector<DefSet> elements;             // canonical order
    std::vector<std::uint32_t> element_mask;  // orbit membership mask per element
    std::vector<int> element_by_mask;         // mask -> element index

    std::size_t size() const { return elements.size(); }
    int index_of(const DefSet& s) const;      // -1 if s is not Galois-closed
    bool leq(int i, int j) const;
    int meet(int i, int j) const;
    int join(int i, int j) const;
    int bottom() const;                        // index of the empty set
    int top() const;                           // index of the full space
};

DefinableLattice definable_lattice(const FiniteModel& m, const Sort& sort, const EngineCaps& caps);

} // namespace lge
