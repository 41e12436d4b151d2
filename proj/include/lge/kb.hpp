#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lge/category.hpp"
#include "lge/types.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Knowledge bases
// ---------------------------------------------------------------------------

// KB(H,Psi,f) over a finite sort family. The content side is the definable
// lattice per sort; the description side (the lattice of H-closed filters) is
// the same lattice seen through the Galois anti-isomorphism and is never
// materialized as formula sets. Each orbit carries a synthesized defining
// formula whose valuation is exactly the orbit, so every lattice element has
// a concrete description given by a finite disjunction of those.
struct KnowledgeBase {
    const FiniteModel* model = nullptr;
    std::vector<Sort> sorts;
    std::vector<DefinableLattice> lattices;
    std::vector<std::vector<FormulaPtr>> orbit_formulas; // aligned with lattices[i].orbits

    int sort_index(const Sort& sort) const;

    // A defining formula for a lattice element: the disjunction of its
    // orbits' formulas (the bottom element gets a plain contradiction).
    FormulaPtr element_formula(int sort_idx, int element) const;
};

KnowledgeBase build_kb(const FiniteModel& m, const std::vector<Sort>& sorts, const EngineCaps& caps);

// A concrete knowledge triple (X, T, A) with A = T^L.
struct KnowledgeTriple {
    Sort sort;
    std::vector<FormulaPtr> description;
    DefSet content;
};

// Ct: description to content.
KnowledgeTriple ct(const KnowledgeBase& kb, const std::vector<FormulaPtr>& description, const Sort& sort,
                   const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Lattice isomorphism
// ---------------------------------------------------------------------------

// A finite lattice given by its order relation (indices 0..size-1).
struct SmallLattice {
    int size = 0;
    std::vector<std::vector<bool>> leq;
};

SmallLattice to_small_lattice(const DefinableLattice& lat);

// Backtracking over join-irreducible elements with height/cover-degree
// invariants; returns an order isomorphism or nullopt.
std::optional<std::vector<int>> lattice_isomorphic(const SmallLattice& l1, const SmallLattice& l2);

// ---------------------------------------------------------------------------
// Isomorphism of knowledge bases
// ---------------------------------------------------------------------------

struct KbIsoBounds {
    int morphism_depth = 2;          // term depth for the naturality grid
    std::size_t max_morphisms = 24;  // per sort pair
    std::size_t max_candidates = 5000; // direct-route candidate families
};

// Verdict for the commutative-square definition of KB isomorphism. The
// isotypic route builds the witnesses from a model isomorphism and verifies
// the square on every lattice element plus naturality over the sampled
// morphism grid. Without isotypeness, sort-preserving candidate lattice
// isomorphisms are enumerated and tested against the same grid; a lattice
// invariant mismatch or the exhaustion of all candidates on a concrete
// failing cell yields a definite negative, and exceeding the candidate cap
// yields "unknown at bounds" (necessity is open, so the engine never claims
// non-isomorphism without a finite obstruction in hand).
struct KbIsoVerdict {
    enum class Status { Isomorphic, NotIsomorphic, Unknown };
    Status status = Status::Unknown;
    std::string route;                      // "isotypic" or "direct"
    std::optional<std::vector<int>> alpha;  // model isomorphism (isotypic route)
    std::vector<std::vector<int>> beta;     // per sort: element map L1 -> L2
    std::string obstruction;
    int checked_cells = 0;
    int morphism_depth = 0;
};

KbIsoVerdict kb_isomorphic(const KnowledgeBase& kb1, const KnowledgeBase& kb2, const KbIsoBounds& bounds,
                           const EngineCaps& caps);

// Per-sort orbit formulas: for each orbit, a formula whose valuation is
// exactly that orbit (synthesized from separating formulas against all points
// outside the orbit and machine-checked). Exposed for report generation.
std::vector<FormulaPtr> orbit_defining_formulas(const FiniteModel& m, const DefinableLattice& lat,
                                                const EngineCaps& caps);

} // namespace lge
