#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lge/galois.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// LG-types of points
// ---------------------------------------------------------------------------

// Verdict on LKer(mu) = LKer(nu). For finite models two pointed models
// satisfy the same formulas iff an isomorphism matches the points, so the
// positive witness is a carrier bijection and the negative one a separating
// formula, machine-checked before it is returned.
struct TypeVerdict {
    bool equal = false;
    std::optional<std::vector<int>> iso;    // m1 -> m2, maps mu to nu
    std::optional<FormulaPtr> separating;   // true at mu, false at nu
    int rank = 0;                           // quantifier rank of the separator
    int depth = 0;                          // its max term depth
};

TypeVerdict same_type(const FiniteModel& m1, const Point& p1, const FiniteModel& m2, const Point& p2,
                      const EngineCaps& caps);

// Duplicator wins the k-round game started at the two points. Monotone in k;
// decided exactly (the search is cut off at the rank where equivalence
// coincides with pointed isomorphism).
bool ef_equiv(const FiniteModel& m1, const Point& p1, const FiniteModel& m2, const Point& p2, int k,
              const EngineCaps& caps);

// Minimal-rank separating formula, or nullopt when the types agree.
std::optional<FormulaPtr> separating_formula(const FiniteModel& m1, const Point& p1,
                                             const FiniteModel& m2, const Point& p2,
                                             const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Isotypeness and LG-equivalence of models
// ---------------------------------------------------------------------------

// S^X(f1) = S^X(f2)? For finite models a cross-model type match forces a
// model isomorphism, so the positive witness is global; the negative witness
// is a point whose type the other model does not realize, with a formula that
// is true at the point and false on the other model's whole point space.
struct IsotypicVerdict {
    bool isotypic = false;
    std::optional<std::vector<int>> witness_iso;
    std::optional<Point> witness_point;
    std::optional<FormulaPtr> witness_formula;
    int witness_rank = 0;
};

IsotypicVerdict isotypic(const FiniteModel& m1, const FiniteModel& m2, const Sort& sort,
                         const EngineCaps& caps);

// T^{LL}-agreement for all descriptions T within the rank budget, decided
// through the joint rank-k type partition of both point spaces: agreement at
// the budget holds iff every joint class is realized in both models. A
// discrepancy is definitive at any budget; a clean pass is definitive only
// when the budget reaches the isomorphism-stabilization rank, otherwise the
// verdict stays inconclusive. Must agree with `isotypic` whenever conclusive.
struct LgVerdict {
    enum class Status { Equivalent, NotEquivalent, InconclusiveAtBudget };
    Status status = Status::InconclusiveAtBudget;
    int rank = 0;
    int depth = 0;
    std::string detail;
    // Concrete discrepancy witness: T = {generator} has u = member in exactly
    // one of the two closures T^{LL}.
    std::optional<FormulaPtr> witness_generator;
    std::optional<FormulaPtr> witness_member;
};

LgVerdict lg_equivalent(const FiniteModel& m1, const FiniteModel& m2, const Sort& sort, int rank,
                        int depth, const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Interpretation constraints on matched points
// ---------------------------------------------------------------------------

// Checks, over all term functions up to the depth bound and all relation
// symbols, that each claimed type-equal pair (mu, nu) identifies the same
// term pairs and satisfies the same relation atoms. Any violation disproves
// the claimed matching.
struct InterpretationReport {
    bool ok = true;
    std::string violation; // first violating instance
    int checked_terms = 0;
};

InterpretationReport interpretation_constraints(const FiniteModel& m1, const FiniteModel& m2,
                                                const std::vector<std::pair<Point, Point>>& pairs,
                                                int depth, const EngineCaps& caps);

} // namespace lge
