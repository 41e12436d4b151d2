#pragma once

#include "lge/galois.hpp"

namespace lge {

// Induced actions of a sort morphism s : W(source) -> W(target).
//
// Direction table (the single most error-prone convention in this machinery):
//   s itself           source variables -> terms over the target sort
//   pullback_point     points over target -> points over source   (mu s)
//   image_points       target-sort sets  -> source-sort sets      (pointwise)
//   preimage_set       source-sort sets  -> target-sort sets      (s-tilde inverse)
//   pushforward_formula(= substitute)  source-sort formulas -> target-sort formulas
//   image_closure      target-sort closed sets -> source-sort closed sets
//   filter_transport   source-sort filters -> target-sort filters

// nu(y) = eval(s(y), mu).
Point pullback_point(const TermMorphism& s, const Point& mu, const FiniteModel& m);

// Pointwise image of a target-sort set under the point pullback.
DefSet image_points(const TermMorphism& s, const DefSet& a);

// Full preimage of a source-sort set under the point pullback.
DefSet preimage_set(const TermMorphism& s, const DefSet& b);

// Capture-avoiding substitution, with the sort preconditions checked.
FormulaPtr pushforward_formula(const TermMorphism& s, const FormulaPtr& v);

// Commutativity of valuation with transport: Val(s_* v) on the target sort
// equals the preimage of Val(v) on the source sort. Must hold for every input.
bool check_diagram1(const TermMorphism& s, const FormulaPtr& v, const FiniteModel& m,
                    const EngineCaps& caps);

// A is s-closed when preimage(image(A)) == A.
bool is_s_closed(const DefSet& a, const TermMorphism& s);

// The morphism action on closed sets: pointwise image followed by the Galois
// closure. `algebraic` selects the equational closure instead of the logical
// one (the regular-map side).
DefSet image_closure(const TermMorphism& s, const DefSet& a, bool algebraic = false);

// Transport of an H-closed filter along s: the defining set of the result is
// the preimage of the defining set (already closed; the closure application
// is an internal sanity check).
FilterHandle filter_transport(const TermMorphism& s, const FilterHandle& t2);

// The objects of the second commutative diagram, built from a definable
// source-sort set B0: A0 = preimage(B0), B = closure(image(A0)) which must
// sit inside B0, T2 = B^L, T1 = transport of T2, A = T1^L. Passing requires
// A0 == A and B within B0.
struct Diagram2Report {
    DefSet a0, b, a;
    DefSet t2_defining, t1_defining;
    bool a0_equals_a = false;
    bool b_subset_b0 = false;
    bool pass() const { return a0_equals_a && b_subset_b0; }
};

Diagram2Report check_diagram2(const TermMorphism& s, const DefSet& b0);

} // namespace lge
