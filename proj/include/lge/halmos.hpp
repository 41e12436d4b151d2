#pragma once

#include <string>
#include <vector>

#include "lge/model.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// The extended boolean algebra Hal^X(f) of subsets of Hom(W(X),H)
// ---------------------------------------------------------------------------

// A sort-tagged subset of the point space, bit-indexed by point index.
// Boolean operands must share both the sort and the model instance.
class DefSet {
public:
    DefSet(const FiniteModel& m, Sort sort, const EngineCaps& caps);

    static DefSet empty(const FiniteModel& m, const Sort& sort, const EngineCaps& caps);
    static DefSet full(const FiniteModel& m, const Sort& sort, const EngineCaps& caps);

    const FiniteModel& model() const { return *model_; }
    const Sort& sort() const { return sort_; }
    const EngineCaps& caps() const { return caps_; }
    std::uint64_t space_size() const { return bits_.size(); }

    bool contains(std::uint64_t point_idx) const { return bits_.test(static_cast<std::size_t>(point_idx)); }
    bool contains(const std::vector<int>& values) const {
        return contains(point_index(values, model_->carrier()));
    }
    void insert(std::uint64_t point_idx) { bits_.set(static_cast<std::size_t>(point_idx)); }
    void insert(const std::vector<int>& values) { insert(point_index(values, model_->carrier())); }
    void erase(std::uint64_t point_idx) { bits_.set(static_cast<std::size_t>(point_idx), false); }

    std::size_t count() const { return bits_.count(); }
    bool is_empty() const { return bits_.none(); }
    bool is_full() const { return bits_.all(); }

    DefSet unite(const DefSet& o) const;
    DefSet intersect(const DefSet& o) const;
    DefSet complement() const;
    bool is_subset_of(const DefSet& o) const;
    friend bool operator==(const DefSet& a, const DefSet& b);
    friend bool operator!=(const DefSet& a, const DefSet& b) { return !(a == b); }

    const DenseSet& bits() const { return bits_; }
    DenseSet& bits() { return bits_; }

    // Member points in lexicographic coordinate order.
    std::vector<Point> points() const;

private:
    const FiniteModel* model_;
    Sort sort_;
    EngineCaps caps_;
    DenseSet bits_;

    void check_compatible(const DefSet& o) const;
};

// Human-readable set: "{1, 2}" for one-variable sorts, "{(0,0), (1,1)}"
// otherwise.
std::string set_to_string(const DefSet& a);
std::string point_to_string(const std::vector<int>& values);

// ---------------------------------------------------------------------------
// Quantifiers and constants
// ---------------------------------------------------------------------------

// Existential cylindrification: mu is in the result iff some nu in A agrees
// with mu on every coordinate except x. Implemented as a stride-wise OR
// smear along the x axis of the mixed-radix index.
DefSet cylindrify(const DefSet& a, const std::string& x);

// The constant [phi(w1..wm)]: all points whose term tuple lies in f(phi).
// rel_name "==" is the built-in diagonal (two terms).
DefSet constant_set(const std::string& rel_name, const std::vector<TermPtr>& terms, const Sort& sort,
                    const FiniteModel& m, const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

// Val^X(u): the set of points satisfying u. Bound variables outside X are
// handled by evaluating in the extended sort, cylindrifying there, and
// restricting back along the inclusion. The universal quantifier is always
// derived as not-exists-not.
DefSet val(const FormulaPtr& u, const Sort& sort, const FiniteModel& m, const EngineCaps& caps);

// mu in Val(u)? (logical-kernel membership)
bool satisfies(const Point& p, const FormulaPtr& u, const FiniteModel& m, const EngineCaps& caps);

// u in Th^X(f)? (holds on every point)
bool theory_contains(const FormulaPtr& u, const Sort& sort, const FiniteModel& m, const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Axiom suite
// ---------------------------------------------------------------------------

struct AxiomCheckResult {
    std::string axiom;
    int instances = 0;
    int failures = 0;
    std::string counterexample; // first failing instance, if any
};

struct AxiomCheckOptions {
    std::uint64_t seed = 1;
    int instances = 200;      // randomized instances per axiom
    int morphism_depth = 2;   // term depth for random morphism images
};

// Randomized check of the extended-boolean-algebra axioms (existential
// quantifier laws, commuting quantifiers) and of the sort-morphism axioms
// (boolean homomorphism, functoriality, the two quantifier interaction laws,
// and the atom action) on Hal^X(f). Must pass on every model; a failure
// indicates an engine bug.
std::vector<AxiomCheckResult> check_halmos_axioms(const FiniteModel& m, const Sort& sort,
                                                  const AxiomCheckOptions& opts, const EngineCaps& caps);

} // namespace lge
