#pragma once

#include <random>
#include <vector>

#include "lge/halmos.hpp"

namespace lge {

// Representatives of the term functions of a sort, up to the given depth:
// one minimal-depth witness term per distinct function, in breadth-first
// order, truncated to at most `cap` entries. Backed by the cached term
// function algebra.
std::vector<TermPtr> term_pool(const FiniteModel& m, const Sort& sort, int max_depth, std::size_t cap,
                               const EngineCaps& caps);

// All morphisms source -> terms-over-target whose images come from the
// target's term pool, in lexicographic image order, truncated to `cap`.
std::vector<TermMorphism> enumerate_morphisms(const FiniteModel& m, const Sort& source,
                                              const Sort& target, int max_depth, std::size_t cap,
                                              const EngineCaps& caps);

// A deterministic structured family of formulas over the sort: atoms over the
// term pool, their negations, binary combinations, and one or two layers of
// quantifiers, within the given rank bound. Used for exhaustive grid checks
// and as the sampling pool for randomized suites.
struct FormulaFamilyOptions {
    int max_rank = 2;
    int max_term_depth = 2;
    std::size_t max_terms = 10;   // term pool truncation
    std::size_t max_atoms = 40;   // equalities + relation atoms
    std::size_t max_boolean = 40; // binary combinations added per layer
    std::size_t max_quantified = 60;
};

std::vector<FormulaPtr> formula_family(const FiniteModel& m, const Sort& sort,
                                       const FormulaFamilyOptions& opts, const EngineCaps& caps);

// Random helpers for the property suites (always seeded by the caller).
DefSet random_defset(std::mt19937_64& rng, const FiniteModel& m, const Sort& sort,
                     const EngineCaps& caps);

TermMorphism random_morphism(std::mt19937_64& rng, const FiniteModel& m, const Sort& source,
                             const Sort& target, int max_depth, const EngineCaps& caps);

} // namespace lge
