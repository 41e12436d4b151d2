#pragma once

#include <string>
#include <vector>

#include "lge/kb.hpp"

namespace lge {

// One verified property with instance counts; `detail` carries grid sizes or
// the first counterexample.
struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckReport {
    std::string suite;
    std::vector<CheckLine> lines;
    bool pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int instances = 200;
    int morphism_depth = 2;
    int formula_rank = 2;
    int formula_term_depth = 2;
};

// Randomized extended-boolean-algebra and sort-morphism axioms on Hal^X(f).
CheckReport run_halmos_suite(const FiniteModel& m, const Sort& sort, const SuiteOptions& opts,
                             const EngineCaps& caps);

// The valuation-transport square on a deterministic (morphism x formula)
// grid, the second diagram on every definable set, the point-satisfaction
// equivalence, and s-closedness of definable sets.
CheckReport run_diagram_suite(const FiniteModel& m, const SuiteOptions& opts, const EngineCaps& caps);

// Closure-operator laws (extensive, monotone, idempotent / antitone) for all
// four closures on randomized instances.
CheckReport run_closure_suite(const FiniteModel& m, const SuiteOptions& opts, const EngineCaps& caps);

// The Galois maps between the description and content lattices are mutually
// inverse order-reversing bijections, element by element.
CheckReport run_anti_suite(const FiniteModel& m, const std::vector<Sort>& sorts, const EngineCaps& caps);

// Orbit closure against the rank-bounded definitional oracle, over every
// subset of the point space.
CheckReport run_oracle_suite(const FiniteModel& m, const std::vector<Sort>& sorts, const EngineCaps& caps);

} // namespace lge
