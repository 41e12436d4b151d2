#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lge/model.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Atomic comparison of pebbled tuples
// ---------------------------------------------------------------------------

// Two matched tuples agree on every atomic formula (equalities between terms
// and relation atoms, terms of any depth) iff the subalgebra of H1 x H2
// generated by the matched pairs and the constants is the graph of a
// bijection that also preserves the relations on all tuples it covers. The
// closure is small (at most |H1|*|H2| pairs), so this is decided exactly.
struct AtomicCompareResult {
    bool equivalent = true;
    // When inequivalent and variable names were supplied: a quantifier-free
    // formula over those names, true at the first tuple, false at the second,
    // with a minimal-depth witness under the breadth-first tie-break.
    FormulaPtr witness;
};

AtomicCompareResult atomic_compare(const FiniteModel& m1, const std::vector<int>& a,
                                   const FiniteModel& m2, const std::vector<int>& b,
                                   const std::vector<std::string>* var_names,
                                   const EngineCaps& caps);

// ---------------------------------------------------------------------------
// The k-round Ehrenfeucht-Fraisse game
// ---------------------------------------------------------------------------

// Memoized game-tree search over pairs of pebble tuples. With iso_pruning
// enabled, positions joined by a pointed isomorphism are recognized as
// Duplicator wins immediately; this keeps deep games on equivalent positions
// cheap and is sound (an isomorphism answers every Spoiler move). The
// definitional closure oracle runs with pruning disabled so that it stays
// independent of the isomorphism machinery.
class EfGame {
public:
    EfGame(const FiniteModel& m1, const FiniteModel& m2, bool iso_pruning, const EngineCaps& caps)
        : m1_(&m1), m2_(&m2), iso_pruning_(iso_pruning), caps_(caps) {}

    // Can Spoiler force an atomic difference within r extension rounds?
    bool spoiler_wins_within(const std::vector<int>& a, const std::vector<int>& b, int r);

    // Smallest r with spoiler_wins_within(a, b, r), or nullopt if Duplicator
    // survives `cap` rounds.
    std::optional<int> min_separation_rank(const std::vector<int>& a, const std::vector<int>& b, int cap);

    const FiniteModel& m1() const { return *m1_; }
    const FiniteModel& m2() const { return *m2_; }
    const EngineCaps& caps() const { return caps_; }

private:
    const FiniteModel* m1_;
    const FiniteModel* m2_;
    bool iso_pruning_;
    EngineCaps caps_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::pair<int, int>> memo_;
    // memo value: (max r known Duplicator survives, min r known Spoiler wins or INT_MAX)
};

// After `extra` further rounds every element of both carriers can be pebbled,
// so rank equivalence at this bound coincides with pointed isomorphism.
int stabilization_rank(const FiniteModel& m1, const FiniteModel& m2);

// Variable names for pebble positions: sort names first, then deterministic
// fresh names that avoid the sort and both signatures.
std::vector<std::string> position_names(const Sort& sort, std::size_t count, const FiniteModel& m1,
                                        const FiniteModel& m2);

// Separating-formula synthesis by strategy extraction: requires that Spoiler
// wins within `rank` rounds; returns a formula of quantifier rank <= rank,
// true at tuple a in m1 and false at tuple b in m2.
FormulaPtr synthesize_separation(EfGame& game, EfGame& swapped, const std::vector<int>& a,
                                 const std::vector<int>& b, int rank,
                                 const std::vector<std::string>& names);

// Rank-`rank` equivalence classes of the whole point space of one model:
// result[i] = class id of point i, class ids numbered by first occurrence.
std::vector<int> ef_point_classes(const FiniteModel& m, const Sort& sort, int rank, bool iso_pruning,
                                  const EngineCaps& caps);

// Same partition, memoized on the model (the closure oracle is called once
// per subset over the same space).
const std::vector<int>& ef_point_classes_cached(const FiniteModel& m, const Sort& sort, int rank,
                                                bool iso_pruning, const EngineCaps& caps);

} // namespace lge
