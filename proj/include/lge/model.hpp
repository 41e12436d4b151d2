#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lge/bitset.hpp"
#include "lge/caps.hpp"
#include "lge/errors.hpp"
#include "lge/syntax.hpp"

#include <nlohmann/json_fwd.hpp>

namespace lge {

// ---------------------------------------------------------------------------
// Generated subalgebras of powers of H
// ---------------------------------------------------------------------------

// The closure of seed tuples in H^A under coordinatewise operations, each
// element paired with a witness term over the seed variables. Elements appear
// in breadth-first order, so witnesses have minimal depth with a fixed
// deterministic tie-break (operations in signature order, argument tuples in
// ascending element order).
struct GeneratedSubalgebra {
    std::vector<std::string> seed_vars;
    std::vector<std::string> op_names; // copied from the signature, for witnesses
    std::vector<std::vector<int>> elements;

    // How each element arose: a seed, or an op applied to earlier elements.
    struct Derivation {
        int seed = -1; // >= 0 for seed elements
        int op = -1;
        std::vector<int> args;
    };
    std::vector<Derivation> derivations;
    std::vector<int> depth; // witness term depth per element
    std::map<std::vector<int>, int> index;

    int index_of(const std::vector<int>& tuple) const {
        auto it = index.find(tuple);
        return it == index.end() ? -1 : it->second;
    }
    TermPtr witness(int element) const;
};

// ---------------------------------------------------------------------------
// Finite models
// ---------------------------------------------------------------------------

// A finite model (H, Psi, f): carrier {0..n-1}, one table per operation
// symbol, one dense tuple set per relation symbol. Immutable after
// construction; lazily caches its automorphism group and per-sort term
// function algebras (first access is not thread safe).
class FiniteModel {
public:
    FiniteModel(std::string name, int carrier, AlgSignature alg, RelSignature rels,
                std::vector<std::vector<int>> op_tables, std::vector<DenseSet> rel_tables);

    const std::string& name() const { return name_; }
    int carrier() const { return n_; }
    const AlgSignature& alg() const { return alg_; }
    const RelSignature& rels() const { return rels_; }

    // Table lookup; args are encoded row-major, first argument most
    // significant (same encoding as point indices).
    int op_value(int op_index, const std::vector<int>& args) const;
    bool rel_contains(int rel_index, const std::vector<int>& args) const;
    const std::vector<int>& op_table(int op_index) const { return op_tables_[static_cast<std::size_t>(op_index)]; }
    const DenseSet& rel_table(int rel_index) const { return rel_tables_[static_cast<std::size_t>(rel_index)]; }

    bool same_signature(const FiniteModel& other) const {
        return alg_ == other.alg_ && rels_ == other.rels_;
    }

    static FiniteModel from_json(const nlohmann::json& j, const std::string& name);
    nlohmann::json to_json() const;

private:
    std::string name_;
    int n_;
    AlgSignature alg_;
    RelSignature rels_;
    std::vector<std::vector<int>> op_tables_;
    std::vector<DenseSet> rel_tables_;

    mutable std::optional<std::vector<std::vector<int>>> aut_cache_;
    mutable std::map<std::pair<Sort, int>, std::shared_ptr<const GeneratedSubalgebra>> tf_cache_;
    mutable std::map<std::tuple<Sort, int, bool>, std::vector<int>> ef_class_cache_;

    friend const std::vector<std::vector<int>>& automorphisms(const FiniteModel&);
    friend const GeneratedSubalgebra& term_function_algebra(const FiniteModel&, const Sort&,
                                                            const EngineCaps&, int);
    friend const std::vector<int>& ef_point_classes_cached(const FiniteModel&, const Sort&, int, bool,
                                                           const EngineCaps&);
};

std::shared_ptr<const FiniteModel> load_model_file(const std::string& path, const EngineCaps& caps);

// ---------------------------------------------------------------------------
// Points and point spaces
// ---------------------------------------------------------------------------

// A point of the affine space Hom(W(X),H): an assignment sort -> carrier.
struct Point {
    Sort sort;
    std::vector<int> values;
};

// Mixed-radix index of a point; the first coordinate is most significant, so
// index order is lexicographic coordinate order.
std::uint64_t point_index(const std::vector<int>& values, int carrier);
std::vector<int> point_values(std::uint64_t index, std::size_t arity, int carrier);

// n^k with the configured cap guard.
std::uint64_t space_size(const FiniteModel& m, std::size_t sort_size, const EngineCaps& caps);

// All points of Hom(W(X),H), in lexicographic coordinate order.
std::vector<Point> hom_space(const Sort& sort, const FiniteModel& m, const EngineCaps& caps);

// w^mu by structural recursion through the operation tables.
int eval_term(const TermPtr& w, const Sort& sort, const std::vector<int>& values, const FiniteModel& m);
int eval_term(const TermPtr& w, const Point& p, const FiniteModel& m);

// (w, w') in Ker(mu)?
bool kernel_contains(const Point& p, const TermPtr& w, const TermPtr& w2, const FiniteModel& m);

// ---------------------------------------------------------------------------
// Automorphisms and isomorphisms
// ---------------------------------------------------------------------------

using Automorphism = std::vector<int>; // permutation of the carrier

// Backtracking search over partial bijections with forward checking against
// the operation tables and relation tables. Results sorted canonically and
// cached on the model.
const std::vector<Automorphism>& automorphisms(const FiniteModel& m);

// Extends the partial assignment (partial[i] = image of i, or -1) to a full
// isomorphism m1 -> m2, if possible. Candidates are tried in ascending order,
// so the returned witness is deterministic.
std::optional<std::vector<int>> find_isomorphism(const FiniteModel& m1, const FiniteModel& m2,
                                                 std::vector<int> partial);
std::optional<std::vector<int>> find_isomorphism(const FiniteModel& m1, const FiniteModel& m2);

// Full table/relation verification of a claimed isomorphism.
bool is_isomorphism(const FiniteModel& m1, const FiniteModel& m2, const std::vector<int>& map);

// seeds: one (variable name, tuple over the index set) pair per generator;
// may be empty, in which case the closure is generated by the constants
// alone. index_size is the size of the index set A (must be positive) and
// every seed tuple must have exactly that length. Throws cap_error when the
// closure exceeds caps.max_subalgebra.
GeneratedSubalgebra generated_subalgebra(const FiniteModel& m, std::size_t index_size,
                                         const std::vector<std::pair<std::string, std::vector<int>>>& seeds,
                                         const EngineCaps& caps, int max_rounds = -1);

// The algebra of all term functions H^X -> H, represented as the generated
// subalgebra of H^{Hom(W(X),H)} seeded with the coordinate projections.
// Cached per (model, sort, depth); depth -1 closes to the fixpoint, a
// nonnegative depth truncates the breadth-first closure at that witness
// depth (enough for term pools without paying for the full free algebra).
const GeneratedSubalgebra& term_function_algebra(const FiniteModel& m, const Sort& sort,
                                                 const EngineCaps& caps, int max_depth = -1);

} // namespace lge
