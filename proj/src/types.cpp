#include "lge/types.hpp"

#include <algorithm>

#include "lge/efgame.hpp"

namespace lge {

namespace {

void require_comparable(const FiniteModel& m1, const Point& p1, const FiniteModel& m2,
                        const Point& p2) {
    if (!m1.same_signature(m2)) throw signature_error("type comparison across different signatures");
    if (p1.sort != p2.sort) throw sort_error("type comparison across different sorts");
    if (p1.values.size() != p1.sort.size() || p2.values.size() != p2.sort.size())
        throw sort_error("point assignment does not match its sort");
}

std::optional<std::vector<int>> pointed_isomorphism(const FiniteModel& m1, const Point& p1,
                                                    const FiniteModel& m2, const Point& p2) {
    if (m1.carrier() != m2.carrier()) return std::nullopt;
    std::vector<int> partial(static_cast<std::size_t>(m1.carrier()), -1);
    for (std::size_t i = 0; i < p1.values.size(); ++i) {
        int& slot = partial[static_cast<std::size_t>(p1.values[i])];
        if (slot != -1 && slot != p2.values[i]) return std::nullopt;
        slot = p2.values[i];
    }
    return find_isomorphism(m1, m2, partial);
}

FormulaPtr synthesize_point_separation(const FiniteModel& m1, const Point& p1, const FiniteModel& m2,
                                       const Point& p2, const EngineCaps& caps, int* rank_out) {
    EfGame game(m1, m2, /*iso_pruning=*/true, caps);
    EfGame swapped(m2, m1, /*iso_pruning=*/true, caps);
    int cap = stabilization_rank(m1, m2);
    std::optional<int> rank = game.min_separation_rank(p1.values, p2.values, cap);
    if (!rank)
        throw internal_error("separating-formula synthesis on pointed-isomorphic points");
    std::vector<std::string> names =
        position_names(p1.sort, p1.sort.size() + static_cast<std::size_t>(*rank), m1, m2);
    FormulaPtr u = synthesize_separation(game, swapped, p1.values, p2.values, *rank, names);
    // machine-check the witness before handing it out
    if (!satisfies(p1, u, m1, caps) || satisfies(p2, u, m2, caps))
        throw internal_error("separating formula failed its satisfaction check: " + print_formula(u));
    if (rank_out) *rank_out = *rank;
    return u;
}

} // namespace

TypeVerdict same_type(const FiniteModel& m1, const Point& p1, const FiniteModel& m2, const Point& p2,
                      const EngineCaps& caps) {
    require_comparable(m1, p1, m2, p2);
    TypeVerdict v;
    if (auto iso = pointed_isomorphism(m1, p1, m2, p2)) {
        v.equal = true;
        v.iso = *iso;
        return v;
    }
    v.equal = false;
    v.separating = synthesize_point_separation(m1, p1, m2, p2, caps, &v.rank);
    v.depth = max_term_depth(*v.separating);
    return v;
}

bool ef_equiv(const FiniteModel& m1, const Point& p1, const FiniteModel& m2, const Point& p2, int k,
              const EngineCaps& caps) {
    require_comparable(m1, p1, m2, p2);
    if (k < 0) throw engine_error("ef_equiv: rank must be >= 0");
    EfGame game(m1, m2, /*iso_pruning=*/true, caps);
    return !game.spoiler_wins_within(p1.values, p2.values,
                                     std::min(k, stabilization_rank(m1, m2)));
}

std::optional<FormulaPtr> separating_formula(const FiniteModel& m1, const Point& p1,
                                             const FiniteModel& m2, const Point& p2,
                                             const EngineCaps& caps) {
    require_comparable(m1, p1, m2, p2);
    if (pointed_isomorphism(m1, p1, m2, p2)) return std::nullopt;
    return synthesize_point_separation(m1, p1, m2, p2, caps, nullptr);
}

// ---------------------------------------------------------------------------
// Isotypeness
// ---------------------------------------------------------------------------

IsotypicVerdict isotypic(const FiniteModel& m1, const FiniteModel& m2, const Sort& sort,
                         const EngineCaps& caps) {
    if (!m1.same_signature(m2)) throw signature_error("isotypic: different signatures");
    validate_sort(sort);
    space_size(m1, sort.size(), caps);
    space_size(m2, sort.size(), caps);

    IsotypicVerdict v;
    // A cross-model type match is a pointed model isomorphism, so the type
    // sets coincide exactly when the models are isomorphic; the witness
    // isomorphism then pairs every point with its partner.
    if (auto iso = find_isomorphism(m1, m2)) {
        v.isotypic = true;
        v.witness_iso = *iso;
        return v;
    }
    v.isotypic = false;

    // No point of m1 has a partner; pick the witness whose separating
    // conjunction is cheapest (rank, then size, then lex print).
    std::vector<Point> space1 = hom_space(sort, m1, caps);
    std::vector<Point> space2 = hom_space(sort, m2, caps);
    std::optional<FormulaPtr> best;
    std::optional<Point> best_point;
    int best_rank = 0;
    auto better = [&](int rank, const FormulaPtr& u) {
        if (!best) return true;
        if (rank != best_rank) return rank < best_rank;
        std::string a = print_formula(u), b = print_formula(*best);
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    };
    for (const auto& mu : space1) {
        std::vector<FormulaPtr> parts;
        std::vector<std::string> seen;
        int rank = 0;
        for (const auto& nu : space2) {
            int r = 0;
            FormulaPtr u = synthesize_point_separation(m1, mu, m2, nu, caps, &r);
            rank = std::max(rank, r);
            std::string key = print_formula(u);
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                parts.push_back(u);
            }
        }
        FormulaPtr u = conjoin(std::move(parts));
        if (better(rank, u)) {
            best = u;
            best_point = mu;
            best_rank = rank;
        }
    }
    if (!best) throw internal_error("isotypic: no witness point found for non-isomorphic models");
    // the witness must hold at the point and fail on the whole other space
    if (!satisfies(*best_point, *best, m1, caps) || !val(*best, sort, m2, caps).is_empty())
        throw internal_error("isotypic: witness formula failed its machine check");
    v.witness_point = best_point;
    v.witness_formula = best;
    v.witness_rank = best_rank;
    return v;
}

// ---------------------------------------------------------------------------
// LG-equivalence
// ---------------------------------------------------------------------------

LgVerdict lg_equivalent(const FiniteModel& m1, const FiniteModel& m2, const Sort& sort, int rank,
                        int depth, const EngineCaps& caps) {
    if (!m1.same_signature(m2)) throw signature_error("lg_equivalent: different signatures");
    validate_sort(sort);
    LgVerdict v;
    v.rank = rank;
    v.depth = depth;

    std::vector<Point> space1 = hom_space(sort, m1, caps);
    std::vector<Point> space2 = hom_space(sort, m2, caps);

    // Joint rank-k classes over the disjoint union of the two point spaces.
    struct Rep {
        int side;
        std::vector<int> values;
    };
    EfGame g11(m1, m1, true, caps), g12(m1, m2, true, caps), g22(m2, m2, true, caps);
    EfGame g21(m2, m1, true, caps);
    auto equivalent = [&](int side_a, const std::vector<int>& a, int side_b,
                          const std::vector<int>& b) {
        EfGame& g = side_a == 0 ? (side_b == 0 ? g11 : g12) : (side_b == 0 ? g21 : g22);
        return !g.spoiler_wins_within(a, b, rank);
    };
    std::vector<Rep> reps;
    std::vector<std::vector<int>> class_members[2]; // per side, per class: point indices
    for (int side = 0; side < 2; ++side) {
        const auto& space = side == 0 ? space1 : space2;
        for (std::size_t i = 0; i < space.size(); ++i) {
            int cls = -1;
            for (std::size_t c = 0; c < reps.size() && cls < 0; ++c)
                if (equivalent(side, space[i].values, reps[c].side, reps[c].values))
                    cls = static_cast<int>(c);
            if (cls < 0) {
                cls = static_cast<int>(reps.size());
                reps.push_back({side, space[i].values});
                class_members[0].emplace_back();
                class_members[1].emplace_back();
            }
            class_members[side][static_cast<std::size_t>(cls)].push_back(static_cast<int>(i));
        }
    }

    int single_sided = -1;
    for (std::size_t c = 0; c < reps.size() && single_sided < 0; ++c)
        if (class_members[0][c].empty() || class_members[1][c].empty())
            single_sided = static_cast<int>(c);

    int stab = stabilization_rank(m1, m2) + static_cast<int>(sort.size());
    if (single_sided < 0) {
        // Every joint class is realized on both sides: all descriptions in
        // the budget have equal closures in the two models.
        if (rank >= stab) {
            v.status = LgVerdict::Status::Equivalent;
            v.detail = "all " + std::to_string(reps.size()) +
                       " joint rank classes realized in both models (budget conclusive)";
            if (!find_isomorphism(m1, m2))
                throw internal_error("lg_equivalent: conclusive agreement without a model isomorphism");
        } else {
            v.status = LgVerdict::Status::InconclusiveAtBudget;
            v.detail = "no discrepancy among " + std::to_string(reps.size()) +
                       " joint classes at rank " + std::to_string(rank) +
                       " (stabilization needs " + std::to_string(stab) + ")";
        }
        return v;
    }

    // Build a concrete discrepancy: a formula pinning the single-sided class,
    // and a member formula separating the two closures.
    const Rep& rep = reps[static_cast<std::size_t>(single_sided)];
    const FiniteModel& home = rep.side == 0 ? m1 : m2;
    const FiniteModel& away = rep.side == 0 ? m2 : m1;
    Point rep_point{sort, rep.values};
    std::vector<FormulaPtr> parts;
    std::vector<std::string> seen;
    for (int side = 0; side < 2; ++side) {
        const auto& space = side == 0 ? space1 : space2;
        const FiniteModel& other = side == 0 ? m1 : m2;
        for (std::size_t i = 0; i < space.size(); ++i) {
            bool in_class = false;
            for (int member : class_members[side][static_cast<std::size_t>(single_sided)])
                if (member == static_cast<int>(i)) in_class = true;
            if (in_class) continue;
            int r = 0;
            FormulaPtr u = synthesize_point_separation(home, rep_point, other, space[i], caps, &r);
            std::string key = print_formula(u);
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                parts.push_back(u);
            }
        }
    }
    FormulaPtr generator = conjoin(std::move(parts));
    FormulaPtr member = Formula::lnot(generator);

    // verify the discrepancy through the public valuation machinery
    DefSet home_content = definable_set_of({generator}, sort, home, caps);
    DefSet away_content = definable_set_of({generator}, sort, away, caps);
    bool home_has = formula_closure_contains({generator}, member, sort, home, caps);
    bool away_has = formula_closure_contains({generator}, member, sort, away, caps);
    if (home_content.is_empty() || !away_content.is_empty() || home_has || !away_has)
        throw internal_error("lg_equivalent: discrepancy witness failed its machine check");

    v.status = LgVerdict::Status::NotEquivalent;
    v.witness_generator = generator;
    v.witness_member = member;
    v.detail = std::string("T = {generator} has T^L ") +
               (rep.side == 0 ? "nonempty in model 1, empty in model 2"
                              : "nonempty in model 2, empty in model 1") +
               "; the member formula lies in exactly one closure";
    if (rank >= stab && isotypic(m1, m2, sort, caps).isotypic)
        throw internal_error("lg_equivalent: discrepancy on isotypic models");
    return v;
}

// ---------------------------------------------------------------------------
// Interpretation constraints
// ---------------------------------------------------------------------------

InterpretationReport interpretation_constraints(const FiniteModel& m1, const FiniteModel& m2,
                                                const std::vector<std::pair<Point, Point>>& pairs,
                                                int depth, const EngineCaps& caps) {
    if (!m1.same_signature(m2)) throw signature_error("interpretation_constraints: different signatures");
    InterpretationReport rep;
    if (pairs.empty()) return rep;
    const Sort& sort = pairs[0].first.sort;
    for (const auto& [mu, nu] : pairs)
        if (mu.sort != sort || nu.sort != sort)
            throw sort_error("interpretation_constraints: mixed sorts in the pair list");

    // Terms are enumerated breadth-first and deduplicated by their value rows
    // across all listed points; distinct behaviors are what the check sees.
    struct Entry {
        TermPtr term;
        std::vector<int> row1, row2; // values at each mu / nu
    };
    std::vector<Entry> entries;
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> index;
    auto add = [&](const TermPtr& t) {
        Entry e;
        e.term = t;
        for (const auto& [mu, nu] : pairs) {
            e.row1.push_back(eval_term(t, mu, m1));
            e.row2.push_back(eval_term(t, nu, m2));
        }
        auto key = std::make_pair(e.row1, e.row2);
        if (index.count(key)) return;
        index[key] = static_cast<int>(entries.size());
        entries.push_back(std::move(e));
    };
    for (const auto& v : sort) add(Term::var(v));
    for (int d = 1; d <= depth; ++d) {
        std::size_t count = entries.size();
        for (std::size_t op = 0; op < m1.alg().size(); ++op) {
            int arity = m1.alg().at(static_cast<int>(op)).arity;
            const std::string& name = m1.alg().at(static_cast<int>(op)).name;
            if (arity == 0) {
                if (d == 1) add(Term::app(name, {}));
                continue;
            }
            if (count == 0) continue;
            std::vector<std::size_t> sel(static_cast<std::size_t>(arity), 0);
            for (;;) {
                std::vector<TermPtr> args;
                for (std::size_t s : sel) args.push_back(entries[s].term);
                add(Term::app(name, std::move(args)));
                std::size_t i = sel.size();
                bool done = true;
                while (i > 0) {
                    --i;
                    if (++sel[i] < count) {
                        done = false;
                        break;
                    }
                    sel[i] = 0;
                }
                if (done) break;
            }
        }
        (void)caps;
    }
    rep.checked_terms = static_cast<int>(entries.size());

    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i; j < entries.size(); ++j)
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                bool eq1 = entries[i].row1[p] == entries[j].row1[p];
                bool eq2 = entries[i].row2[p] == entries[j].row2[p];
                if (eq1 != eq2) {
                    rep.ok = false;
                    rep.violation = "pair " + std::to_string(p) + ": " + print_term(entries[i].term) +
                                    " == " + print_term(entries[j].term) + " holds " +
                                    (eq1 ? "in model 1 only" : "in model 2 only");
                    return rep;
                }
            }
    for (std::size_t rel = 0; rel < m1.rels().size(); ++rel) {
        int arity = m1.rels().at(static_cast<int>(rel)).arity;
        if (entries.empty()) break;
        std::vector<std::size_t> sel(static_cast<std::size_t>(arity), 0);
        for (;;) {
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                std::vector<int> t1, t2;
                for (std::size_t s : sel) {
                    t1.push_back(entries[s].row1[p]);
                    t2.push_back(entries[s].row2[p]);
                }
                if (m1.rel_contains(static_cast<int>(rel), t1) != m2.rel_contains(static_cast<int>(rel), t2)) {
                    rep.ok = false;
                    std::string atom = m1.rels().at(static_cast<int>(rel)).name + "(";
                    for (std::size_t s = 0; s < sel.size(); ++s)
                        atom += (s ? ", " : "") + print_term(entries[sel[s]].term);
                    rep.violation = "pair " + std::to_string(p) + ": " + atom + ") differs";
                    return rep;
                }
            }
            std::size_t i = sel.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++sel[i] < entries.size()) {
                    done = false;
                    break;
                }
                sel[i] = 0;
            }
            if (done) break;
        }
    }
    return rep;
}

} // namespace lge
