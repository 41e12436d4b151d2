#include "lge/efgame.hpp"

#include <algorithm>
#include <climits>

namespace lge {

// ---------------------------------------------------------------------------
// Atomic comparison via the pair closure
// ---------------------------------------------------------------------------

namespace {

struct PairClosure {
    // subalgebra of H1 x H2 generated by the matched pebbles and constants
    std::vector<std::pair<int, int>> pairs;
    std::vector<GeneratedSubalgebra::Derivation> derivations;
    std::vector<std::string> op_names;
    std::vector<std::string> seed_vars;

    TermPtr witness(int id) const {
        const auto& d = derivations[static_cast<std::size_t>(id)];
        if (d.seed >= 0) return Term::var(seed_vars[static_cast<std::size_t>(d.seed)]);
        std::vector<TermPtr> args;
        for (int a : d.args) args.push_back(witness(a));
        return Term::app(op_names[static_cast<std::size_t>(d.op)], std::move(args));
    }
};

// Builds the closure breadth-first and reports the first kernel violation it
// meets: two pairs sharing a first component with distinct second components
// (an equality true in m1 and false in m2), or the mirror image.
struct PairClosureResult {
    PairClosure closure;
    bool kernel_ok = true;
    int violate_i = -1, violate_j = -1; // pair ids with the collision
    bool equal_in_first = false;        // true: terms equal in m1, differ in m2
};

PairClosureResult build_pair_closure(const FiniteModel& m1, const std::vector<int>& a,
                                     const FiniteModel& m2, const std::vector<int>& b,
                                     const std::vector<std::string>* var_names) {
    PairClosureResult res;
    PairClosure& pc = res.closure;
    for (const auto& op : m1.alg().symbols()) pc.op_names.push_back(op.name);

    std::map<std::pair<int, int>, int> index;
    std::map<int, int> by_first, by_second;

    auto add = [&](std::pair<int, int> p, GeneratedSubalgebra::Derivation d) -> bool {
        auto it = index.find(p);
        if (it != index.end()) return true;
        int id = static_cast<int>(pc.pairs.size());
        index[p] = id;
        pc.pairs.push_back(p);
        pc.derivations.push_back(std::move(d));
        if (auto f = by_first.find(p.first); f != by_first.end()) {
            res.kernel_ok = false;
            res.violate_i = f->second;
            res.violate_j = id;
            res.equal_in_first = true;
            return false;
        }
        if (auto s = by_second.find(p.second); s != by_second.end()) {
            res.kernel_ok = false;
            res.violate_i = s->second;
            res.violate_j = id;
            res.equal_in_first = false;
            return false;
        }
        by_first[p.first] = id;
        by_second[p.second] = id;
        return true;
    };

    for (std::size_t i = 0; i < a.size(); ++i) {
        pc.seed_vars.push_back(var_names ? (*var_names)[i] : "v" + std::to_string(i));
        GeneratedSubalgebra::Derivation d;
        d.seed = static_cast<int>(i);
        if (!add({a[i], b[i]}, std::move(d))) return res;
    }

    for (int round = 1;; ++round) {
        std::size_t before = pc.pairs.size();
        std::size_t count = pc.pairs.size();
        for (std::size_t op = 0; op < m1.alg().size(); ++op) {
            int arity = m1.alg().at(static_cast<int>(op)).arity;
            if (arity == 0) {
                if (round == 1) {
                    GeneratedSubalgebra::Derivation d;
                    d.op = static_cast<int>(op);
                    if (!add({m1.op_value(static_cast<int>(op), {}), m2.op_value(static_cast<int>(op), {})},
                             std::move(d)))
                        return res;
                }
                continue;
            }
            if (count == 0) continue;
            std::vector<int> sel(static_cast<std::size_t>(arity), 0);
            for (;;) {
                std::vector<int> args1(static_cast<std::size_t>(arity)), args2(static_cast<std::size_t>(arity));
                for (int i = 0; i < arity; ++i) {
                    args1[static_cast<std::size_t>(i)] = pc.pairs[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].first;
                    args2[static_cast<std::size_t>(i)] = pc.pairs[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].second;
                }
                GeneratedSubalgebra::Derivation d;
                d.op = static_cast<int>(op);
                d.args = sel;
                if (!add({m1.op_value(static_cast<int>(op), args1), m2.op_value(static_cast<int>(op), args2)},
                         std::move(d)))
                    return res;
                int i = arity - 1;
                while (i >= 0) {
                    sel[static_cast<std::size_t>(i)]++;
                    if (static_cast<std::size_t>(sel[static_cast<std::size_t>(i)]) < count) break;
                    sel[static_cast<std::size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
            }
        }
        if (pc.pairs.size() == before) break;
    }
    return res;
}

} // namespace

AtomicCompareResult atomic_compare(const FiniteModel& m1, const std::vector<int>& a,
                                   const FiniteModel& m2, const std::vector<int>& b,
                                   const std::vector<std::string>* var_names, const EngineCaps& caps) {
    (void)caps;
    AtomicCompareResult out;
    PairClosureResult pcr = build_pair_closure(m1, a, m2, b, var_names);
    if (!pcr.kernel_ok) {
        out.equivalent = false;
        if (var_names) {
            TermPtr wi = pcr.closure.witness(pcr.violate_i);
            TermPtr wj = pcr.closure.witness(pcr.violate_j);
            FormulaPtr eq = Formula::equal(wi, wj);
            // make the witness true at the first tuple
            out.witness = pcr.equal_in_first ? eq : Formula::lnot(eq);
        }
        return out;
    }
    // Kernel agrees; compare relation membership on all covered tuples.
    const PairClosure& pc = pcr.closure;
    std::size_t count = pc.pairs.size();
    for (std::size_t rel = 0; rel < m1.rels().size(); ++rel) {
        int arity = m1.rels().at(static_cast<int>(rel)).arity;
        if (count == 0) continue;
        std::vector<int> sel(static_cast<std::size_t>(arity), 0);
        for (;;) {
            std::vector<int> t1(static_cast<std::size_t>(arity)), t2(static_cast<std::size_t>(arity));
            for (int i = 0; i < arity; ++i) {
                t1[static_cast<std::size_t>(i)] = pc.pairs[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].first;
                t2[static_cast<std::size_t>(i)] = pc.pairs[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].second;
            }
            bool in1 = m1.rel_contains(static_cast<int>(rel), t1);
            bool in2 = m2.rel_contains(static_cast<int>(rel), t2);
            if (in1 != in2) {
                out.equivalent = false;
                if (var_names) {
                    std::vector<TermPtr> args;
                    for (int s : sel) args.push_back(pc.witness(s));
                    FormulaPtr atom = Formula::rel(m1.rels().at(static_cast<int>(rel)).name, std::move(args));
                    out.witness = in1 ? atom : Formula::lnot(atom);
                }
                return out;
            }
            int i = arity - 1;
            while (i >= 0) {
                sel[static_cast<std::size_t>(i)]++;
                if (static_cast<std::size_t>(sel[static_cast<std::size_t>(i)]) < count) break;
                sel[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Game search
// ---------------------------------------------------------------------------

int stabilization_rank(const FiniteModel& m1, const FiniteModel& m2) {
    return m1.carrier() + m2.carrier();
}

bool EfGame::spoiler_wins_within(const std::vector<int>& a, const std::vector<int>& b, int r) {
    auto key = std::make_pair(a, b);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        bool eq = atomic_compare(*m1_, a, *m2_, b, nullptr, caps_).equivalent;
        // memo value: (max r Duplicator is known to survive, min r Spoiler is
        // known to win); atomic failures are immediate Spoiler wins.
        it = memo_.emplace(key, eq ? std::make_pair(0, INT_MAX) : std::make_pair(-1, 0)).first;
    }
    if (r >= it->second.second) return true;
    if (r <= it->second.first) return false;

    if (iso_pruning_ && m1_->same_signature(*m2_) && m1_->carrier() == m2_->carrier()) {
        std::vector<int> partial(static_cast<std::size_t>(m1_->carrier()), -1);
        bool seed_ok = true;
        for (std::size_t i = 0; i < a.size() && seed_ok; ++i) {
            int& slot = partial[static_cast<std::size_t>(a[i])];
            if (slot != -1 && slot != b[i]) seed_ok = false;
            slot = b[i];
        }
        if (seed_ok && find_isomorphism(*m1_, *m2_, partial)) {
            it->second.first = INT_MAX; // Duplicator survives every rank
            return false;
        }
    }

    std::vector<int> ea = a, eb = b;
    ea.push_back(0);
    eb.push_back(0);
    auto spoiler_move_wins = [&](bool side1, int e) {
        for (int f = 0; f < (side1 ? m2_->carrier() : m1_->carrier()); ++f) {
            ea.back() = side1 ? e : f;
            eb.back() = side1 ? f : e;
            if (!spoiler_wins_within(ea, eb, r - 1)) return false;
        }
        return true;
    };

    bool wins = false;
    for (int e = 0; e < m1_->carrier() && !wins; ++e) wins = spoiler_move_wins(true, e);
    for (int e = 0; e < m2_->carrier() && !wins; ++e) wins = spoiler_move_wins(false, e);

    it = memo_.find(key);
    if (wins)
        it->second.second = std::min(it->second.second, r);
    else
        it->second.first = std::max(it->second.first, r);
    return wins;
}

std::optional<int> EfGame::min_separation_rank(const std::vector<int>& a, const std::vector<int>& b,
                                               int cap) {
    for (int r = 0; r <= cap; ++r)
        if (spoiler_wins_within(a, b, r)) return r;
    return std::nullopt;
}

std::vector<std::string> position_names(const Sort& sort, std::size_t count, const FiniteModel& m1,
                                        const FiniteModel& m2) {
    std::vector<std::string> names(sort.begin(), sort.end());
    auto taken = [&](const std::string& n) {
        if (sort_position(sort, n) >= 0) return true;
        if (m1.alg().index_of(n) >= 0 || m1.rels().index_of(n) >= 0) return true;
        if (m2.alg().index_of(n) >= 0 || m2.rels().index_of(n) >= 0) return true;
        return n == "exists" || n == "forall";
    };
    int next = 1;
    while (names.size() < count) {
        std::string cand = "z" + std::to_string(next++);
        if (!taken(cand)) names.push_back(cand);
    }
    return names;
}

namespace {

std::vector<FormulaPtr> dedupe_formulas(std::vector<FormulaPtr> parts) {
    std::vector<FormulaPtr> out;
    std::vector<std::string> seen;
    for (auto& p : parts) {
        std::string key = print_formula(p);
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
            seen.push_back(key);
            out.push_back(std::move(p));
        }
    }
    return out;
}

} // namespace

FormulaPtr synthesize_separation(EfGame& game, EfGame& swapped, const std::vector<int>& a,
                                 const std::vector<int>& b, int rank,
                                 const std::vector<std::string>& names) {
    AtomicCompareResult atomic =
        atomic_compare(game.m1(), a, game.m2(), b, &names, game.caps());
    if (!atomic.equivalent) return atomic.witness;
    if (rank <= 0) throw internal_error("synthesize_separation: position is not separable at rank 0");

    const std::string& z = names.at(a.size());
    std::vector<int> ea = a, eb = b;
    ea.push_back(0);
    eb.push_back(0);

    // Spoiler extends in m1: the witness says "there is a z behaving unlike
    // anything in m2".
    for (int e = 0; e < game.m1().carrier(); ++e) {
        bool all = true;
        for (int f = 0; f < game.m2().carrier() && all; ++f) {
            ea.back() = e;
            eb.back() = f;
            all = game.spoiler_wins_within(ea, eb, rank - 1);
        }
        if (!all) continue;
        std::vector<FormulaPtr> parts;
        ea.back() = e;
        for (int f = 0; f < game.m2().carrier(); ++f) {
            eb.back() = f;
            parts.push_back(synthesize_separation(game, swapped, ea, eb, rank - 1, names));
        }
        return Formula::exists(z, conjoin(dedupe_formulas(std::move(parts))));
    }
    // Spoiler extends in m2: the mirrored witness holds at b, so negate it.
    for (int e = 0; e < game.m2().carrier(); ++e) {
        bool all = true;
        for (int f = 0; f < game.m1().carrier() && all; ++f) {
            ea.back() = f;
            eb.back() = e;
            all = game.spoiler_wins_within(ea, eb, rank - 1);
        }
        if (!all) continue;
        std::vector<FormulaPtr> parts;
        eb.back() = e;
        std::vector<int> sb = b;
        sb.push_back(e);
        for (int f = 0; f < game.m1().carrier(); ++f) {
            std::vector<int> sa = a;
            sa.push_back(f);
            parts.push_back(synthesize_separation(swapped, game, sb, sa, rank - 1, names));
        }
        return Formula::lnot(Formula::exists(z, conjoin(dedupe_formulas(std::move(parts)))));
    }
    throw internal_error("synthesize_separation: no winning Spoiler move at claimed rank");
}

const std::vector<int>& ef_point_classes_cached(const FiniteModel& m, const Sort& sort, int rank,
                                                bool iso_pruning, const EngineCaps& caps) {
    auto key = std::make_tuple(sort, rank, iso_pruning);
    auto it = m.ef_class_cache_.find(key);
    if (it == m.ef_class_cache_.end())
        it = m.ef_class_cache_.emplace(key, ef_point_classes(m, sort, rank, iso_pruning, caps)).first;
    return it->second;
}

std::vector<int> ef_point_classes(const FiniteModel& m, const Sort& sort, int rank, bool iso_pruning,
                                  const EngineCaps& caps) {
    std::uint64_t total = space_size(m, sort.size(), caps);
    EfGame game(m, m, iso_pruning, caps);
    std::vector<int> cls(static_cast<std::size_t>(total), -1);
    std::vector<std::vector<int>> reps;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<int> tuple = point_values(idx, sort.size(), m.carrier());
        int assigned = -1;
        for (std::size_t c = 0; c < reps.size() && assigned < 0; ++c)
            if (!game.spoiler_wins_within(tuple, reps[c], rank)) assigned = static_cast<int>(c);
        if (assigned < 0) {
            assigned = static_cast<int>(reps.size());
            reps.push_back(tuple);
        }
        cls[static_cast<std::size_t>(idx)] = assigned;
    }
    return cls;
}

} // namespace lge
