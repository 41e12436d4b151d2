#include "lge/model.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace lge {

// ---------------------------------------------------------------------------
// GeneratedSubalgebra
// ---------------------------------------------------------------------------

TermPtr GeneratedSubalgebra::witness(int element) const {
    const Derivation& d = derivations[static_cast<std::size_t>(element)];
    if (d.seed >= 0) return Term::var(seed_vars[static_cast<std::size_t>(d.seed)]);
    std::vector<TermPtr> args;
    args.reserve(d.args.size());
    for (int a : d.args) args.push_back(witness(a));
    return Term::app(op_names[static_cast<std::size_t>(d.op)], std::move(args));
}

// ---------------------------------------------------------------------------
// FiniteModel
// ---------------------------------------------------------------------------

FiniteModel::FiniteModel(std::string name, int carrier, AlgSignature alg, RelSignature rels,
                         std::vector<std::vector<int>> op_tables, std::vector<DenseSet> rel_tables)
    : name_(std::move(name)), n_(carrier), alg_(std::move(alg)), rels_(std::move(rels)),
      op_tables_(std::move(op_tables)), rel_tables_(std::move(rel_tables)) {
    if (n_ < 1) throw model_format_error("carrier", "carrier must be >= 1");
    if (op_tables_.size() != alg_.size() || rel_tables_.size() != rels_.size())
        throw model_format_error("tables", "table count does not match signature");
}

int FiniteModel::op_value(int op_index, const std::vector<int>& args) const {
    std::uint64_t idx = point_index(args, n_);
    return op_tables_[static_cast<std::size_t>(op_index)][static_cast<std::size_t>(idx)];
}

bool FiniteModel::rel_contains(int rel_index, const std::vector<int>& args) const {
    std::uint64_t idx = point_index(args, n_);
    return rel_tables_[static_cast<std::size_t>(rel_index)].test(static_cast<std::size_t>(idx));
}

// ---------------------------------------------------------------------------
// JSON loading
// ---------------------------------------------------------------------------

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t limit,
                          const std::string& what) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > limit / base) throw cap_error(what + " exceeds configured cap");
        r *= base;
    }
    if (r > limit) throw cap_error(what + " exceeds configured cap");
    return r;
}

bool valid_symbol_name(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return s != "exists" && s != "forall";
}

} // namespace

FiniteModel FiniteModel::from_json(const nlohmann::json& j, const std::string& name) {
    if (!j.is_object()) throw model_format_error("$", "model file must be a JSON object");
    if (!j.contains("carrier") || !j.at("carrier").is_number_integer())
        throw model_format_error("carrier", "missing or non-integer carrier");
    int n = j.at("carrier").get<int>();
    if (n < 1) throw model_format_error("carrier", "carrier must be >= 1");

    std::vector<OpSymbol> op_syms;
    std::vector<RelSymbol> rel_syms;
    if (j.contains("ops")) {
        if (!j.at("ops").is_object()) throw model_format_error("ops", "must be an object");
        for (const auto& [op_name, spec] : j.at("ops").items()) {
            if (!valid_symbol_name(op_name))
                throw model_format_error("ops." + op_name, "invalid operation name");
            if (!spec.is_object() || !spec.contains("arity") || !spec.at("arity").is_number_integer())
                throw model_format_error("ops." + op_name + ".arity", "missing or non-integer arity");
            op_syms.push_back({op_name, spec.at("arity").get<int>()});
        }
    }
    if (j.contains("rels")) {
        if (!j.at("rels").is_object()) throw model_format_error("rels", "must be an object");
        for (const auto& [rel_name, spec] : j.at("rels").items()) {
            if (!valid_symbol_name(rel_name))
                throw model_format_error("rels." + rel_name, "invalid relation name");
            if (!spec.is_object() || !spec.contains("arity") || !spec.at("arity").is_number_integer())
                throw model_format_error("rels." + rel_name + ".arity", "missing or non-integer arity");
            rel_syms.push_back({rel_name, spec.at("arity").get<int>()});
        }
    }
    AlgSignature alg(op_syms);
    RelSignature rels(rel_syms);
    for (const auto& r : rels.symbols())
        if (alg.index_of(r.name) >= 0)
            throw model_format_error("rels." + r.name, "name collides with an operation symbol");

    std::vector<std::vector<int>> op_tables;
    for (const auto& op : alg.symbols()) {
        const auto& spec = j.at("ops").at(op.name);
        std::string path = "ops." + op.name + ".table";
        if (!spec.contains("table") || !spec.at("table").is_array())
            throw model_format_error(path, "missing table array");
        std::uint64_t want =
            checked_pow(static_cast<std::uint64_t>(n), static_cast<std::size_t>(op.arity),
                        std::uint64_t(1) << 28, path);
        const auto& arr = spec.at("table");
        if (arr.size() != want)
            throw model_format_error(path, "expected " + std::to_string(want) + " entries, got " +
                                               std::to_string(arr.size()));
        std::vector<int> table;
        table.reserve(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number_integer())
                throw model_format_error(path + "[" + std::to_string(i) + "]", "non-integer entry");
            int v = arr[i].get<int>();
            if (v < 0 || v >= n)
                throw model_format_error(path + "[" + std::to_string(i) + "]",
                                         "value " + std::to_string(v) + " out of range [0," +
                                             std::to_string(n) + ")");
            table.push_back(v);
        }
        op_tables.push_back(std::move(table));
    }

    std::vector<DenseSet> rel_tables;
    for (const auto& rel : rels.symbols()) {
        const auto& spec = j.at("rels").at(rel.name);
        std::string path = "rels." + rel.name + ".tuples";
        if (!spec.contains("tuples") || !spec.at("tuples").is_array())
            throw model_format_error(path, "missing tuples array");
        std::uint64_t slots =
            checked_pow(static_cast<std::uint64_t>(n), static_cast<std::size_t>(rel.arity),
                        std::uint64_t(1) << 28, path);
        DenseSet table(static_cast<std::size_t>(slots));
        const auto& arr = spec.at("tuples");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string tpath = path + "[" + std::to_string(i) + "]";
            if (!arr[i].is_array() || arr[i].size() != static_cast<std::size_t>(rel.arity))
                throw model_format_error(tpath, "expected a tuple of arity " + std::to_string(rel.arity));
            std::vector<int> tuple;
            for (std::size_t k = 0; k < arr[i].size(); ++k) {
                if (!arr[i][k].is_number_integer())
                    throw model_format_error(tpath + "[" + std::to_string(k) + "]", "non-integer entry");
                int v = arr[i][k].get<int>();
                if (v < 0 || v >= n)
                    throw model_format_error(tpath + "[" + std::to_string(k) + "]",
                                             "value " + std::to_string(v) + " out of range [0," +
                                                 std::to_string(n) + ")");
                tuple.push_back(v);
            }
            table.set(static_cast<std::size_t>(point_index(tuple, n)));
        }
        rel_tables.push_back(std::move(table));
    }

    return FiniteModel(name, n, std::move(alg), std::move(rels), std::move(op_tables),
                       std::move(rel_tables));
}

nlohmann::json FiniteModel::to_json() const {
    nlohmann::ordered_json j;
    j["carrier"] = n_;
    nlohmann::ordered_json ops = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < alg_.size(); ++i) {
        const auto& op = alg_.at(static_cast<int>(i));
        ops[op.name] = {{"arity", op.arity}, {"table", op_tables_[i]}};
    }
    j["ops"] = ops;
    nlohmann::ordered_json rels = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < rels_.size(); ++i) {
        const auto& rel = rels_.at(static_cast<int>(i));
        std::vector<std::vector<int>> tuples;
        for (std::size_t idx : rel_tables_[i].indices())
            tuples.push_back(point_values(idx, static_cast<std::size_t>(rel.arity), n_));
        rels[rel.name] = {{"arity", rel.arity}, {"tuples", tuples}};
    }
    j["rels"] = rels;
    return j;
}

std::shared_ptr<const FiniteModel> load_model_file(const std::string& path, const EngineCaps& caps) {
    std::ifstream in(path);
    if (!in) throw engine_error("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw model_format_error("$", std::string("invalid JSON: ") + e.what());
    }
    std::string stem = path;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    auto m = std::make_shared<FiniteModel>(FiniteModel::from_json(j, stem));
    if (m->carrier() > caps.max_carrier)
        throw cap_error("carrier " + std::to_string(m->carrier()) + " exceeds cap " +
                        std::to_string(caps.max_carrier));
    return m;
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

std::uint64_t point_index(const std::vector<int>& values, int carrier) {
    std::uint64_t idx = 0;
    for (int v : values) idx = idx * static_cast<std::uint64_t>(carrier) + static_cast<std::uint64_t>(v);
    return idx;
}

std::vector<int> point_values(std::uint64_t index, std::size_t arity, int carrier) {
    std::vector<int> out(arity);
    for (std::size_t i = arity; i-- > 0;) {
        out[i] = static_cast<int>(index % static_cast<std::uint64_t>(carrier));
        index /= static_cast<std::uint64_t>(carrier);
    }
    return out;
}

std::uint64_t space_size(const FiniteModel& m, std::size_t sort_size, const EngineCaps& caps) {
    return checked_pow(static_cast<std::uint64_t>(m.carrier()), sort_size, caps.max_points,
                       "point space");
}

std::vector<Point> hom_space(const Sort& sort, const FiniteModel& m, const EngineCaps& caps) {
    validate_sort(sort);
    std::uint64_t total = space_size(m, sort.size(), caps);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(total));
    for (std::uint64_t i = 0; i < total; ++i)
        out.push_back({sort, point_values(i, sort.size(), m.carrier())});
    return out;
}

int eval_term(const TermPtr& w, const Sort& sort, const std::vector<int>& values, const FiniteModel& m) {
    if (w->kind() == Term::Kind::Var) {
        int pos = sort_position(sort, w->name());
        if (pos < 0) throw sort_error("unbound variable '" + w->name() + "'");
        return values[static_cast<std::size_t>(pos)];
    }
    int op = m.alg().index_of(w->name());
    if (op < 0) throw sort_error("unknown operation symbol '" + w->name() + "'");
    std::vector<int> args;
    args.reserve(w->args().size());
    for (const auto& a : w->args()) args.push_back(eval_term(a, sort, values, m));
    return m.op_value(op, args);
}

int eval_term(const TermPtr& w, const Point& p, const FiniteModel& m) {
    return eval_term(w, p.sort, p.values, m);
}

bool kernel_contains(const Point& p, const TermPtr& w, const TermPtr& w2, const FiniteModel& m) {
    return eval_term(w, p, m) == eval_term(w2, p, m);
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

namespace {

// Per-element invariants used to order and prune candidate images: for every
// operation, how often the element appears as an output, plus relation
// membership counts per coordinate. Any isomorphism preserves these.
std::vector<std::vector<int>> element_signatures(const FiniteModel& m) {
    int n = m.carrier();
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) sig[static_cast<std::size_t>(a)] = {};
    for (std::size_t op = 0; op < m.alg().size(); ++op) {
        std::vector<int> counts(static_cast<std::size_t>(n), 0);
        for (int v : m.op_table(static_cast<int>(op))) counts[static_cast<std::size_t>(v)]++;
        for (int a = 0; a < n; ++a) sig[static_cast<std::size_t>(a)].push_back(counts[static_cast<std::size_t>(a)]);
        // diagonal value op(a,...,a) is also invariant under any automorphism
        int arity = m.alg().at(static_cast<int>(op)).arity;
        if (arity >= 1) {
            for (int a = 0; a < n; ++a) {
                std::vector<int> args(static_cast<std::size_t>(arity), a);
                sig[static_cast<std::size_t>(a)].push_back(m.op_value(static_cast<int>(op), args) == a ? 1 : 0);
            }
        }
    }
    for (std::size_t rel = 0; rel < m.rels().size(); ++rel) {
        int arity = m.rels().at(static_cast<int>(rel)).arity;
        std::vector<int> counts(static_cast<std::size_t>(n), 0);
        for (std::size_t idx : m.rel_table(static_cast<int>(rel)).indices())
            for (int v : point_values(idx, static_cast<std::size_t>(arity), n))
                counts[static_cast<std::size_t>(v)]++;
        for (int a = 0; a < n; ++a) sig[static_cast<std::size_t>(a)].push_back(counts[static_cast<std::size_t>(a)]);
    }
    return sig;
}

struct IsoSearch {
    const FiniteModel& m1;
    const FiniteModel& m2;
    std::vector<std::vector<int>> sig1, sig2;
    std::vector<int> map;  // m1 -> m2, -1 unassigned
    std::vector<bool> used; // m2 elements already taken
    std::vector<Automorphism>* collect = nullptr; // when set, gather all solutions
    std::optional<std::vector<int>> found;

    IsoSearch(const FiniteModel& a, const FiniteModel& b) : m1(a), m2(b) {
        sig1 = element_signatures(m1);
        sig2 = element_signatures(m2);
        map.assign(static_cast<std::size_t>(m1.carrier()), -1);
        used.assign(static_cast<std::size_t>(m2.carrier()), false);
    }

    // Checks every constraint whose participants are all assigned and that
    // involves element `a`: operation closure and relation membership.
    // Nullary operations participate with the empty argument tuple, which
    // forces constants to map to constants up front.
    bool consistent_after(int a) {
        int n = m1.carrier();
        for (std::size_t op = 0; op < m1.alg().size(); ++op) {
            int arity = m1.alg().at(static_cast<int>(op)).arity;
            std::uint64_t total = 1;
            for (int i = 0; i < arity; ++i) total *= static_cast<std::uint64_t>(n);
            for (std::uint64_t t = 0; t < total; ++t) {
                std::vector<int> args = point_values(t, static_cast<std::size_t>(arity), n);
                bool touches = false, all_assigned = true;
                for (int v : args) {
                    if (v == a) touches = true;
                    if (map[static_cast<std::size_t>(v)] == -1) all_assigned = false;
                }
                int out = m1.op_value(static_cast<int>(op), args);
                if (out == a) touches = true;
                if (!touches || !all_assigned) continue;
                std::vector<int> margs;
                margs.reserve(args.size());
                for (int v : args) margs.push_back(map[static_cast<std::size_t>(v)]);
                int want = m2.op_value(static_cast<int>(op), margs);
                int have = map[static_cast<std::size_t>(out)];
                if (have != -1 && have != want) return false;
                if (have == -1) {
                    // forced image; conflict with injectivity kills the branch
                    if (used[static_cast<std::size_t>(want)]) return false;
                    map[static_cast<std::size_t>(out)] = want;
                    used[static_cast<std::size_t>(want)] = true;
                    forced.push_back(out);
                    if (sig1[static_cast<std::size_t>(out)] != sig2[static_cast<std::size_t>(want)]) return false;
                    if (!consistent_after(out)) return false;
                }
            }
        }
        for (std::size_t rel = 0; rel < m1.rels().size(); ++rel) {
            int arity = m1.rels().at(static_cast<int>(rel)).arity;
            std::uint64_t total = 1;
            for (int i = 0; i < arity; ++i) total *= static_cast<std::uint64_t>(m1.carrier());
            for (std::uint64_t t = 0; t < total; ++t) {
                std::vector<int> args = point_values(t, static_cast<std::size_t>(arity), m1.carrier());
                bool touches = false, all_assigned = true;
                for (int v : args) {
                    if (v == a) touches = true;
                    if (map[static_cast<std::size_t>(v)] == -1) all_assigned = false;
                }
                if (!touches || !all_assigned) continue;
                std::vector<int> margs;
                for (int v : args) margs.push_back(map[static_cast<std::size_t>(v)]);
                if (m1.rel_contains(static_cast<int>(rel), args) !=
                    m2.rel_contains(static_cast<int>(rel), margs))
                    return false;
            }
        }
        return true;
    }

    std::vector<int> forced; // elements assigned by propagation in the current frame

    bool assign(int a, int b) {
        if (used[static_cast<std::size_t>(b)]) return false;
        if (sig1[static_cast<std::size_t>(a)] != sig2[static_cast<std::size_t>(b)]) return false;
        map[static_cast<std::size_t>(a)] = b;
        used[static_cast<std::size_t>(b)] = true;
        forced.push_back(a);
        return consistent_after(a);
    }

    void undo_to(std::size_t mark) {
        while (forced.size() > mark) {
            int a = forced.back();
            forced.pop_back();
            used[static_cast<std::size_t>(map[static_cast<std::size_t>(a)])] = false;
            map[static_cast<std::size_t>(a)] = -1;
        }
    }

    bool run() {
        int a = -1;
        for (int i = 0; i < m1.carrier(); ++i)
            if (map[static_cast<std::size_t>(i)] == -1) {
                a = i;
                break;
            }
        if (a == -1) {
            if (collect) {
                collect->push_back(map);
                return false; // keep searching for more
            }
            found = map;
            return true;
        }
        for (int b = 0; b < m2.carrier(); ++b) {
            std::size_t mark = forced.size();
            if (assign(a, b)) {
                if (run()) return true;
            }
            undo_to(mark);
        }
        return false;
    }
};

} // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteModel& m1, const FiniteModel& m2,
                                                 std::vector<int> partial) {
    if (!m1.same_signature(m2)) throw signature_error("isomorphism search across different signatures");
    if (m1.carrier() != m2.carrier()) return std::nullopt;
    IsoSearch s(m1, m2);
    for (std::size_t i = 0; i < partial.size(); ++i) {
        if (partial[i] == -1) continue;
        int a = static_cast<int>(i);
        if (s.map[i] != -1) {
            if (s.map[i] != partial[i]) return std::nullopt;
            continue;
        }
        std::size_t mark = s.forced.size();
        if (!s.assign(a, partial[i])) {
            s.undo_to(mark);
            return std::nullopt;
        }
    }
    s.run();
    return s.found;
}

std::optional<std::vector<int>> find_isomorphism(const FiniteModel& m1, const FiniteModel& m2) {
    return find_isomorphism(m1, m2, std::vector<int>(static_cast<std::size_t>(m1.carrier()), -1));
}

bool is_isomorphism(const FiniteModel& m1, const FiniteModel& m2, const std::vector<int>& map) {
    if (!m1.same_signature(m2)) return false;
    int n = m1.carrier();
    if (m2.carrier() != n || static_cast<int>(map.size()) != n) return false;
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int v : map) {
        if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)]) return false;
        hit[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t op = 0; op < m1.alg().size(); ++op) {
        int arity = m1.alg().at(static_cast<int>(op)).arity;
        std::uint64_t total = 1;
        for (int i = 0; i < arity; ++i) total *= static_cast<std::uint64_t>(n);
        for (std::uint64_t t = 0; t < total; ++t) {
            std::vector<int> args = point_values(t, static_cast<std::size_t>(arity), n);
            std::vector<int> margs;
            for (int v : args) margs.push_back(map[static_cast<std::size_t>(v)]);
            if (map[static_cast<std::size_t>(m1.op_value(static_cast<int>(op), args))] !=
                m2.op_value(static_cast<int>(op), margs))
                return false;
        }
    }
    for (std::size_t rel = 0; rel < m1.rels().size(); ++rel) {
        int arity = m1.rels().at(static_cast<int>(rel)).arity;
        std::uint64_t total = 1;
        for (int i = 0; i < arity; ++i) total *= static_cast<std::uint64_t>(n);
        for (std::uint64_t t = 0; t < total; ++t) {
            std::vector<int> args = point_values(t, static_cast<std::size_t>(arity), n);
            std::vector<int> margs;
            for (int v : args) margs.push_back(map[static_cast<std::size_t>(v)]);
            if (m1.rel_contains(static_cast<int>(rel), args) != m2.rel_contains(static_cast<int>(rel), margs))
                return false;
        }
    }
    return true;
}

const std::vector<Automorphism>& automorphisms(const FiniteModel& m) {
    if (m.aut_cache_) return *m.aut_cache_;
    IsoSearch s(m, m);
    std::vector<Automorphism> all;
    s.collect = &all;
    s.run();
    std::sort(all.begin(), all.end());
    m.aut_cache_ = std::move(all);
    return *m.aut_cache_;
}

// ---------------------------------------------------------------------------
// Generated subalgebras
// ---------------------------------------------------------------------------

GeneratedSubalgebra generated_subalgebra(const FiniteModel& m, std::size_t index_size,
                                         const std::vector<std::pair<std::string, std::vector<int>>>& seeds,
                                         const EngineCaps& caps, int max_rounds) {
    if (index_size == 0) throw engine_error("generated_subalgebra: index set must be nonempty");
    GeneratedSubalgebra out;
    for (const auto& op : m.alg().symbols()) out.op_names.push_back(op.name);

    auto add = [&](std::vector<int> tuple, GeneratedSubalgebra::Derivation d, int dep) {
        if (out.index.count(tuple)) return;
        if (out.elements.size() >= caps.max_subalgebra)
            throw cap_error("generated subalgebra exceeds cap of " + std::to_string(caps.max_subalgebra));
        int id = static_cast<int>(out.elements.size());
        out.index[tuple] = id;
        out.elements.push_back(std::move(tuple));
        out.derivations.push_back(std::move(d));
        out.depth.push_back(dep);
    };

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i].second.size() != index_size)
            throw engine_error("generated_subalgebra: seed tuple length does not match index set");
        out.seed_vars.push_back(seeds[i].first);
        GeneratedSubalgebra::Derivation d;
        d.seed = static_cast<int>(i);
        add(seeds[i].second, std::move(d), 0);
    }

    // Breadth-first closure. Round r builds every application whose deepest
    // argument has depth r-1, so each element gets a minimal-depth witness;
    // operations in signature order and argument tuples in ascending element
    // order make the witness deterministic. Constants enter at round 1.
    for (int round = 1; max_rounds < 0 || round <= max_rounds; ++round) {
        std::size_t before = out.elements.size();
        std::size_t count = out.elements.size();
        for (std::size_t op = 0; op < m.alg().size(); ++op) {
            int arity = m.alg().at(static_cast<int>(op)).arity;
            if (arity == 0) {
                if (round == 1) {
                    int c = m.op_value(static_cast<int>(op), {});
                    GeneratedSubalgebra::Derivation d;
                    d.op = static_cast<int>(op);
                    add(std::vector<int>(index_size, c), std::move(d), 1);
                }
                continue;
            }
            if (count == 0) continue;
            std::vector<int> argsel(static_cast<std::size_t>(arity), 0);
            for (;;) {
                int max_depth = 0;
                for (int a : argsel) max_depth = std::max(max_depth, out.depth[static_cast<std::size_t>(a)]);
                if (max_depth == round - 1) {
                    std::vector<int> tuple(index_size);
                    std::vector<int> args(static_cast<std::size_t>(arity));
                    for (std::size_t c = 0; c < index_size; ++c) {
                        for (int i = 0; i < arity; ++i)
                            args[static_cast<std::size_t>(i)] =
                                out.elements[static_cast<std::size_t>(argsel[static_cast<std::size_t>(i)])][c];
                        tuple[c] = m.op_value(static_cast<int>(op), args);
                    }
                    GeneratedSubalgebra::Derivation d;
                    d.op = static_cast<int>(op);
                    d.args = argsel;
                    add(std::move(tuple), std::move(d), round);
                }
                int i = arity - 1;
                while (i >= 0) {
                    argsel[static_cast<std::size_t>(i)]++;
                    if (static_cast<std::size_t>(argsel[static_cast<std::size_t>(i)]) < count) break;
                    argsel[static_cast<std::size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
            }
        }
        if (out.elements.size() == before) break;
    }
    return out;
}

const GeneratedSubalgebra& term_function_algebra(const FiniteModel& m, const Sort& sort,
                                                 const EngineCaps& caps, int max_depth) {
    auto key = std::make_pair(sort, max_depth);
    auto it = m.tf_cache_.find(key);
    if (it != m.tf_cache_.end()) return *it->second;
    std::uint64_t total = space_size(m, sort.size(), caps);
    std::vector<std::pair<std::string, std::vector<int>>> seeds;
    for (std::size_t v = 0; v < sort.size(); ++v) {
        std::vector<int> proj(static_cast<std::size_t>(total));
        for (std::uint64_t p = 0; p < total; ++p)
            proj[static_cast<std::size_t>(p)] = point_values(p, sort.size(), m.carrier())[v];
        seeds.emplace_back(sort[v], std::move(proj));
    }
    auto built = std::make_shared<GeneratedSubalgebra>(
        generated_subalgebra(m, static_cast<std::size_t>(total), seeds, caps, max_depth));
    auto [ins, ok] = m.tf_cache_.emplace(key, built);
    (void)ok;
    return *ins->second;
}

} // namespace lge
