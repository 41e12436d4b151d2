#include "lge/session.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lge {

using ordered_json = nlohmann::ordered_json;

std::shared_ptr<const FiniteModel> Session::model(const std::string& ref) {
    auto it = loaded.find(ref);
    if (it != loaded.end()) return it->second;
    std::string path = ref;
    bool is_path = ref.find('/') != std::string::npos ||
                   (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json");
    if (!is_path) path = models_dir + "/" + ref + ".json";
    auto m = load_model_file(path, caps);
    loaded[ref] = m;
    return m;
}

namespace {

std::vector<ordered_json> points_json(const DefSet& a) {
    std::vector<ordered_json> out;
    for (const auto& p : a.points()) out.push_back(p.values);
    return out;
}

std::string points_line(const DefSet& a) {
    std::string out;
    for (const auto& p : a.points()) {
        out += " (";
        for (std::size_t i = 0; i < p.values.size(); ++i)
            out += (i ? "," : "") + std::to_string(p.values[i]);
        out += ")";
    }
    return out;
}

DefSet parse_point_set(const std::string& text, const FiniteModel& m, const Sort& sort,
                       const EngineCaps& caps) {
    DefSet out(m, sort, caps);
    std::stringstream ss(text);
    std::string chunk;
    while (std::getline(ss, chunk, ';')) {
        if (chunk.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<int> vals;
        std::stringstream cs(chunk);
        std::string num;
        while (std::getline(cs, num, ',')) {
            try {
                vals.push_back(std::stoi(num));
            } catch (const std::exception&) {
                throw engine_error("malformed point literal '" + chunk + "'");
            }
        }
        if (vals.size() != sort.size())
            throw sort_error("point '" + chunk + "' does not match the sort arity");
        for (int v : vals)
            if (v < 0 || v >= m.carrier())
                throw engine_error("point value out of carrier range in '" + chunk + "'");
        out.insert(vals);
    }
    return out;
}

std::vector<FormulaPtr> parse_formula_list(const std::string& text, const FiniteModel& m) {
    std::vector<FormulaPtr> out;
    std::stringstream ss(text);
    std::string chunk;
    while (std::getline(ss, chunk, ';')) {
        if (chunk.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(parse_formula(chunk, m.alg(), m.rels()));
    }
    return out;
}

std::string iso_to_string(const std::vector<int>& iso) {
    std::string out;
    for (std::size_t i = 0; i < iso.size(); ++i)
        out += (i ? "," : "") + std::to_string(i) + "->" + std::to_string(iso[i]);
    return out;
}

std::string sort_to_string(const Sort& sort) {
    std::string out;
    for (std::size_t i = 0; i < sort.size(); ++i) out += (i ? "," : "") + sort[i];
    return out;
}

} // namespace

int cmd_eval(Session& s, const std::string& model, const std::string& sort_str,
             const std::string& formula, std::ostream& out) {
    auto m = s.model(model);
    Sort sort = parse_sort(sort_str);
    FormulaPtr u = parse_formula(formula, m->alg(), m->rels());
    DefSet result = val(u, sort, *m, s.caps);
    if (s.json) {
        ordered_json j;
        j["model"] = m->name();
        j["sort"] = sort;
        j["formula"] = print_formula(u);
        j["satisfying"] = static_cast<std::uint64_t>(result.count());
        j["space"] = result.space_size();
        j["points"] = points_json(result);
        out << j.dump(2) << "\n";
    } else {
        out << result.count() << "/" << result.space_size() << " points:" << points_line(result)
            << "\n";
    }
    return 0;
}

int cmd_closure(Session& s, const std::string& model, const std::string& sort_str,
                const std::string& points, const std::string& formulas, const std::string& mode,
                std::ostream& out) {
    auto m = s.model(model);
    Sort sort = parse_sort(sort_str);
    if (mode != "logical" && mode != "algebraic")
        throw engine_error("unknown closure mode '" + mode + "' (expected logical or algebraic)");

    std::string note;
    DefSet result(*m, sort, s.caps);
    if (!formulas.empty()) {
        std::vector<FormulaPtr> t = parse_formula_list(formulas, *m);
        if (t.empty()) note = "empty description: content is the full space by convention";
        result = mode == "logical" ? definable_set_of(t, sort, *m, s.caps)
                                   : algebraic_set_of(t, sort, *m, s.caps);
    } else {
        DefSet a = parse_point_set(points, *m, sort, s.caps);
        if (a.is_empty() && mode == "algebraic")
            note = "empty input: closure of the full congruence (Galois convention)";
        else if (a.is_empty())
            note = "empty input: the empty set is Galois-closed";
        result = mode == "logical" ? logical_closure(a) : algebraic_closure(a);
    }
    if (s.json) {
        ordered_json j;
        j["model"] = m->name();
        j["sort"] = sort;
        j["mode"] = mode;
        j["closure"] = points_json(result);
        if (!note.empty()) j["note"] = note;
        out << j.dump(2) << "\n";
    } else {
        out << set_to_string(result) << "\n";
        if (!note.empty()) out << "note: " << note << "\n";
    }
    return 0;
}

int cmd_compare(Session& s, const std::string& model1, const std::string& model2,
                const std::string& sort_str, int rank, int depth, std::ostream& out) {
    auto m1 = s.model(model1);
    auto m2 = s.model(model2);
    Sort sort = parse_sort(sort_str);
    if (rank < 0) rank = m1->carrier() + m2->carrier() + static_cast<int>(sort.size());
    if (depth < 0) depth = s.caps.term_depth;

    IsotypicVerdict iso = isotypic(*m1, *m2, sort, s.caps);
    LgVerdict lg = lg_equivalent(*m1, *m2, sort, rank, depth, s.caps);

    if (s.json) {
        ordered_json j;
        j["model1"] = m1->name();
        j["model2"] = m2->name();
        j["sort"] = sort;
        j["isotypic"] = iso.isotypic;
        if (iso.witness_iso) j["witness_iso"] = *iso.witness_iso;
        if (iso.witness_point) j["witness_point"] = iso.witness_point->values;
        if (iso.witness_formula) j["witness_formula"] = print_formula(*iso.witness_formula);
        if (!iso.isotypic) j["witness_rank"] = iso.witness_rank;
        j["lg_status"] = lg.status == LgVerdict::Status::Equivalent       ? "equivalent"
                         : lg.status == LgVerdict::Status::NotEquivalent ? "not-equivalent"
                                                                         : "inconclusive-at-budget";
        j["lg_rank"] = lg.rank;
        j["lg_depth"] = lg.depth;
        j["lg_detail"] = lg.detail;
        if (lg.witness_generator) j["lg_witness_generator"] = print_formula(*lg.witness_generator);
        if (lg.witness_member) j["lg_witness_member"] = print_formula(*lg.witness_member);
        out << j.dump(2) << "\n";
    } else {
        if (iso.isotypic) {
            out << "ISOTYPIC, witness: " << iso_to_string(*iso.witness_iso) << "\n";
        } else {
            out << "NOT ISOTYPIC, witness point (" << point_to_string(iso.witness_point->values)
                << "), separating: " << print_formula(*iso.witness_formula) << "\n";
        }
        out << "LG-equivalence (rank " << lg.rank << ", depth " << lg.depth << "): "
            << (lg.status == LgVerdict::Status::Equivalent       ? "EQUIVALENT"
                : lg.status == LgVerdict::Status::NotEquivalent ? "NOT EQUIVALENT"
                                                                : "INCONCLUSIVE AT BUDGET")
            << " -- " << lg.detail << "\n";
        if (lg.witness_generator)
            out << "  T = { " << print_formula(*lg.witness_generator) << " }\n  member: "
                << print_formula(*lg.witness_member) << "\n";
    }
    bool agree = iso.isotypic == (lg.status == LgVerdict::Status::Equivalent);
    if (lg.status != LgVerdict::Status::InconclusiveAtBudget && !agree)
        throw internal_error("compare: isotypic and LG-equivalence verdicts disagree");
    return iso.isotypic ? 0 : 1;
}

int cmd_kb(Session& s, const std::string& model, const std::vector<std::string>& sort_strs,
           std::ostream& out) {
    auto m = s.model(model);
    std::vector<Sort> sorts;
    for (const auto& str : sort_strs) sorts.push_back(parse_sort(str));
    KnowledgeBase kb = build_kb(*m, sorts, s.caps);

    if (s.json) {
        ordered_json j;
        j["model"] = m->name();
        ordered_json jsorts = ordered_json::array();
        for (std::size_t i = 0; i < kb.sorts.size(); ++i) {
            const DefinableLattice& lat = kb.lattices[i];
            ordered_json js;
            js["sort"] = kb.sorts[i];
            js["orbits"] = ordered_json::array();
            for (std::size_t o = 0; o < lat.orbits.size(); ++o) {
                ordered_json jo;
                jo["points"] = points_json(lat.orbits[o]);
                jo["formula"] = print_formula(kb.orbit_formulas[i][o]);
                js["orbits"].push_back(jo);
            }
            js["elements"] = ordered_json::array();
            for (std::size_t e = 0; e < lat.size(); ++e) {
                ordered_json je;
                je["points"] = points_json(lat.elements[e]);
                // upper covers give the Hasse relation
                std::vector<int> covers;
                for (std::size_t f = 0; f < lat.size(); ++f) {
                    if (e == f || !lat.leq(static_cast<int>(e), static_cast<int>(f))) continue;
                    bool cover = true;
                    for (std::size_t g = 0; g < lat.size() && cover; ++g)
                        cover = g == e || g == f || !(lat.leq(static_cast<int>(e), static_cast<int>(g)) &&
                                                      lat.leq(static_cast<int>(g), static_cast<int>(f)));
                    if (cover) covers.push_back(static_cast<int>(f));
                }
                je["covered_by"] = covers;
                js["elements"].push_back(je);
            }
            jsorts.push_back(js);
        }
        j["sorts"] = jsorts;
        out << j.dump(2) << "\n";
    } else {
        out << "knowledge base over " << m->name() << "\n";
        for (std::size_t i = 0; i < kb.sorts.size(); ++i) {
            const DefinableLattice& lat = kb.lattices[i];
            out << "sort (" << sort_to_string(kb.sorts[i]) << "): " << lat.size()
                << " definable sets from " << lat.orbits.size() << " orbits\n";
            for (std::size_t o = 0; o < lat.orbits.size(); ++o)
                out << "  orbit " << o << " " << set_to_string(lat.orbits[o]) << "  defined by  "
                    << print_formula(kb.orbit_formulas[i][o]) << "\n";
            for (std::size_t e = 0; e < lat.size(); ++e)
                out << "  element " << e << " " << set_to_string(lat.elements[e]) << "\n";
        }
    }
    return 0;
}

int cmd_kb_iso(Session& s, const std::string& model1, const std::string& model2,
               const std::vector<std::string>& sort_strs, int depth, std::ostream& out) {
    auto m1 = s.model(model1);
    auto m2 = s.model(model2);
    std::vector<Sort> sorts;
    for (const auto& str : sort_strs) sorts.push_back(parse_sort(str));
    KnowledgeBase kb1 = build_kb(*m1, sorts, s.caps);
    KnowledgeBase kb2 = build_kb(*m2, sorts, s.caps);
    KbIsoBounds bounds;
    if (depth >= 0) bounds.morphism_depth = depth;
    KbIsoVerdict v = kb_isomorphic(kb1, kb2, bounds, s.caps);

    if (s.json) {
        ordered_json j;
        j["model1"] = m1->name();
        j["model2"] = m2->name();
        j["status"] = v.status == KbIsoVerdict::Status::Isomorphic      ? "isomorphic"
                      : v.status == KbIsoVerdict::Status::NotIsomorphic ? "not-isomorphic"
                                                                        : "unknown-at-bounds";
        j["route"] = v.route;
        if (v.alpha) j["alpha"] = *v.alpha;
        if (!v.beta.empty()) j["beta"] = v.beta;
        if (!v.obstruction.empty()) j["obstruction"] = v.obstruction;
        j["checked_cells"] = v.checked_cells;
        j["morphism_depth"] = v.morphism_depth;
        out << j.dump(2) << "\n";
    } else {
        switch (v.status) {
        case KbIsoVerdict::Status::Isomorphic:
            out << "ISOMORPHIC (" << v.route << " route), " << v.checked_cells << " cells checked\n";
            if (v.alpha) out << "  alpha: " << iso_to_string(*v.alpha) << "\n";
            break;
        case KbIsoVerdict::Status::NotIsomorphic:
            out << "NOT ISOMORPHIC: " << v.obstruction << "\n";
            break;
        case KbIsoVerdict::Status::Unknown:
            out << "UNKNOWN AT BOUNDS: " << v.obstruction << "\n";
            break;
        }
    }
    return v.status == KbIsoVerdict::Status::Isomorphic ? 0 : 1;
}

int cmd_check(Session& s, const std::string& model, const std::string& suite, const SuiteOptions& opts,
              std::ostream& out) {
    auto m = s.model(model);
    std::vector<CheckReport> reports;
    Sort pair_sort = {"x", "y"};
    std::vector<Sort> kb_sorts = {{"x"}, {"x", "y"}};
    if (suite == "halmos" || suite == "all")
        reports.push_back(run_halmos_suite(*m, pair_sort, opts, s.caps));
    if (suite == "diagrams" || suite == "all")
        reports.push_back(run_diagram_suite(*m, opts, s.caps));
    if (suite == "closures" || suite == "all")
        reports.push_back(run_closure_suite(*m, opts, s.caps));
    if (suite == "anti" || suite == "all")
        reports.push_back(run_anti_suite(*m, kb_sorts, s.caps));
    if (suite == "oracle")
        reports.push_back(run_oracle_suite(*m, kb_sorts, s.caps));
    if (suite == "all" && m->carrier() <= s.caps.oracle_max_carrier)
        reports.push_back(run_oracle_suite(*m, kb_sorts, s.caps));
    if (reports.empty()) throw engine_error("unknown suite '" + suite + "'");

    bool all_pass = true;
    if (s.json) {
        ordered_json j;
        j["model"] = m->name();
        j["suites"] = ordered_json::array();
        for (const auto& rep : reports) {
            ordered_json jr;
            jr["suite"] = rep.suite;
            jr["checks"] = ordered_json::array();
            for (const auto& line : rep.lines) {
                jr["checks"].push_back(
                    {{"name", line.name}, {"pass", line.pass}, {"detail", line.detail}});
                all_pass = all_pass && line.pass;
            }
            j["suites"].push_back(jr);
        }
        j["pass"] = all_pass;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& rep : reports)
            for (const auto& line : rep.lines) {
                out << (line.pass ? "[PASS] " : "[FAIL] ") << rep.suite << ": " << line.name << " ("
                    << line.detail << ")\n";
                all_pass = all_pass && line.pass;
            }
    }
    return all_pass ? 0 : 1;
}

int cmd_apply(Session& s, const std::string& model, const std::string& morphism,
              const std::string& source_sort, const std::string& target_sort,
              const std::string& formula, const std::string& points, std::ostream& out) {
    auto m = s.model(model);
    Sort source = parse_sort(source_sort);
    Sort target = parse_sort(target_sort);
    TermMorphism mor = parse_morphism(morphism, source, target, m->alg());

    ordered_json j;
    j["model"] = m->name();
    j["morphism"] = print_morphism(mor);
    std::ostringstream human;
    if (!formula.empty()) {
        FormulaPtr v = parse_formula(formula, m->alg(), m->rels());
        FormulaPtr moved = pushforward_formula(mor, v);
        j["formula"] = print_formula(v);
        j["pushforward"] = print_formula(moved);
        human << "pushforward: " << print_formula(moved) << "\n";
    }
    if (!points.empty()) {
        DefSet b0 = parse_point_set(points, *m, source, s.caps);
        DefSet pre = preimage_set(mor, b0);
        j["set"] = points_json(b0);
        j["preimage"] = points_json(pre);
        human << "preimage: " << set_to_string(pre) << "\n";
        DefSet closed = logical_closure(b0);
        if (closed == b0) {
            Diagram2Report rep = check_diagram2(mor, b0);
            j["image_closure"] = points_json(rep.b);
            j["diagram2_pass"] = rep.pass();
            human << "image closure: " << set_to_string(rep.b) << "\n";
            human << "second diagram: " << (rep.pass() ? "pass" : "FAIL") << "\n";
        }
    }
    if (s.json)
        out << j.dump(2) << "\n";
    else
        out << human.str();
    return 0;
}

} // namespace lge
