#include "lge/halmos.hpp"

#include <algorithm>

namespace lge {

// ---------------------------------------------------------------------------
// DefSet
// ---------------------------------------------------------------------------

DefSet::DefSet(const FiniteModel& m, Sort sort, const EngineCaps& caps)
    : model_(&m), sort_(std::move(sort)), caps_(caps) {
    validate_sort(sort_);
    bits_ = DenseSet(static_cast<std::size_t>(lge::space_size(m, sort_.size(), caps)));
}

DefSet DefSet::empty(const FiniteModel& m, const Sort& sort, const EngineCaps& caps) {
    return DefSet(m, sort, caps);
}

DefSet DefSet::full(const FiniteModel& m, const Sort& sort, const EngineCaps& caps) {
    DefSet s(m, sort, caps);
    s.bits_ = DenseSet(s.bits_.size(), true);
    return s;
}

void DefSet::check_compatible(const DefSet& o) const {
    if (model_ != o.model_) throw sort_error("DefSet operands belong to different models");
    if (sort_ != o.sort_) throw sort_error("DefSet operands have different sorts");
}

DefSet DefSet::unite(const DefSet& o) const {
    check_compatible(o);
    DefSet r(*this);
    r.bits_ |= o.bits_;
    return r;
}

DefSet DefSet::intersect(const DefSet& o) const {
    check_compatible(o);
    DefSet r(*this);
    r.bits_ &= o.bits_;
    return r;
}

DefSet DefSet::complement() const {
    DefSet r(*this);
    r.bits_ = bits_.complement();
    return r;
}

bool DefSet::is_subset_of(const DefSet& o) const {
    check_compatible(o);
    return bits_.is_subset_of(o.bits_);
}

bool operator==(const DefSet& a, const DefSet& b) {
    a.check_compatible(b);
    return a.bits_ == b.bits_;
}

std::vector<Point> DefSet::points() const {
    std::vector<Point> out;
    for (std::size_t idx : bits_.indices())
        out.push_back({sort_, point_values(idx, sort_.size(), model_->carrier())});
    return out;
}

std::string point_to_string(const std::vector<int>& values) {
    if (values.size() == 1) return std::to_string(values[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out + ")";
}

std::string set_to_string(const DefSet& a) {
    std::string out = "{";
    bool first = true;
    for (std::size_t idx : a.bits().indices()) {
        if (!first) out += ", ";
        first = false;
        out += point_to_string(point_values(idx, a.sort().size(), a.model().carrier()));
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Cylindrification
// ---------------------------------------------------------------------------

DefSet cylindrify(const DefSet& a, const std::string& x) {
    int pos = sort_position(a.sort(), x);
    if (pos < 0) throw sort_error("cylindrify: variable '" + x + "' not in sort");
    int n = a.model().carrier();
    std::size_t k = a.sort().size();
    std::uint64_t stride = 1;
    for (std::size_t i = pos + 1; i < k; ++i) stride *= static_cast<std::uint64_t>(n);

    DefSet out = a;
    std::uint64_t total = a.space_size();
    std::uint64_t block = stride * static_cast<std::uint64_t>(n);
    for (std::uint64_t base = 0; base < total; base += block) {
        for (std::uint64_t off = 0; off < stride; ++off) {
            bool any = false;
            for (int t = 0; t < n && !any; ++t)
                any = a.contains(base + off + static_cast<std::uint64_t>(t) * stride);
            if (any)
                for (int t = 0; t < n; ++t) out.insert(base + off + static_cast<std::uint64_t>(t) * stride);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

DefSet constant_set(const std::string& rel_name, const std::vector<TermPtr>& terms, const Sort& sort,
                    const FiniteModel& m, const EngineCaps& caps) {
    for (const auto& t : terms)
        for (const auto& v : term_vars(t))
            if (sort_position(sort, v) < 0)
                throw sort_error("term variable '" + v + "' outside the sort");

    int rel = -1;
    if (rel_name != "==") {
        rel = m.rels().index_of(rel_name);
        if (rel < 0) throw sort_error("unknown relation symbol '" + rel_name + "'");
        if (m.rels().at(rel).arity != static_cast<int>(terms.size()))
            throw sort_error("relation '" + rel_name + "' arity mismatch");
    } else if (terms.size() != 2) {
        throw sort_error("equality takes exactly two terms");
    }

    DefSet out(m, sort, caps);
    std::uint64_t total = out.space_size();
    std::vector<int> values(sort.size());
    std::vector<int> tuple(terms.size());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        values = point_values(idx, sort.size(), m.carrier());
        for (std::size_t i = 0; i < terms.size(); ++i) tuple[i] = eval_term(terms[i], sort, values, m);
        bool sat = rel < 0 ? tuple[0] == tuple[1] : m.rel_contains(rel, tuple);
        if (sat) out.insert(idx);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

namespace {

DefSet val_rec(const FormulaPtr& u, const Sort& sort, const FiniteModel& m, const EngineCaps& caps) {
    switch (u->kind()) {
    case Formula::Kind::Equal:
        return constant_set("==", u->terms(), sort, m, caps);
    case Formula::Kind::RelAtom:
        return constant_set(u->rel_name(), u->terms(), sort, m, caps);
    case Formula::Kind::Not:
        return val_rec(u->child(), sort, m, caps).complement();
    case Formula::Kind::And:
        return val_rec(u->child(0), sort, m, caps).intersect(val_rec(u->child(1), sort, m, caps));
    case Formula::Kind::Or:
        return val_rec(u->child(0), sort, m, caps).unite(val_rec(u->child(1), sort, m, caps));
    case Formula::Kind::Forall:
        // forall x u  ==  !(exists x !u), always derived
        return val_rec(Formula::lnot(Formula::exists(u->var(), Formula::lnot(u->child()))), sort, m, caps);
    case Formula::Kind::Exists: {
        const std::string& x = u->var();
        if (sort_position(sort, x) >= 0) return cylindrify(val_rec(u->child(), sort, m, caps), x);
        // Bound variable outside the sort: evaluate in the extended sort,
        // cylindrify there, pull back along the inclusion. The smeared set
        // is independent of the added coordinate, so restriction fixes it
        // to zero.
        Sort ext = sort;
        ext.push_back(x);
        DefSet smeared = cylindrify(val_rec(u->child(), ext, m, caps), x);
        DefSet out(m, sort, caps);
        std::uint64_t total = out.space_size();
        int n = m.carrier();
        for (std::uint64_t idx = 0; idx < total; ++idx)
            if (smeared.contains(idx * static_cast<std::uint64_t>(n))) out.insert(idx);
        return out;
    }
    }
    throw internal_error("val: unhandled formula kind");
}

} // namespace

DefSet val(const FormulaPtr& u, const Sort& sort, const FiniteModel& m, const EngineCaps& caps) {
    validate_sort(sort);
    for (const auto& v : free_vars(u))
        if (sort_position(sort, v) < 0) throw sort_error("free variable '" + v + "' outside the sort");
    return val_rec(u, sort, m, caps);
}

bool satisfies(const Point& p, const FormulaPtr& u, const FiniteModel& m, const EngineCaps& caps) {
    DefSet s = val(u, p.sort, m, caps);
    return s.contains(p.values);
}

bool theory_contains(const FormulaPtr& u, const Sort& sort, const FiniteModel& m, const EngineCaps& caps) {
    return val(u, sort, m, caps).is_full();
}

} // namespace lge
