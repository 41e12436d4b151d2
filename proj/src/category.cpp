#include "lge/category.hpp"

namespace lge {

Point pullback_point(const TermMorphism& s, const Point& mu, const FiniteModel& m) {
    if (mu.sort != s.target) throw sort_error("pullback_point: point sort must equal the target sort");
    Point nu;
    nu.sort = s.source;
    nu.values.reserve(s.source.size());
    for (const auto& img : s.images) nu.values.push_back(eval_term(img, mu.sort, mu.values, m));
    return nu;
}

DefSet image_points(const TermMorphism& s, const DefSet& a) {
    if (a.sort() != s.target) throw sort_error("image_points: set sort must equal the target sort");
    const FiniteModel& m = a.model();
    DefSet out(m, s.source, a.caps());
    for (std::size_t idx : a.bits().indices()) {
        Point mu{a.sort(), point_values(idx, a.sort().size(), m.carrier())};
        out.insert(pullback_point(s, mu, m).values);
    }
    return out;
}

DefSet preimage_set(const TermMorphism& s, const DefSet& b) {
    if (b.sort() != s.source) throw sort_error("preimage_set: set sort must equal the source sort");
    const FiniteModel& m = b.model();
    DefSet out(m, s.target, b.caps());
    std::uint64_t total = out.space_size();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Point mu{s.target, point_values(idx, s.target.size(), m.carrier())};
        if (b.contains(pullback_point(s, mu, m).values)) out.insert(idx);
    }
    return out;
}

FormulaPtr pushforward_formula(const TermMorphism& s, const FormulaPtr& v) {
    for (const auto& x : free_vars(v))
        if (sort_position(s.source, x) < 0)
            throw sort_error("pushforward_formula: free variable '" + x + "' outside the source sort");
    return substitute(s, v);
}

bool check_diagram1(const TermMorphism& s, const FormulaPtr& v, const FiniteModel& m,
                    const EngineCaps& caps) {
    DefSet lhs = val(pushforward_formula(s, v), s.target, m, caps);
    DefSet rhs = preimage_set(s, val(v, s.source, m, caps));
    return lhs == rhs;
}

bool is_s_closed(const DefSet& a, const TermMorphism& s) {
    return preimage_set(s, image_points(s, a)) == a;
}

DefSet image_closure(const TermMorphism& s, const DefSet& a, bool algebraic) {
    DefSet img = image_points(s, a);
    return algebraic ? algebraic_closure(img) : logical_closure(img);
}

FilterHandle filter_transport(const TermMorphism& s, const FilterHandle& t2) {
    DefSet pre = preimage_set(s, t2.defining);
    DefSet closed = logical_closure(pre);
    if (closed != pre)
        throw internal_error("filter_transport: preimage of a closed set was not closed");
    return FilterHandle{std::move(closed)};
}

Diagram2Report check_diagram2(const TermMorphism& s, const DefSet& b0) {
    if (b0.sort() != s.source) throw sort_error("check_diagram2: B0 must live over the source sort");
    if (logical_closure(b0) != b0)
        throw engine_error("check_diagram2: B0 is not definable; apply logical closure first");
    DefSet a0 = preimage_set(s, b0);
    DefSet b = logical_closure(image_points(s, a0));
    FilterHandle t2{b};
    FilterHandle t1 = filter_transport(s, t2);
    DefSet a = t1.defining;
    Diagram2Report report{a0, b, a, t2.defining, t1.defining, a0 == a, b.is_subset_of(b0)};
    return report;
}

} // namespace lge
