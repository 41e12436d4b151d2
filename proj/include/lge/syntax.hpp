#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lge/errors.hpp"

namespace lge {

// ---------------------------------------------------------------------------
// Signatures and sorts
// ---------------------------------------------------------------------------

struct OpSymbol {
    std::string name;
    int arity = 0; // arity 0 = constant symbol
    friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
};

// Operation symbols of the algebraic signature. Symbols are kept sorted by
// name so that two models built from the same symbol set index their tables
// identically.
class AlgSignature {
public:
    AlgSignature() = default;
    explicit AlgSignature(std::vector<OpSymbol> ops);

    int index_of(const std::string& name) const; // -1 if absent
    const OpSymbol& at(int i) const { return ops_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return ops_.size(); }
    const std::vector<OpSymbol>& symbols() const { return ops_; }

    friend bool operator==(const AlgSignature&, const AlgSignature&) = default;

private:
    std::vector<OpSymbol> ops_; // sorted by name
};

struct RelSymbol {
    std::string name;
    int arity = 1;
    friend bool operator==(const RelSymbol&, const RelSymbol&) = default;
};

// Relation symbols. The equality symbol "==" is built in, has arity 2 and is
// never listed here.
class RelSignature {
public:
    RelSignature() = default;
    explicit RelSignature(std::vector<RelSymbol> rels);

    int index_of(const std::string& name) const; // -1 if absent
    const RelSymbol& at(int i) const { return rels_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return rels_.size(); }
    const std::vector<RelSymbol>& symbols() const { return rels_; }

    friend bool operator==(const RelSignature&, const RelSignature&) = default;

private:
    std::vector<RelSymbol> rels_; // sorted by name
};

// A sort is a finite ordered list of distinct variable names; the order fixes
// the coordinate order of the point space.
using Sort = std::vector<std::string>;

int sort_position(const Sort& sort, const std::string& var); // -1 if absent
void validate_sort(const Sort& sort);                        // throws sort_error on duplicates
Sort parse_sort(const std::string& text);                    // comma-separated variable list

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
    enum class Kind { Var, App };

    static TermPtr var(std::string name);
    static TermPtr app(std::string op, std::vector<TermPtr> args);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; } // variable or operation name
    const std::vector<TermPtr>& args() const { return args_; }

private:
    Term(Kind k, std::string n, std::vector<TermPtr> a)
        : kind_(k), name_(std::move(n)), args_(std::move(a)) {}

    Kind kind_;
    std::string name_;
    std::vector<TermPtr> args_;
};

bool term_equal(const TermPtr& a, const TermPtr& b);
int term_depth(const TermPtr& t); // variables have depth 0, applications 1 + max arg depth
void collect_term_vars(const TermPtr& t, std::set<std::string>& out);
std::set<std::string> term_vars(const TermPtr& t);
std::string print_term(const TermPtr& t);

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    enum class Kind { Equal, RelAtom, Not, And, Or, Exists, Forall };

    static FormulaPtr equal(TermPtr lhs, TermPtr rhs);
    static FormulaPtr rel(std::string name, std::vector<TermPtr> args);
    static FormulaPtr lnot(FormulaPtr u);
    static FormulaPtr land(FormulaPtr u, FormulaPtr v);
    static FormulaPtr lor(FormulaPtr u, FormulaPtr v);
    static FormulaPtr exists(std::string var, FormulaPtr body);
    static FormulaPtr forall(std::string var, FormulaPtr body);

    Kind kind() const { return kind_; }
    const std::string& rel_name() const { return name_; } // RelAtom
    const std::string& var() const { return name_; }      // Exists / Forall
    const std::vector<TermPtr>& terms() const { return terms_; }
    const FormulaPtr& child(std::size_t i = 0) const { return children_[i]; }
    std::size_t child_count() const { return children_.size(); }

private:
    Formula(Kind k, std::string n, std::vector<TermPtr> t, std::vector<FormulaPtr> c)
        : kind_(k), name_(std::move(n)), terms_(std::move(t)), children_(std::move(c)) {}

    Kind kind_;
    std::string name_;
    std::vector<TermPtr> terms_;
    std::vector<FormulaPtr> children_;
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
std::set<std::string> free_vars(const FormulaPtr& u);
int quantifier_rank(const FormulaPtr& u);
int max_term_depth(const FormulaPtr& u);
std::string print_formula(const FormulaPtr& u);

// Conjunction / disjunction over a list; empty input is rejected (the formula
// algebra has no nullary connectives).
FormulaPtr conjoin(std::vector<FormulaPtr> parts);
FormulaPtr disjoin(std::vector<FormulaPtr> parts);

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

// term := var | opname "(" term ("," term)* ")" | opname        (nullary bare)
TermPtr parse_term(const std::string& text, const AlgSignature& sig);

// atom := term "==" term | relname "(" term ("," term)* ")"
// connectives: ! & |  (precedence ! > & > |), quantifiers "exists v." /
// "forall v." extend maximally to the right; parentheses allowed.
FormulaPtr parse_formula(const std::string& text, const AlgSignature& sig, const RelSignature& rels);

// ---------------------------------------------------------------------------
// Sort morphisms
// ---------------------------------------------------------------------------

// A map s : W(source) -> W(target), given by a term over the target sort for
// each source variable. Direction convention used throughout: the point map
// induced by s pulls points of the target sort back to points of the source
// sort, and set preimages go the other way (source-sort sets to target-sort
// sets). See the category module for the induced actions.
struct TermMorphism {
    Sort source;
    Sort target;
    std::vector<TermPtr> images; // images[i] corresponds to source[i]

    const TermPtr* image_of(const std::string& var) const;
    static TermMorphism identity(const Sort& sort);
};

void validate_morphism(const TermMorphism& s); // image free vars within target sort
std::string print_morphism(const TermMorphism& s);

// Morphism literal: semicolon-separated assignments "y := mul(x,x); z := e".
// Every source variable must be assigned exactly once.
TermMorphism parse_morphism(const std::string& text, const Sort& source, const Sort& target,
                            const AlgSignature& sig);

// Applies s to a term over the source sort. Throws sort_error on a variable
// that s does not map.
TermPtr apply_to_term(const TermMorphism& s, const TermPtr& t);

// Capture-avoiding substitution: atoms are rewritten through s, bound
// variables are renamed with a deterministic counter suffix whenever they
// collide with the support of a substituted term.
FormulaPtr substitute(const TermMorphism& s, const FormulaPtr& u);

// compose(s1, s2): first apply s2, then s1. Requires target(s2) == source(s1);
// substitute(compose(s1,s2), u) agrees semantically with
// substitute(s1, substitute(s2, u)).
TermMorphism compose(const TermMorphism& s1, const TermMorphism& s2);

} // namespace lge
