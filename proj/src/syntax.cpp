#include "lge/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lge {

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

AlgSignature::AlgSignature(std::vector<OpSymbol> ops) : ops_(std::move(ops)) {
    std::sort(ops_.begin(), ops_.end(), [](const OpSymbol& a, const OpSymbol& b) { return a.name < b.name; });
    for (std::size_t i = 0; i + 1 < ops_.size(); ++i)
        if (ops_[i].name == ops_[i + 1].name)
            throw model_format_error("ops." + ops_[i].name, "duplicate operation symbol");
    for (const auto& op : ops_)
        if (op.arity < 0) throw model_format_error("ops." + op.name, "negative arity");
}

int AlgSignature::index_of(const std::string& name) const {
    auto it = std::lower_bound(ops_.begin(), ops_.end(), name,
                               [](const OpSymbol& op, const std::string& n) { return op.name < n; });
    if (it == ops_.end() || it->name != name) return -1;
    return static_cast<int>(it - ops_.begin());
}

RelSignature::RelSignature(std::vector<RelSymbol> rels) : rels_(std::move(rels)) {
    std::sort(rels_.begin(), rels_.end(), [](const RelSymbol& a, const RelSymbol& b) { return a.name < b.name; });
    for (std::size_t i = 0; i + 1 < rels_.size(); ++i)
        if (rels_[i].name == rels_[i + 1].name)
            throw model_format_error("rels." + rels_[i].name, "duplicate relation symbol");
    for (const auto& rel : rels_) {
        if (rel.arity < 1) throw model_format_error("rels." + rel.name, "relation arity must be >= 1");
        if (rel.name == "==") throw model_format_error("rels.==", "equality is built in and must not be listed");
    }
}

int RelSignature::index_of(const std::string& name) const {
    auto it = std::lower_bound(rels_.begin(), rels_.end(), name,
                               [](const RelSymbol& r, const std::string& n) { return r.name < n; });
    if (it == rels_.end() || it->name != name) return -1;
    return static_cast<int>(it - rels_.begin());
}

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

int sort_position(const Sort& sort, const std::string& var) {
    for (std::size_t i = 0; i < sort.size(); ++i)
        if (sort[i] == var) return static_cast<int>(i);
    return -1;
}

void validate_sort(const Sort& sort) {
    for (std::size_t i = 0; i < sort.size(); ++i)
        for (std::size_t j = i + 1; j < sort.size(); ++j)
            if (sort[i] == sort[j]) throw sort_error("duplicate variable '" + sort[i] + "' in sort");
}

Sort parse_sort(const std::string& text) {
    Sort out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    if (out.empty() && !text.empty() && text.find_first_not_of(" \t") != std::string::npos)
        throw sort_error("malformed sort '" + text + "'");
    validate_sort(out);
    return out;
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

TermPtr Term::var(std::string name) {
    return TermPtr(new Term(Kind::Var, std::move(name), {}));
}

TermPtr Term::app(std::string op, std::vector<TermPtr> args) {
    return TermPtr(new Term(Kind::App, std::move(op), std::move(args)));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind() || a->name() != b->name()) return false;
    if (a->args().size() != b->args().size()) return false;
    for (std::size_t i = 0; i < a->args().size(); ++i)
        if (!term_equal(a->args()[i], b->args()[i])) return false;
    return true;
}

int term_depth(const TermPtr& t) {
    if (t->kind() == Term::Kind::Var) return 0;
    int d = 0;
    for (const auto& a : t->args()) d = std::max(d, term_depth(a));
    return d + 1;
}

void collect_term_vars(const TermPtr& t, std::set<std::string>& out) {
    if (t->kind() == Term::Kind::Var) {
        out.insert(t->name());
        return;
    }
    for (const auto& a : t->args()) collect_term_vars(a, out);
}

std::set<std::string> term_vars(const TermPtr& t) {
    std::set<std::string> out;
    collect_term_vars(t, out);
    return out;
}

std::string print_term(const TermPtr& t) {
    if (t->kind() == Term::Kind::Var) return t->name();
    if (t->args().empty()) return t->name();
    std::string out = t->name() + "(";
    for (std::size_t i = 0; i < t->args().size(); ++i) {
        if (i) out += ", ";
        out += print_term(t->args()[i]);
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

FormulaPtr Formula::equal(TermPtr lhs, TermPtr rhs) {
    return FormulaPtr(new Formula(Kind::Equal, "", {std::move(lhs), std::move(rhs)}, {}));
}

FormulaPtr Formula::rel(std::string name, std::vector<TermPtr> args) {
    return FormulaPtr(new Formula(Kind::RelAtom, std::move(name), std::move(args), {}));
}

FormulaPtr Formula::lnot(FormulaPtr u) {
    return FormulaPtr(new Formula(Kind::Not, "", {}, {std::move(u)}));
}

FormulaPtr Formula::land(FormulaPtr u, FormulaPtr v) {
    return FormulaPtr(new Formula(Kind::And, "", {}, {std::move(u), std::move(v)}));
}

FormulaPtr Formula::lor(FormulaPtr u, FormulaPtr v) {
    return FormulaPtr(new Formula(Kind::Or, "", {}, {std::move(u), std::move(v)}));
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
    return FormulaPtr(new Formula(Kind::Exists, std::move(var), {}, {std::move(body)}));
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
    return FormulaPtr(new Formula(Kind::Forall, std::move(var), {}, {std::move(body)}));
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case Formula::Kind::Equal:
        return term_equal(a->terms()[0], b->terms()[0]) && term_equal(a->terms()[1], b->terms()[1]);
    case Formula::Kind::RelAtom: {
        if (a->rel_name() != b->rel_name() || a->terms().size() != b->terms().size()) return false;
        for (std::size_t i = 0; i < a->terms().size(); ++i)
            if (!term_equal(a->terms()[i], b->terms()[i])) return false;
        return true;
    }
    case Formula::Kind::Not:
        return formula_equal(a->child(), b->child());
    case Formula::Kind::And:
    case Formula::Kind::Or:
        return formula_equal(a->child(0), b->child(0)) && formula_equal(a->child(1), b->child(1));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        return a->var() == b->var() && formula_equal(a->child(), b->child());
    }
    return false;
}

std::set<std::string> free_vars(const FormulaPtr& u) {
    std::set<std::string> out;
    switch (u->kind()) {
    case Formula::Kind::Equal:
    case Formula::Kind::RelAtom:
        for (const auto& t : u->terms()) collect_term_vars(t, out);
        return out;
    case Formula::Kind::Not:
        return free_vars(u->child());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        out = free_vars(u->child(0));
        auto rhs = free_vars(u->child(1));
        out.insert(rhs.begin(), rhs.end());
        return out;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        out = free_vars(u->child());
        out.erase(u->var());
        return out;
    }
    return out;
}

int quantifier_rank(const FormulaPtr& u) {
    switch (u->kind()) {
    case Formula::Kind::Equal:
    case Formula::Kind::RelAtom:
        return 0;
    case Formula::Kind::Not:
        return quantifier_rank(u->child());
    case Formula::Kind::And:
    case Formula::Kind::Or:
        return std::max(quantifier_rank(u->child(0)), quantifier_rank(u->child(1)));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        return 1 + quantifier_rank(u->child());
    }
    return 0;
}

int max_term_depth(const FormulaPtr& u) {
    switch (u->kind()) {
    case Formula::Kind::Equal:
    case Formula::Kind::RelAtom: {
        int d = 0;
        for (const auto& t : u->terms()) d = std::max(d, term_depth(t));
        return d;
    }
    case Formula::Kind::Not:
        return max_term_depth(u->child());
    case Formula::Kind::And:
    case Formula::Kind::Or:
        return std::max(max_term_depth(u->child(0)), max_term_depth(u->child(1)));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        return max_term_depth(u->child());
    }
    return 0;
}

namespace {

// Precedence levels for printing: Or(1) < And(2) < Not(3); atoms never need
// parentheses, quantifiers get them whenever they are not the whole operand.
int print_level(const FormulaPtr& u) {
    switch (u->kind()) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not: return 3;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0; // always parenthesized as a subformula
    default: return 4;
    }
}

void print_rec(const FormulaPtr& u, int min_level, std::string& out) {
    bool parens = print_level(u) < min_level;
    if (parens) out += "(";
    switch (u->kind()) {
    case Formula::Kind::Equal:
        out += print_term(u->terms()[0]) + " == " + print_term(u->terms()[1]);
        break;
    case Formula::Kind::RelAtom: {
        out += u->rel_name() + "(";
        for (std::size_t i = 0; i < u->terms().size(); ++i) {
            if (i) out += ", ";
            out += print_term(u->terms()[i]);
        }
        out += ")";
        break;
    }
    case Formula::Kind::Not:
        out += "!";
        // equalities get explicit parentheses under negation; "!w == w'"
        // parses correctly but reads badly
        print_rec(u->child(), u->child()->kind() == Formula::Kind::Equal ? 5 : 4, out);
        break;
    case Formula::Kind::And:
        print_rec(u->child(0), 2, out);
        out += " & ";
        print_rec(u->child(1), 2, out);
        break;
    case Formula::Kind::Or:
        print_rec(u->child(0), 1, out);
        out += " | ";
        print_rec(u->child(1), 1, out);
        break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        out += (u->kind() == Formula::Kind::Exists ? "exists " : "forall ") + u->var() + ". ";
        print_rec(u->child(), 0, out);
        break;
    }
    if (parens) out += ")";
}

} // namespace

std::string print_formula(const FormulaPtr& u) {
    std::string out;
    print_rec(u, 0, out);
    return out;
}

FormulaPtr conjoin(std::vector<FormulaPtr> parts) {
    if (parts.empty()) throw engine_error("conjoin: empty formula list");
    FormulaPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::land(acc, parts[i]);
    return acc;
}

FormulaPtr disjoin(std::vector<FormulaPtr> parts) {
    if (parts.empty()) throw engine_error("disjoin: empty formula list");
    FormulaPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::lor(acc, parts[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Ident, LParen, RParen, Comma, EqEq, Bang, Amp, Pipe, Dot, Assign, Semi, End };
    Kind kind;
    std::string text;
    std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t pos = i;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::Kind::Ident, text.substr(i, j - i), pos});
            i = j;
        } else if (c == '(') {
            out.push_back({Token::Kind::LParen, "(", pos});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Kind::RParen, ")", pos});
            ++i;
        } else if (c == ',') {
            out.push_back({Token::Kind::Comma, ",", pos});
            ++i;
        } else if (c == '!') {
            out.push_back({Token::Kind::Bang, "!", pos});
            ++i;
        } else if (c == '&') {
            out.push_back({Token::Kind::Amp, "&", pos});
            ++i;
        } else if (c == '|') {
            out.push_back({Token::Kind::Pipe, "|", pos});
            ++i;
        } else if (c == '.') {
            out.push_back({Token::Kind::Dot, ".", pos});
            ++i;
        } else if (c == ';') {
            out.push_back({Token::Kind::Semi, ";", pos});
            ++i;
        } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '=') {
            out.push_back({Token::Kind::EqEq, "==", pos});
            i += 2;
        } else if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
            out.push_back({Token::Kind::Assign, ":=", pos});
            i += 2;
        } else {
            throw parse_error(std::string("unexpected character '") + c + "'", pos);
        }
    }
    out.push_back({Token::Kind::End, "", text.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const AlgSignature& sig, const RelSignature* rels)
        : tokens_(std::move(tokens)), sig_(sig), rels_(rels) {}

    TermPtr parse_term_all() {
        TermPtr t = term();
        expect_end();
        return t;
    }

    FormulaPtr parse_formula_all() {
        FormulaPtr u = formula();
        expect_end();
        return u;
    }

    // assignments "y := term; z := term"
    std::vector<std::pair<std::string, TermPtr>> parse_assignments() {
        std::vector<std::pair<std::string, TermPtr>> out;
        for (;;) {
            if (peek().kind == Token::Kind::End) break;
            Token name = expect(Token::Kind::Ident, "variable name");
            expect(Token::Kind::Assign, "':='");
            out.emplace_back(name.text, term());
            if (peek().kind == Token::Kind::Semi) {
                next();
                continue;
            }
            break;
        }
        expect_end();
        return out;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    Token expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k) throw parse_error("expected " + what, peek().pos);
        return next();
    }

    void expect_end() {
        if (peek().kind != Token::Kind::End) throw parse_error("unexpected trailing input", peek().pos);
    }

    bool is_keyword(const Token& t) const {
        return t.kind == Token::Kind::Ident && (t.text == "exists" || t.text == "forall");
    }

    TermPtr term() {
        Token t = expect(Token::Kind::Ident, "term");
        if (is_keyword(t)) throw parse_error("'" + t.text + "' is a reserved word", t.pos);
        int op = sig_.index_of(t.text);
        if (peek().kind == Token::Kind::LParen) {
            if (op < 0) throw parse_error("unknown operation symbol '" + t.text + "'", t.pos);
            next();
            std::vector<TermPtr> args;
            if (peek().kind != Token::Kind::RParen) {
                args.push_back(term());
                while (peek().kind == Token::Kind::Comma) {
                    next();
                    args.push_back(term());
                }
            }
            expect(Token::Kind::RParen, "')'");
            int arity = sig_.at(op).arity;
            if (static_cast<int>(args.size()) != arity)
                throw parse_error("operation '" + t.text + "' expects " + std::to_string(arity) +
                                      " arguments, got " + std::to_string(args.size()),
                                  t.pos);
            return Term::app(t.text, std::move(args));
        }
        if (op >= 0) {
            int arity = sig_.at(op).arity;
            if (arity != 0)
                throw parse_error("operation '" + t.text + "' expects " + std::to_string(arity) +
                                      " arguments, got 0",
                                  t.pos);
            return Term::app(t.text, {});
        }
        if (rels_ && rels_->index_of(t.text) >= 0)
            throw parse_error("relation symbol '" + t.text + "' used as a term", t.pos);
        return Term::var(t.text);
    }

    FormulaPtr formula() { return or_level(); }

    FormulaPtr or_level() {
        FormulaPtr u = and_level();
        while (peek().kind == Token::Kind::Pipe) {
            next();
            u = Formula::lor(u, and_level());
        }
        return u;
    }

    FormulaPtr and_level() {
        FormulaPtr u = unary();
        while (peek().kind == Token::Kind::Amp) {
            next();
            u = Formula::land(u, unary());
        }
        return u;
    }

    FormulaPtr unary() {
        if (peek().kind == Token::Kind::Bang) {
            next();
            return Formula::lnot(unary());
        }
        if (is_keyword(peek())) {
            Token kw = next();
            Token v = expect(Token::Kind::Ident, "variable after '" + kw.text + "'");
            if (is_keyword(v)) throw parse_error("'" + v.text + "' is a reserved word", v.pos);
            if (sig_.index_of(v.text) >= 0 || (rels_ && rels_->index_of(v.text) >= 0))
                throw parse_error("cannot quantify over symbol '" + v.text + "'", v.pos);
            expect(Token::Kind::Dot, "'.' after quantified variable");
            FormulaPtr body = formula(); // quantifier extends maximally right
            return kw.text == "exists" ? Formula::exists(v.text, std::move(body))
                                       : Formula::forall(v.text, std::move(body));
        }
        return primary();
    }

    FormulaPtr primary() {
        if (peek().kind == Token::Kind::LParen) {
            next();
            FormulaPtr u = formula();
            expect(Token::Kind::RParen, "')'");
            return u;
        }
        return atom();
    }

    FormulaPtr atom() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Ident && rels_ && rels_->index_of(t.text) >= 0) {
            Token name = next();
            int ri = rels_->index_of(name.text);
            expect(Token::Kind::LParen, "'(' after relation symbol");
            std::vector<TermPtr> args;
            args.push_back(term());
            while (peek().kind == Token::Kind::Comma) {
                next();
                args.push_back(term());
            }
            expect(Token::Kind::RParen, "')'");
            int arity = rels_->at(ri).arity;
            if (static_cast<int>(args.size()) != arity)
                throw parse_error("relation '" + name.text + "' expects " + std::to_string(arity) +
                                      " arguments, got " + std::to_string(args.size()),
                                  name.pos);
            return Formula::rel(name.text, std::move(args));
        }
        TermPtr lhs = term();
        expect(Token::Kind::EqEq, "'=='");
        TermPtr rhs = term();
        return Formula::equal(std::move(lhs), std::move(rhs));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const AlgSignature& sig_;
    const RelSignature* rels_;
};

} // namespace

TermPtr parse_term(const std::string& text, const AlgSignature& sig) {
    Parser p(tokenize(text), sig, nullptr);
    return p.parse_term_all();
}

FormulaPtr parse_formula(const std::string& text, const AlgSignature& sig, const RelSignature& rels) {
    Parser p(tokenize(text), sig, &rels);
    return p.parse_formula_all();
}

// ---------------------------------------------------------------------------
// Morphisms and substitution
// ---------------------------------------------------------------------------

const TermPtr* TermMorphism::image_of(const std::string& var) const {
    int i = sort_position(source, var);
    if (i < 0) return nullptr;
    return &images[static_cast<std::size_t>(i)];
}

TermMorphism TermMorphism::identity(const Sort& sort) {
    TermMorphism s;
    s.source = sort;
    s.target = sort;
    for (const auto& v : sort) s.images.push_back(Term::var(v));
    return s;
}

void validate_morphism(const TermMorphism& s) {
    validate_sort(s.source);
    validate_sort(s.target);
    if (s.images.size() != s.source.size()) throw sort_error("morphism image count does not match source sort");
    for (std::size_t i = 0; i < s.images.size(); ++i)
        for (const auto& v : term_vars(s.images[i]))
            if (sort_position(s.target, v) < 0)
                throw sort_error("image of '" + s.source[i] + "' uses variable '" + v +
                                 "' outside the target sort");
}

std::string print_morphism(const TermMorphism& s) {
    std::string out;
    for (std::size_t i = 0; i < s.source.size(); ++i) {
        if (i) out += "; ";
        out += s.source[i] + " := " + print_term(s.images[i]);
    }
    return out;
}

TermMorphism parse_morphism(const std::string& text, const Sort& source, const Sort& target,
                            const AlgSignature& sig) {
    Parser p(tokenize(text), sig, nullptr);
    auto assigns = p.parse_assignments();
    TermMorphism s;
    s.source = source;
    s.target = target;
    s.images.assign(source.size(), nullptr);
    for (const auto& [var, image] : assigns) {
        int i = sort_position(source, var);
        if (i < 0) throw sort_error("assignment to '" + var + "' outside the source sort");
        if (s.images[static_cast<std::size_t>(i)]) throw sort_error("variable '" + var + "' assigned twice");
        s.images[static_cast<std::size_t>(i)] = image;
    }
    for (std::size_t i = 0; i < s.images.size(); ++i)
        if (!s.images[i]) throw sort_error("source variable '" + source[i] + "' has no assignment");
    validate_morphism(s);
    return s;
}

namespace {

TermPtr apply_map(const std::map<std::string, TermPtr>& m, const TermPtr& t) {
    if (t->kind() == Term::Kind::Var) {
        auto it = m.find(t->name());
        if (it == m.end()) throw sort_error("unmapped free variable '" + t->name() + "'");
        return it->second;
    }
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(apply_map(m, a));
    return Term::app(t->name(), std::move(args));
}

void collect_all_vars(const FormulaPtr& u, std::set<std::string>& out) {
    switch (u->kind()) {
    case Formula::Kind::Equal:
    case Formula::Kind::RelAtom:
        for (const auto& t : u->terms()) collect_term_vars(t, out);
        return;
    case Formula::Kind::Not:
        collect_all_vars(u->child(), out);
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
        collect_all_vars(u->child(0), out);
        collect_all_vars(u->child(1), out);
        return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        out.insert(u->var());
        collect_all_vars(u->child(), out);
        return;
    }
}

struct Substituter {
    std::set<std::string> avoid; // names a fresh binder must not take

    std::string fresh(const std::string& base) {
        for (int k = 1;; ++k) {
            std::string cand = base + "_" + std::to_string(k);
            if (!avoid.count(cand)) {
                avoid.insert(cand);
                return cand;
            }
        }
    }

    FormulaPtr rec(const FormulaPtr& u, std::map<std::string, TermPtr>& m) {
        switch (u->kind()) {
        case Formula::Kind::Equal:
            return Formula::equal(apply_map(m, u->terms()[0]), apply_map(m, u->terms()[1]));
        case Formula::Kind::RelAtom: {
            std::vector<TermPtr> args;
            for (const auto& t : u->terms()) args.push_back(apply_map(m, t));
            return Formula::rel(u->rel_name(), std::move(args));
        }
        case Formula::Kind::Not:
            return Formula::lnot(rec(u->child(), m));
        case Formula::Kind::And:
            return Formula::land(rec(u->child(0), m), rec(u->child(1), m));
        case Formula::Kind::Or:
            return Formula::lor(rec(u->child(0), m), rec(u->child(1), m));
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            const std::string& y = u->var();
            // Rename iff y occurs in the support of a term substituted for a
            // variable free in the body.
            bool collide = false;
            for (const auto& v : free_vars(u->child())) {
                if (v == y) continue;
                auto it = m.find(v);
                if (it != m.end() && term_vars(it->second).count(y)) {
                    collide = true;
                    break;
                }
            }
            std::string z = collide ? fresh(y) : y;
            auto saved = m.find(y) != m.end() ? std::optional<TermPtr>(m[y]) : std::nullopt;
            m[y] = Term::var(z);
            FormulaPtr body = rec(u->child(), m);
            if (saved)
                m[y] = *saved;
            else
                m.erase(y);
            return u->kind() == Formula::Kind::Exists ? Formula::exists(z, std::move(body))
                                                      : Formula::forall(z, std::move(body));
        }
        }
        throw internal_error("substitute: unhandled formula kind");
    }
};

} // namespace

TermPtr apply_to_term(const TermMorphism& s, const TermPtr& t) {
    std::map<std::string, TermPtr> m;
    for (std::size_t i = 0; i < s.source.size(); ++i) m[s.source[i]] = s.images[i];
    return apply_map(m, t);
}

FormulaPtr substitute(const TermMorphism& s, const FormulaPtr& u) {
    Substituter sub;
    for (const auto& v : s.source) sub.avoid.insert(v);
    for (const auto& v : s.target) sub.avoid.insert(v);
    for (const auto& img : s.images)
        for (const auto& v : term_vars(img)) sub.avoid.insert(v);
    collect_all_vars(u, sub.avoid);
    std::map<std::string, TermPtr> m;
    for (std::size_t i = 0; i < s.source.size(); ++i) m[s.source[i]] = s.images[i];
    return sub.rec(u, m);
}

TermMorphism compose(const TermMorphism& s1, const TermMorphism& s2) {
    if (s2.target != s1.source) throw sort_error("compose: target of inner morphism must equal source of outer");
    TermMorphism out;
    out.source = s2.source;
    out.target = s1.target;
    for (const auto& img : s2.images) out.images.push_back(apply_to_term(s1, img));
    return out;
}

} // namespace lge
