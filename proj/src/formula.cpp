// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/formula.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "marshal/datatype.hpp"
#include "marshal/literal.hpp"

namespace marshal {

// --- terms -----------------------------------------------------------------

namespace {

int term_compare(const Term& a, const Term& b);

int pair_compare(const SetPair& a, const SetPair& b) {
    if (int c = term_compare(a.attr, b.attr)) return c;
    return term_compare(a.value, b.value);
}

int term_compare(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case Term::Kind::Const: {
            auto c = a.constant <=> b.constant;
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Term::Kind::ObjVar:
        case Term::Kind::SetVar:
            return a.name.compare(b.name);
        case Term::Kind::SetLit: {
            for (std::size_t i = 0; i < std::min(a.pairs.size(), b.pairs.size()); ++i)
                if (int c = pair_compare(a.pairs[i], b.pairs[i])) return c;
            return a.pairs.size() == b.pairs.size() ? 0 : (a.pairs.size() < b.pairs.size() ? -1 : 1);
        }
        case Term::Kind::Apply: {
            if (int c = a.name.compare(b.name)) return c;
            for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i)
                if (int c = term_compare(a.args[i], b.args[i])) return c;
            return a.args.size() == b.args.size() ? 0 : (a.args.size() < b.args.size() ? -1 : 1);
        }
    }
    return 0;
}

void canonicalize(std::vector<SetPair>& pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const SetPair& a, const SetPair& b) { return pair_compare(a, b) < 0; });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const SetPair& a, const SetPair& b) { return pair_compare(a, b) == 0; }),
                pairs.end());
}

}  // namespace

Term Term::constant_of(Value v) {
    Term t;
    t.kind = Kind::Const;
    t.constant = std::move(v);
    return t;
}

Term Term::obj_var(std::string name) {
    Term t;
    t.kind = Kind::ObjVar;
    t.name = std::move(name);
    return t;
}

Term Term::set_var(std::string name, bool implicit) {
    Term t;
    t.kind = Kind::SetVar;
    t.name = std::move(name);
    t.implicit = implicit;
    return t;
}

Term Term::set_literal(std::vector<SetPair> pairs) {
    Term t;
    t.kind = Kind::SetLit;
    canonicalize(pairs);
    t.pairs = std::move(pairs);
    return t;
}

Term Term::apply(std::string fn, std::vector<Term> args) {
    Term t;
    t.kind = Kind::Apply;
    t.name = std::move(fn);
    t.args = std::move(args);
    return t;
}

Term Term::set_of(const AttrSet& s) {
    std::vector<SetPair> pairs;
    pairs.reserve(s.size());
    for (const auto& [a, v] : s) pairs.push_back({constant_of(Value(a)), constant_of(v)});
    return set_literal(std::move(pairs));
}

bool Term::is_ground() const {
    switch (kind) {
        case Kind::Const: return true;
        case Kind::ObjVar:
        case Kind::SetVar: return false;
        case Kind::SetLit:
            return std::all_of(pairs.begin(), pairs.end(),
                               [](const SetPair& p) { return p.attr.is_ground() && p.value.is_ground(); });
        case Kind::Apply:
            return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
    }
    return false;
}

// --- construction ----------------------------------------------------------

Formula make_atom(Atom a, SourcePos pos) {
    Formula f;
    f.kind = FormulaKind::Atom;
    f.atom = std::move(a);
    f.pos = pos;
    return f;
}

Formula make_rel(Term predicate, Term subject, Term object, Term attrs) {
    Atom a;
    a.kind = AtomKind::Rel;
    a.predicate = std::move(predicate);
    a.args = {std::move(subject), std::move(object)};
    a.attrs = std::move(attrs);
    return make_atom(std::move(a));
}

Formula make_not(Formula f) {
    Formula n;
    n.kind = FormulaKind::Not;
    n.pos = f.pos;
    n.children.push_back(std::move(f));
    return n;
}

namespace {

Formula make_nary(FormulaKind kind, std::vector<Formula> children) {
    if (children.empty()) {
        Atom a;
        a.kind = kind == FormulaKind::And ? AtomKind::True : AtomKind::False;
        return make_atom(std::move(a));
    }
    std::vector<Formula> flat;
    for (auto& c : children) {
        if (c.kind == kind) {
            for (auto& g : c.children) flat.push_back(std::move(g));
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) return std::move(flat.front());
    Formula f;
    f.kind = kind;
    f.pos = flat.front().pos;
    f.children = std::move(flat);
    return f;
}

Formula make_quant(FormulaKind kind, std::string var, Formula body) {
    Formula f;
    f.kind = kind;
    f.var = std::move(var);
    f.pos = body.pos;
    f.children.push_back(std::move(body));
    return f;
}

}  // namespace

Formula make_and(std::vector<Formula> children) { return make_nary(FormulaKind::And, std::move(children)); }
Formula make_or(std::vector<Formula> children) { return make_nary(FormulaKind::Or, std::move(children)); }

Formula make_implies(Formula lhs, Formula rhs) {
    Formula f;
    f.kind = FormulaKind::Implies;
    f.pos = lhs.pos;
    f.children.push_back(std::move(lhs));
    f.children.push_back(std::move(rhs));
    return f;
}

Formula make_exists(std::string var, Formula body) {
    return make_quant(FormulaKind::Exists, std::move(var), std::move(body));
}

Formula make_forall(std::string var, Formula body) {
    return make_quant(FormulaKind::Forall, std::move(var), std::move(body));
}

Formula make_count_exists(Term count, std::string var, Formula body) {
    Formula f = make_quant(FormulaKind::CountExists, std::move(var), std::move(body));
    f.count = std::move(count);
    return f;
}

// --- parser ----------------------------------------------------------------

namespace {

void collect_var_tokens(const std::vector<Token>& toks, std::set<std::string>& out) {
    for (const auto& t : toks)
        if (t.kind == Tok::ObjVar || t.kind == Tok::SetVar) out.insert(t.text);
}

class FormulaParser {
public:
    FormulaParser(std::vector<Token> toks, const LabelMap& labels) : labels_(labels), cur_({}) {
        collect_var_tokens(toks, used_);
        cur_ = TokenCursor(std::move(toks));
    }

    Formula parse_all() {
        Formula f = implies();
        if (!cur_.at(Tok::End)) cur_.fail("unexpected " + std::string(tok_name(cur_.peek().kind)), {"'->'", "'&'", "'|'", "end of input"});
        return f;
    }

private:
    Formula implies() {
        Formula lhs = disjunction();
        if (cur_.accept(Tok::Arrow)) return make_implies(std::move(lhs), implies());
        return lhs;
    }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (cur_.accept(Tok::Or)) parts.push_back(conjunction());
        return parts.size() == 1 ? std::move(parts.front()) : make_or(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{unary()};
        while (cur_.accept(Tok::And)) parts.push_back(unary());
        return parts.size() == 1 ? std::move(parts.front()) : make_and(std::move(parts));
    }

    Formula unary() {
        SourcePos pos = cur_.peek().pos;
        if (cur_.accept(Tok::Not)) {
            Formula f = make_not(unary());
            f.pos = pos;
            return f;
        }
        if (cur_.at_ident("exists") || cur_.at_ident("forall")) return quantifier();
        return primary();
    }

    Formula quantifier() {
        SourcePos pos = cur_.peek().pos;
        const bool is_forall = cur_.next().text == "forall";
        std::optional<Term> count;
        if (!is_forall && cur_.accept(Tok::LBracket)) {
            if (cur_.at(Tok::ObjVar)) {
                count = var_ref(cur_.next());
            } else {
                auto num = cur_.expect(Tok::Number);
                auto d = Decimal::parse(num.text);
                auto n = d.to_int64();
                if (!n || *n < 1) throw ParseError(num.pos, "counting quantifier needs a positive integer");
                count = Term::constant_of(Value::quantity(d));
            }
            cur_.expect(Tok::RBracket);
        }
        std::vector<std::pair<std::string, std::string>> bound;
        do {
            if (!cur_.at(Tok::ObjVar) && !cur_.at(Tok::SetVar)) cur_.fail("expected a variable", {"object variable", "set variable"});
            const std::string name = cur_.next().text;
            bound.emplace_back(name, bind(name));
            scope_.emplace_back(name, bound.back().second);
        } while (cur_.accept(Tok::Comma));
        if (count && bound.size() != 1)
            throw ParseError(pos, "counting quantifier binds exactly one variable");
        cur_.expect(Tok::Dot);
        Formula body = implies();
        for (std::size_t i = 0; i < bound.size(); ++i) scope_.pop_back();
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
            if (count)
                body = make_count_exists(*count, it->second, std::move(body));
            else if (is_forall)
                body = make_forall(it->second, std::move(body));
            else
                body = make_exists(it->second, std::move(body));
            body.pos = pos;
        }
        return body;
    }

    // Bound names are kept unique along every path by renaming on shadowing.
    std::string bind(const std::string& name) {
        bool shadowed = std::any_of(scope_.begin(), scope_.end(), [&](const auto& s) { return s.first == name || s.second == name; });
        if (!shadowed) return name;
        for (int k = 1;; ++k) {
            std::string fresh = name + "_" + std::to_string(k);
            if (!used_.count(fresh)) {
                used_.insert(fresh);
                return fresh;
            }
        }
    }

    Term var_ref(const Token& t) {
        std::string name = t.text;
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == t.text) {
                name = it->second;
                break;
            }
        return t.kind == Tok::ObjVar ? Term::obj_var(name) : Term::set_var(name);
    }

    Term implicit_set() {
        for (;;) {
            std::string name = "?_A" + std::to_string(++implicit_counter_);
            if (!used_.count(name)) {
                used_.insert(name);
                return Term::set_var(name, true);
            }
        }
    }

    Formula primary() {
        SourcePos pos = cur_.peek().pos;
        if (cur_.at(Tok::LParen)) {
            if (auto f = try_set_atom()) return *f;
            cur_.next();
            Formula inner = implies();
            cur_.expect(Tok::RParen);
            return inner;
        }
        if (cur_.at_ident("true") || cur_.at_ident("false")) {
            Atom a;
            a.kind = cur_.next().text == "true" ? AtomKind::True : AtomKind::False;
            return make_atom(std::move(a), pos);
        }
        if (cur_.at(Tok::Ident) && cur_.at(Tok::LParen, 1)) {
            const std::string name = cur_.peek().text;
            if (name == kNoValuePredicate || name == kCommonsPredicate) {
                cur_.next();
                Atom a;
                a.kind = AtomKind::Rel;
                a.builtin = name;
                relational_tail(a);
                return make_atom(std::move(a), pos);
            }
            if (is_datatype_relation(name)) {
                cur_.next();
                Atom a;
                a.kind = AtomKind::DtRel;
                a.name = name;
                a.args = arguments();
                if (a.args.size() != *datatype_arity(name))
                    throw ParseError(pos, name + " takes " + std::to_string(*datatype_arity(name)) + " arguments");
                return make_atom(std::move(a), pos);
            }
            if (!is_datatype_function(name)) cur_.fail("unknown predicate", {"entity id", "label", "datatype relation"});
        }
        if ((cur_.at(Tok::Entity) || cur_.at(Tok::Label) || cur_.at(Tok::ObjVar)) && cur_.at(Tok::LParen, 1)) {
            Atom a;
            a.kind = AtomKind::Rel;
            Token head = cur_.next();
            a.predicate = head.kind == Tok::ObjVar ? var_ref(head) : Term::constant_of(Value(resolve_entity(head, labels_)));
            relational_tail(a);
            return make_atom(std::move(a), pos);
        }
        Term lhs = term();
        const bool neq = cur_.at(Tok::Neq);
        if (!neq && !cur_.at(Tok::Eq)) cur_.fail("expected an atom", {"'='", "'!='", "'('"});
        cur_.next();
        Atom a;
        a.kind = AtomKind::Eq;
        a.args = {std::move(lhs), term()};
        Formula f = make_atom(std::move(a), pos);
        return neq ? make_not(std::move(f)) : f;
    }

    void relational_tail(Atom& a) {
        a.args = arguments();
        if (a.args.size() != 2) cur_.fail("relational atoms take exactly two arguments");
        if (cur_.accept(Tok::At)) {
            if (!cur_.at(Tok::SetVar) && !cur_.at(Tok::LBrace)) cur_.fail("expected an attribute set", {"set variable", "'{'"});
            a.attrs = term();
        } else {
            a.attrs = implicit_set();
        }
    }

    // `(a : b) in S` is recognized by the colon after the first term.
    std::optional<Formula> try_set_atom() {
        auto mark = cur_.mark();
        SourcePos pos = cur_.peek().pos;
        cur_.next();
        std::optional<Term> attr;
        try {
            attr = term();
        } catch (const ParseError&) {
        }
        if (!attr || !cur_.accept(Tok::Colon)) {
            cur_.reset(mark);
            return std::nullopt;
        }
        Term value = term();
        cur_.expect(Tok::RParen);
        cur_.expect_ident("in");
        if (!cur_.at(Tok::SetVar) && !cur_.at(Tok::LBrace)) cur_.fail("expected an attribute set", {"set variable", "'{'"});
        Term set = term();
        Atom a;
        a.kind = AtomKind::SetMember;
        a.args = {std::move(*attr), std::move(value), std::move(set)};
        return make_atom(std::move(a), pos);
    }

    std::vector<Term> arguments() {
        cur_.expect(Tok::LParen);
        std::vector<Term> args;
        if (!cur_.at(Tok::RParen)) {
            do args.push_back(term());
            while (cur_.accept(Tok::Comma));
        }
        cur_.expect(Tok::RParen);
        return args;
    }

    Term term() {
        const Token& t = cur_.peek();
        switch (t.kind) {
            case Tok::ObjVar:
            case Tok::SetVar:
                return var_ref(cur_.next());
            case Tok::LBrace: {
                cur_.next();
                std::vector<SetPair> pairs;
                if (!cur_.at(Tok::RBrace)) {
                    do {
                        Term a = term();
                        cur_.expect(Tok::Colon);
                        Term v = term();
                        pairs.push_back({std::move(a), std::move(v)});
                    } while (cur_.accept(Tok::Comma));
                }
                cur_.expect(Tok::RBrace);
                return Term::set_literal(std::move(pairs));
            }
            case Tok::Ident: {
                if (is_datatype_function(t.text) && cur_.at(Tok::LParen, 1)) {
                    std::string fn = cur_.next().text;
                    auto args = arguments();
                    if (args.size() != *datatype_arity(fn)) cur_.fail(fn + " takes 2 arguments");
                    return Term::apply(std::move(fn), std::move(args));
                }
                cur_.fail("unexpected identifier", {"term"});
            }
            default:
                if (!at_value(cur_)) cur_.fail("expected a term", {"variable", "constant", "'{'"});
                return Term::constant_of(parse_value(cur_, labels_, numbered_anon));
        }
    }

    const LabelMap& labels_;
    TokenCursor cur_;
    std::set<std::string> used_;
    std::vector<std::pair<std::string, std::string>> scope_;  // source name -> bound name
    int implicit_counter_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, const LabelMap& labels, SourcePos start) {
    return FormulaParser(tokenize(text, start), labels).parse_all();
}

// --- printer ---------------------------------------------------------------

namespace {

std::string print_constant(const Value& v, const PrintOptions& opts) {
    if (opts.labels && v.is_entity() && !v.entity().is_pseudo())
        if (auto label = opts.labels->label_of(v.entity())) return "`" + *label + "`";
    return format_value(v);
}

int precedence(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Exists:
        case FormulaKind::Forall:
        case FormulaKind::CountExists: return 0;
        case FormulaKind::Implies: return 1;
        case FormulaKind::Or: return 2;
        case FormulaKind::And: return 3;
        case FormulaKind::Not: return f.children[0].is_atom(AtomKind::Eq) ? 5 : 4;
        case FormulaKind::Atom: return 5;
    }
    return 5;
}

void print_atom(std::ostream& out, const Atom& a, const PrintOptions& opts) {
    auto args = [&](const std::vector<Term>& ts) {
        out << "(";
        for (std::size_t i = 0; i < ts.size(); ++i) out << (i ? ", " : "") << print_term(ts[i], opts);
        out << ")";
    };
    switch (a.kind) {
        case AtomKind::True: out << "true"; return;
        case AtomKind::False: out << "false"; return;
        case AtomKind::Rel:
            out << (a.builtin.empty() ? print_term(a.predicate, opts) : a.builtin);
            args(a.args);
            if (!a.attrs.implicit) out << "@" << print_term(a.attrs, opts);
            return;
        case AtomKind::SetMember:
            out << "(" << print_term(a.args[0], opts) << " : " << print_term(a.args[1], opts) << ") in "
                << print_term(a.args[2], opts);
            return;
        case AtomKind::Eq:
            out << print_term(a.args[0], opts) << " = " << print_term(a.args[1], opts);
            return;
        case AtomKind::DtRel:
            out << a.name;
            args(a.args);
            return;
    }
}

void print_rec(std::ostream& out, const Formula& f, int ctx, const PrintOptions& opts) {
    const int prec = precedence(f);
    const bool parens = prec < ctx;
    if (parens) out << "(";
    switch (f.kind) {
        case FormulaKind::Atom:
            print_atom(out, f.atom, opts);
            break;
        case FormulaKind::Not: {
            const Formula& g = f.children[0];
            if (g.is_atom(AtomKind::Eq)) {
                out << print_term(g.atom.args[0], opts) << " != " << print_term(g.atom.args[1], opts);
            } else {
                out << "!";
                print_rec(out, g, 4, opts);
            }
            break;
        }
        case FormulaKind::And:
        case FormulaKind::Or:
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) out << (f.kind == FormulaKind::And ? " & " : " | ");
                print_rec(out, f.children[i], prec + 1, opts);
            }
            break;
        case FormulaKind::Implies:
            print_rec(out, f.children[0], 2, opts);
            out << " -> ";
            print_rec(out, f.children[1], 1, opts);
            break;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            out << (f.kind == FormulaKind::Exists ? "exists " : "forall ") << f.var;
            const Formula* body = &f.children[0];
            while (body->kind == f.kind) {
                out << ", " << body->var;
                body = &body->children[0];
            }
            out << " . ";
            print_rec(out, *body, 0, opts);
            break;
        }
        case FormulaKind::CountExists:
            out << "exists[" << print_term(f.count, opts) << "] " << f.var << " . ";
            print_rec(out, f.children[0], 0, opts);
            break;
    }
    if (parens) out << ")";
}

}  // namespace

std::string print_term(const Term& t, const PrintOptions& opts) {
    switch (t.kind) {
        case Term::Kind::Const: return print_constant(t.constant, opts);
        case Term::Kind::ObjVar:
        case Term::Kind::SetVar: return t.name;
        case Term::Kind::SetLit: {
            std::string out = "{";
            for (std::size_t i = 0; i < t.pairs.size(); ++i) {
                if (i) out += ", ";
                out += print_term(t.pairs[i].attr, opts) + ": " + print_term(t.pairs[i].value, opts);
            }
            return out + "}";
        }
        case Term::Kind::Apply: {
            std::string out = t.name + "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? ", " : "") + print_term(t.args[i], opts);
            return out + ")";
        }
    }
    return "?";
}

std::string print_formula(const Formula& f, const PrintOptions& opts) {
    std::ostringstream out;
    print_rec(out, f, 0, opts);
    return out.str();
}

// --- equality --------------------------------------------------------------

bool structurally_equal(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Const: return a.constant == b.constant;
        case Term::Kind::ObjVar:
        case Term::Kind::SetVar:
            return a.implicit == b.implicit && (a.implicit || a.name == b.name);
        case Term::Kind::SetLit:
            if (a.pairs.size() != b.pairs.size()) return false;
            for (std::size_t i = 0; i < a.pairs.size(); ++i)
                if (!structurally_equal(a.pairs[i].attr, b.pairs[i].attr) ||
                    !structurally_equal(a.pairs[i].value, b.pairs[i].value))
                    return false;
            return true;
        case Term::Kind::Apply:
            if (a.name != b.name || a.args.size() != b.args.size()) return false;
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (!structurally_equal(a.args[i], b.args[i])) return false;
            return true;
    }
    return false;
}

namespace {

bool atoms_equal(const Atom& a, const Atom& b) {
    if (a.kind != b.kind || a.builtin != b.builtin || a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(a.args[i], b.args[i])) return false;
    if (a.kind == AtomKind::Rel) {
        if (a.builtin.empty() && !structurally_equal(a.predicate, b.predicate)) return false;
        if (!structurally_equal(a.attrs, b.attrs)) return false;
    }
    return true;
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.var != b.var || a.children.size() != b.children.size()) return false;
    if (a.kind == FormulaKind::Atom) return atoms_equal(a.atom, b.atom);
    if (a.kind == FormulaKind::CountExists && !structurally_equal(a.count, b.count)) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    return true;
}

// --- analysis --------------------------------------------------------------

namespace {

template <typename Fn>
void for_each_term(const Term& t, const Fn& fn) {
    fn(t);
    for (const auto& p : t.pairs) {
        for_each_term(p.attr, fn);
        for_each_term(p.value, fn);
    }
    for (const auto& a : t.args) for_each_term(a, fn);
}

template <typename Fn>
void for_each_atom_term(const Atom& a, const Fn& fn) {
    if (a.kind == AtomKind::Rel) {
        if (a.builtin.empty()) for_each_term(a.predicate, fn);
        for_each_term(a.attrs, fn);
    }
    for (const auto& t : a.args) for_each_term(t, fn);
}

void free_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    auto note = [&](const Term& t) {
        if (t.is_var() && !t.implicit && !bound.count(t.name)) out.insert(t.name);
    };
    switch (f.kind) {
        case FormulaKind::Atom:
            for_each_atom_term(f.atom, note);
            return;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
        case FormulaKind::CountExists: {
            if (f.kind == FormulaKind::CountExists) for_each_term(f.count, note);
            const bool fresh = bound.insert(f.var).second;
            free_rec(f.children[0], bound, out);
            if (fresh) bound.erase(f.var);
            return;
        }
        default:
            for (const auto& c : f.children) free_rec(c, bound, out);
    }
}

template <typename Fn>
void visit_atoms(const Formula& f, const Fn& fn) {
    if (f.kind == FormulaKind::Atom) fn(f);
    for (const auto& c : f.children) visit_atoms(c, fn);
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    free_rec(f, bound, out);
    return out;
}

std::set<std::string> term_variables(const Term& t) {
    std::set<std::string> out;
    for_each_term(t, [&](const Term& x) {
        if (x.is_var()) out.insert(x.name);
    });
    return out;
}

std::set<std::string> implicit_variables(const Formula& f) {
    std::set<std::string> out;
    visit_atoms(f, [&](const Formula& g) {
        if (g.atom.kind == AtomKind::Rel && g.atom.attrs.implicit) out.insert(g.atom.attrs.name);
    });
    return out;
}

std::set<std::string> all_variables(const Formula& f) {
    std::set<std::string> out;
    auto note = [&](const Term& t) {
        if (t.is_var()) out.insert(t.name);
    };
    std::vector<const Formula*> stack{&f};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (!g->var.empty()) out.insert(g->var);
        if (g->kind == FormulaKind::CountExists) for_each_term(g->count, note);
        if (g->kind == FormulaKind::Atom) for_each_atom_term(g->atom, note);
        for (const auto& c : g->children) stack.push_back(&c);
    }
    return out;
}

std::set<Value> formula_constants(const Formula& f) {
    std::set<Value> out;
    visit_atoms(f, [&](const Formula& g) {
        for_each_atom_term(g.atom, [&](const Term& t) {
            if (t.kind == Term::Kind::Const) out.insert(t.constant);
        });
    });
    return out;
}

std::vector<AttrSet> ground_set_literals(const Formula& f) {
    std::vector<AttrSet> out;
    visit_atoms(f, [&](const Formula& g) {
        for_each_atom_term(g.atom, [&](const Term& t) {
            if (t.kind != Term::Kind::SetLit || !t.is_ground()) return;
            AttrSet s;
            for (const auto& p : t.pairs)
                if (p.attr.constant.is_entity()) s.insert(p.attr.constant.entity(), p.value.constant);
            out.push_back(std::move(s));
        });
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- transformation --------------------------------------------------------

Formula negate(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::Atom:
            if (f.atom.kind == AtomKind::True || f.atom.kind == AtomKind::False) {
                Formula g = f;
                g.atom.kind = f.atom.kind == AtomKind::True ? AtomKind::False : AtomKind::True;
                return g;
            }
            return make_not(f);
        case FormulaKind::Not:
            return f.children[0];
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> parts;
            for (const auto& c : f.children) parts.push_back(negate(c));
            return f.kind == FormulaKind::And ? make_or(std::move(parts)) : make_and(std::move(parts));
        }
        case FormulaKind::Implies:
            return make_and({f.children[0], negate(f.children[1])});
        case FormulaKind::Forall: {
            Formula g = make_exists(f.var, negate(f.children[0]));
            g.pos = f.pos;
            return g;
        }
        case FormulaKind::Exists:
        case FormulaKind::CountExists:
            return make_not(f);
    }
    return make_not(f);
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    for (int k = 1;; ++k) {
        std::string name = base + "_" + std::to_string(k);
        if (!taken.count(name)) return name;
    }
}

Term substitute_term(const Term& t, const std::map<std::string, Term>& rep) {
    if (t.is_var()) {
        auto it = rep.find(t.name);
        return it == rep.end() ? t : it->second;
    }
    Term out = t;
    if (t.kind == Term::Kind::SetLit) {
        for (auto& p : out.pairs) {
            p.attr = substitute_term(p.attr, rep);
            p.value = substitute_term(p.value, rep);
        }
        return Term::set_literal(std::move(out.pairs));
    }
    for (auto& a : out.args) a = substitute_term(a, rep);
    return out;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement) {
    if (replacement.empty()) return f;
    Formula out = f;
    if (f.kind == FormulaKind::Atom) {
        Atom& a = out.atom;
        if (a.kind == AtomKind::Rel) {
            if (a.builtin.empty()) a.predicate = substitute_term(a.predicate, replacement);
            a.attrs = substitute_term(a.attrs, replacement);
        }
        for (auto& t : a.args) t = substitute_term(t, replacement);
        return out;
    }
    if (f.kind == FormulaKind::CountExists) out.count = substitute_term(f.count, replacement);
    if (!f.var.empty() && replacement.count(f.var)) {
        auto inner = replacement;
        inner.erase(f.var);
        out.children[0] = substitute(f.children[0], inner);
        return out;
    }
    for (auto& c : out.children) c = substitute(c, replacement);
    if (f.kind == FormulaKind::And || f.kind == FormulaKind::Or)
        return f.kind == FormulaKind::And ? make_and(std::move(out.children)) : make_or(std::move(out.children));
    return out;
}

Formula negate_to_violation_query(const Formula& f) {
    if (f.kind != FormulaKind::Implies)
        throw FormulaError("violation queries are derived from implications Body -> Head");
    std::vector<Formula> conjuncts;
    Formula q = make_and({f.children[0], negate(f.children[1])});
    if (q.kind == FormulaKind::And)
        conjuncts = std::move(q.children);
    else
        conjuncts.push_back(std::move(q));

    // Lift top-level existentials: their witnesses become reported variables.
    std::set<std::string> taken = all_variables(f);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < conjuncts.size(); ++i) {
            if (conjuncts[i].kind != FormulaKind::Exists) continue;
            Formula ex = std::move(conjuncts[i]);
            Formula body = std::move(ex.children[0]);
            std::set<std::string> elsewhere;
            for (std::size_t j = 0; j < conjuncts.size(); ++j)
                if (j != i) {
                    auto fv = free_variables(conjuncts[j]);
                    elsewhere.insert(fv.begin(), fv.end());
                }
            if (elsewhere.count(ex.var)) {
                std::string fresh = fresh_name(ex.var, taken);
                taken.insert(fresh);
                Term t = ex.var[1] >= 'a' && ex.var[1] <= 'z' ? Term::obj_var(fresh) : Term::set_var(fresh);
                body = substitute(body, {{ex.var, t}});
            }
            std::vector<Formula> rest;
            for (std::size_t j = 0; j < conjuncts.size(); ++j)
                if (j != i) rest.push_back(std::move(conjuncts[j]));
            rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(i), std::move(body));
            Formula merged = make_and(std::move(rest));
            conjuncts.clear();
            if (merged.kind == FormulaKind::And)
                conjuncts = std::move(merged.children);
            else
                conjuncts.push_back(std::move(merged));
            changed = true;
            break;
        }
    }
    Formula out = make_and(std::move(conjuncts));
    out.pos = f.pos;
    return out;
}

// --- block files -----------------------------------------------------------

const std::string* FormulaBlock::header(const std::string& key) const {
    auto it = headers.find(key);
    return it == headers.end() ? nullptr : &it->second;
}

std::vector<FormulaBlock> parse_blocks(std::string_view text) {
    static const std::regex kHeader(R"(^([a-z_]+):\s*(.*?)\s*$)");
    std::vector<FormulaBlock> out;
    FormulaBlock block;
    bool in_body = false;
    bool any = false;
    auto flush = [&](int next_line) {
        if (any) out.push_back(std::move(block));
        block = FormulaBlock{};
        block.first_line = next_line;
        in_body = false;
        any = false;
    };

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
        start = end + 1;

        auto first = line.find_first_not_of(" \t");
        std::string trimmed = first == std::string::npos ? "" : line.substr(first);
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.pop_back();

        if (trimmed == "---") {
            flush(line_no + 1);
            continue;
        }
        if (!in_body) {
            if (trimmed.empty() || trimmed[0] == '#') continue;
            std::smatch m;
            if (std::regex_match(line, m, kHeader)) {
                block.headers[m[1].str()] = m[2].str();
                any = true;
                continue;
            }
            in_body = true;
            any = true;
            block.body_pos = SourcePos{line_no, 1};
        }
        block.body += line;
        block.body += '\n';
        if (end == text.size()) break;
    }
    flush(line_no + 1);
    return out;
}

}  // namespace marshal
