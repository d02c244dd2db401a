// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/eval.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <type_traits>
#include <unordered_set>

#include "marshal/datatype.hpp"
#include "marshal/literal.hpp"

namespace marshal {

// --- shared semantics -------------------------------------------------------

namespace {

const AttrSet kEmptySet;

bool visible(const Statement& st, const EvalConfig& cfg) { return cfg.include_deprecated || st.rank != Rank::Deprecated; }

/// Count threshold of a counting quantifier; nullopt unless an integer quantity.
std::optional<long long> count_threshold(const Value& v) {
    if (!v.is_quantity() || !v.quantity_value().amount.is_integer()) return std::nullopt;
    return v.quantity_value().amount.to_int64();
}

std::string count_error(const Value& v) {
    return "counting quantifier: expected an integer quantity, got " + format_value(v);
}

}  // namespace

bool literal_matches(const AttrSet& lit, const AttrSet& q) {
    auto a = lit.begin();
    auto b = q.begin();
    for (;;) {
        while (a != lit.end() && is_bookkeeping(a->first)) {
            if (!q.contains(a->first, a->second)) return false;
            ++a;
        }
        while (b != q.end() && is_bookkeeping(b->first)) ++b;
        if (a == lit.end() || b == q.end()) return a == lit.end() && b == q.end();
        if (*a != *b) return false;
        ++a;
        ++b;
    }
}

bool is_set_variable(const std::string& name) {
    return name.size() > 1 && (std::isupper(static_cast<unsigned char>(name[1])) || name[1] == '_');
}

const Value* Binding::object(const std::string& name) const {
    auto it = objects.find(name);
    return it == objects.end() ? nullptr : &it->second;
}

const AttrSet* Binding::set(const std::string& name) const {
    auto it = sets.find(name);
    return it == sets.end() ? nullptr : &it->second;
}

std::string Binding::str() const {
    std::map<std::string, std::string> all;
    for (const auto& [k, v] : objects) all[k] = format_value(v);
    for (const auto& [k, s] : sets) all[k] = format_attrset(s);
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : all) {
        if (!first) out += ", ";
        out += k + "=" + v;
        first = false;
    }
    return out + "}";
}

std::set<Value> object_domain(const KnowledgeBase& kb, const Formula& f) {
    std::set<Value> d = kb.active_domain();
    auto c = formula_constants(f);
    d.insert(c.begin(), c.end());
    return d;
}

std::vector<AttrSet> set_domain(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg) {
    std::set<AttrSet> s;
    for (const auto& st : kb.statements())
        if (visible(st, cfg)) s.insert(st.qualifiers);
    for (const auto& nv : kb.no_value_facts()) s.insert(nv.qualifiers);
    if (!kb.commons_namespaces().empty()) s.insert(AttrSet{});
    for (auto& lit : ground_set_literals(f)) s.insert(std::move(lit));
    return {s.begin(), s.end()};
}

// --- safe-range analysis ------------------------------------------------------

namespace {

void plain_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_var() && !t.implicit) out.insert(t.name);
    if (t.kind == Term::Kind::SetLit)
        for (const auto& p : t.pairs) {
            plain_vars(p.attr, out);
            plain_vars(p.value, out);
        }
}

class SafeRangeChecker {
public:
    std::vector<std::string> diagnostics;

    std::set<std::string> rr(const Formula& f) {
        switch (f.kind) {
            case FormulaKind::Atom: return rr_atom(f.atom);
            case FormulaKind::Not:
                rr(f.children[0]);
                return {};
            case FormulaKind::And: {
                std::set<std::string> out;
                for (const auto& c : f.children) {
                    auto r = rr(c);
                    out.insert(r.begin(), r.end());
                }
                // x = t restricts x once t's variables are restricted.
                for (bool changed = true; changed;) {
                    changed = false;
                    for (const auto& c : f.children) {
                        if (!c.is_atom(AtomKind::Eq)) continue;
                        for (int side = 0; side < 2; ++side) {
                            const Term& x = c.atom.args[side];
                            const Term& t = c.atom.args[1 - side];
                            if (!x.is_var() || out.count(x.name)) continue;
                            auto tv = term_variables(t);
                            if (std::all_of(tv.begin(), tv.end(), [&](const std::string& v) { return out.count(v) > 0; })) {
                                out.insert(x.name);
                                changed = true;
                            }
                        }
                    }
                }
                return out;
            }
            case FormulaKind::Or: {
                std::optional<std::set<std::string>> out;
                for (const auto& c : f.children) {
                    auto r = rr(c);
                    if (!out) {
                        out = std::move(r);
                    } else {
                        std::set<std::string> both;
                        std::set_intersection(out->begin(), out->end(), r.begin(), r.end(), std::inserter(both, both.end()));
                        out = std::move(both);
                    }
                }
                return out.value_or(std::set<std::string>{});
            }
            case FormulaKind::Implies:
                rr(f.children[0]);
                rr(f.children[1]);
                return {};
            case FormulaKind::Exists:
            case FormulaKind::CountExists: {
                auto r = rr(f.children[0]);
                if (!r.count(f.var)) complain(f.var, f);
                r.erase(f.var);
                return r;
            }
            case FormulaKind::Forall: {
                auto r = rr(negate(f.children[0]));
                if (!r.count(f.var)) complain(f.var, f);
                return {};
            }
        }
        return {};
    }

    void complain(const std::string& var, const Formula& where) {
        diagnostics.push_back("variable " + var + " is not range-restricted in: " + print_formula(where));
    }

private:
    static std::set<std::string> rr_atom(const Atom& a) {
        std::set<std::string> out;
        switch (a.kind) {
            case AtomKind::Rel:
                if (a.builtin.empty()) plain_vars(a.predicate, out);
                for (const auto& t : a.args)
                    if (t.is_var()) out.insert(t.name);
                plain_vars(a.attrs, out);
                break;
            case AtomKind::SetMember:
                for (int i = 0; i < 2; ++i)
                    if (a.args[i].is_var()) out.insert(a.args[i].name);
                break;
            case AtomKind::Eq:
                for (int side = 0; side < 2; ++side)
                    if (a.args[side].is_var() && a.args[1 - side].is_ground()) out.insert(a.args[side].name);
                break;
            default:
                break;
        }
        return out;
    }
};

}  // namespace

SafeRange check_safe_range(const Formula& f) {
    SafeRangeChecker c;
    auto r = c.rr(f);
    SafeRange out;
    for (const auto& v : free_variables(f))
        if (!r.count(v)) c.diagnostics.insert(c.diagnostics.begin(), "free variable " + v + " is not range-restricted in: " + print_formula(f));
    out.diagnostics = std::move(c.diagnostics);
    out.ok = out.diagnostics.empty();
    return out;
}

// --- indexed evaluator --------------------------------------------------------

namespace {

/// Non-owning callable reference; continuations return false to stop.
class Cont {
public:
    template <typename F>
        requires(!std::is_same_v<F, Cont>)
    Cont(F& f) : obj_(&f), call_([](void* o) { return (*static_cast<F*>(o))(); }) {}  // NOLINT
    bool operator()() const { return call_(obj_); }

private:
    void* obj_;
    bool (*call_)(void*);
};

struct CTerm {
    enum class K { Const, Obj, Set, Lit, Apply };
    K k = K::Const;
    const Value* c = nullptr;
    int slot = -1;
    bool implicit = false;
    std::string fn;
    std::vector<CTerm> kids;  // Lit: attr, value, attr, value, ...; Apply: arguments
};

struct CNode {
    FormulaKind kind = FormulaKind::Atom;
    AtomKind akind = AtomKind::True;
    std::string builtin;
    std::string name;
    CTerm pred;
    std::vector<CTerm> args;
    CTerm attrs;
    bool attr_is_var = false;
    std::vector<CNode> kids;
    int var = -1;
    bool var_set = false;
    CTerm count;
    std::vector<int> free_obj;
    std::vector<int> free_set;
    /// Free slots this node cannot bind by itself (compound nodes only).
    std::vector<int> loose_obj;
    std::vector<int> loose_set;
};

class Solver {
public:
    Solver(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg) : kb_(kb), f_(f), cfg_(cfg) {
        for (const auto& v : formula_constants(f))
            if (!kb.active_domain().count(v)) extra_.insert(v);
        root_ = compile(f);
        obj_.assign(obj_names_.size(), nullptr);
        set_.assign(set_names_.size(), nullptr);
    }

    EvalResult run() {
        std::set<Binding> found;
        bool truncated = false;
        auto record = [&]() {
            Binding b;
            for (int s : root_.free_obj) b.objects.emplace(obj_names_[s], *obj_[s]);
            for (int s : root_.free_set) b.sets.emplace(set_names_[s], *set_[s]);
            found.insert(std::move(b));
            if (cfg_.max_bindings && found.size() >= *cfg_.max_bindings) {
                truncated = true;
                return false;
            }
            return true;
        };
        solve(root_, Cont(record));
        EvalResult out;
        out.bindings.assign(found.begin(), found.end());
        out.diagnostics.assign(diags_.begin(), diags_.end());
        out.truncated = truncated;
        return out;
    }

private:
    // ---- compilation

    struct Scope {
        std::map<std::string, int> obj, set;
    };

    int slot_for(const std::string& name, bool is_set, bool fresh) {
        auto& names = is_set ? set_names_ : obj_names_;
        auto& scope = is_set ? scope_.set : scope_.obj;
        if (!fresh)
            if (auto it = scope.find(name); it != scope.end()) return it->second;
        int slot = static_cast<int>(names.size());
        names.push_back(name);
        scope[name] = slot;
        return slot;
    }

    const Value* constant(const Value& v) {
        if (auto it = kb_.active_domain().find(v); it != kb_.active_domain().end()) return &*it;
        return &*extra_.insert(v).first;
    }

    CTerm compile_term(const Term& t, std::set<int>& fo, std::set<int>& fs) {
        CTerm c;
        switch (t.kind) {
            case Term::Kind::Const:
                c.k = CTerm::K::Const;
                c.c = constant(t.constant);
                break;
            case Term::Kind::ObjVar:
                c.k = CTerm::K::Obj;
                c.slot = slot_for(t.name, false, false);
                fo.insert(c.slot);
                break;
            case Term::Kind::SetVar:
                c.k = CTerm::K::Set;
                c.implicit = t.implicit;
                c.slot = slot_for(t.name, true, t.implicit);
                if (!t.implicit) fs.insert(c.slot);
                break;
            case Term::Kind::SetLit:
                c.k = CTerm::K::Lit;
                for (const auto& p : t.pairs) {
                    c.kids.push_back(compile_term(p.attr, fo, fs));
                    c.kids.push_back(compile_term(p.value, fo, fs));
                }
                break;
            case Term::Kind::Apply:
                c.k = CTerm::K::Apply;
                c.fn = t.name;
                for (const auto& a : t.args) c.kids.push_back(compile_term(a, fo, fs));
                break;
        }
        return c;
    }

    CNode compile(const Formula& f) {
        CNode n;
        n.kind = f.kind;
        std::set<int> fo, fs;
        switch (f.kind) {
            case FormulaKind::Atom: {
                const Atom& a = f.atom;
                n.akind = a.kind;
                n.builtin = a.builtin;
                n.name = a.name;
                if (a.kind == AtomKind::Rel && a.builtin.empty()) n.pred = compile_term(a.predicate, fo, fs);
                for (const auto& t : a.args) n.args.push_back(compile_term(t, fo, fs));
                if (a.kind == AtomKind::Rel) n.attrs = compile_term(a.attrs, fo, fs);
                if (a.kind == AtomKind::SetMember) n.attr_is_var = a.args[0].is_var();
                break;
            }
            case FormulaKind::Implies: {
                // a -> b is evaluated as !a | b.
                n.kind = FormulaKind::Or;
                CNode neg;
                neg.kind = FormulaKind::Not;
                neg.kids.push_back(compile(f.children[0]));
                neg.free_obj = neg.kids[0].free_obj;
                neg.free_set = neg.kids[0].free_set;
                n.kids.push_back(std::move(neg));
                n.kids.push_back(compile(f.children[1]));
                break;
            }
            case FormulaKind::Exists:
            case FormulaKind::Forall:
            case FormulaKind::CountExists: {
                if (f.kind == FormulaKind::CountExists) n.count = compile_term(f.count, fo, fs);
                Scope saved = scope_;
                n.var_set = is_set_variable(f.var);
                n.var = slot_for(f.var, n.var_set, true);
                n.kids.push_back(compile(f.children[0]));
                scope_ = std::move(saved);
                break;
            }
            default:
                for (const auto& c : f.children) n.kids.push_back(compile(c));
        }
        for (const auto& k : n.kids) {
            fo.insert(k.free_obj.begin(), k.free_obj.end());
            fs.insert(k.free_set.begin(), k.free_set.end());
        }
        if (n.var >= 0) (n.var_set ? fs : fo).erase(n.var);
        n.free_obj.assign(fo.begin(), fo.end());
        n.free_set.assign(fs.begin(), fs.end());
        if (n.kind == FormulaKind::And || n.kind == FormulaKind::Or || n.kind == FormulaKind::Exists ||
            n.kind == FormulaKind::CountExists) {
            SafeRangeChecker checker;
            std::set<std::string> restricted = checker.rr(f);
            for (int s : n.free_obj)
                if (!restricted.count(obj_names_[s])) n.loose_obj.push_back(s);
            for (int s : n.free_set)
                if (!restricted.count(set_names_[s])) n.loose_set.push_back(s);
        }
        return n;
    }

    // ---- bindings

    void bind_obj(int slot, const Value* v) {
        obj_[slot] = v;
        trail_.push_back(slot);
    }
    void bind_set(int slot, const AttrSet* s) {
        set_[slot] = s;
        trail_.push_back(-slot - 1);
    }
    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int s = trail_.back();
            trail_.pop_back();
            if (s >= 0)
                obj_[s] = nullptr;
            else
                set_[-s - 1] = nullptr;
        }
    }

    const Value* intern(const Value& v) const {
        if (auto it = kb_.active_domain().find(v); it != kb_.active_domain().end()) return &*it;
        if (auto it = extra_.find(v); it != extra_.end()) return &*it;
        return nullptr;
    }

    bool bound(const CTerm& t) const {
        switch (t.k) {
            case CTerm::K::Const: return true;
            case CTerm::K::Obj: return obj_[t.slot] != nullptr;
            case CTerm::K::Set: return set_[t.slot] != nullptr;
            default:
                return std::all_of(t.kids.begin(), t.kids.end(), [&](const CTerm& k) { return bound(k); });
        }
    }

    bool all_free_bound(const CNode& n) const {
        for (int s : n.free_obj)
            if (!obj_[s]) return false;
        for (int s : n.free_set)
            if (!set_[s]) return false;
        return true;
    }

    /// Value of a bound object term; `scratch` holds computed results.
    const Value* obj_value(const CTerm& t, Value& scratch) {
        switch (t.k) {
            case CTerm::K::Const: return t.c;
            case CTerm::K::Obj: return obj_[t.slot];
            case CTerm::K::Apply: {
                std::vector<Value> args;
                for (const auto& a : t.kids) {
                    Value s;
                    const Value* v = obj_value(a, s);
                    if (!v) return nullptr;
                    args.push_back(*v);
                }
                try {
                    scratch = datatype_function(t.fn, args);
                    return &scratch;
                } catch (const DatatypeError& e) {
                    diags_.insert(e.what());
                    return nullptr;
                }
            }
            default: return nullptr;
        }
    }

    /// Value of a bound set term; literals with non-entity attributes denote nothing.
    const AttrSet* set_value(const CTerm& t, AttrSet& scratch) {
        if (t.k == CTerm::K::Set) return set_[t.slot];
        if (t.k != CTerm::K::Lit) return nullptr;
        scratch = AttrSet{};
        for (std::size_t i = 0; i < t.kids.size(); i += 2) {
            Value sa, sv;
            const Value* a = obj_value(t.kids[i], sa);
            const Value* v = obj_value(t.kids[i + 1], sv);
            if (!a || !v || !a->is_entity()) return nullptr;
            scratch.insert(a->entity(), *v);
        }
        return &scratch;
    }

    bool is_set_term(const CTerm& t) const { return t.k == CTerm::K::Set || t.k == CTerm::K::Lit; }

    /// Unifies an object term with a value. `stable` values outlive the
    /// binding; others are interned into the domain.
    bool unify(const CTerm& t, const Value& v, bool stable) {
        switch (t.k) {
            case CTerm::K::Const: return *t.c == v;
            case CTerm::K::Obj: {
                if (obj_[t.slot]) return *obj_[t.slot] == v;
                const Value* p = stable ? &v : intern(v);
                if (!p) return false;
                bind_obj(t.slot, p);
                return true;
            }
            case CTerm::K::Apply: {
                Value s;
                const Value* x = obj_value(t, s);
                return x && *x == v;
            }
            default: return false;
        }
    }

    // ---- domains

    const std::vector<const AttrSet*>& sets() {
        if (set_domain_built_) return set_domain_;
        set_domain_built_ = true;
        struct H {
            std::size_t operator()(const AttrSet* s) const { return s->hash(); }
        };
        struct E {
            bool operator()(const AttrSet* a, const AttrSet* b) const { return *a == *b; }
        };
        std::unordered_set<const AttrSet*, H, E> seen;
        for (const auto& st : kb_.statements())
            if (visible(st, cfg_)) seen.insert(&st.qualifiers);
        for (const auto& nv : kb_.no_value_facts()) seen.insert(&nv.qualifiers);
        if (!kb_.commons_namespaces().empty()) seen.insert(&kEmptySet);
        for (auto& lit : ground_set_literals(f_)) owned_sets_.push_back(std::move(lit));
        for (const auto& s : owned_sets_) seen.insert(&s);
        set_domain_.assign(seen.begin(), seen.end());
        std::sort(set_domain_.begin(), set_domain_.end(), [](const AttrSet* a, const AttrSet* b) { return *a < *b; });
        return set_domain_;
    }

    const AttrSet* find_set(const AttrSet& s) {
        for (const AttrSet* c : sets())
            if (*c == s) return c;
        return nullptr;
    }

    template <typename F>
    bool for_each_object(F&& fn) {
        for (const auto& v : kb_.active_domain())
            if (!fn(&v)) return false;
        for (const auto& v : extra_)
            if (!fn(&v)) return false;
        return true;
    }

    /// Binds every unbound free variable of `n` over its domain, then `k`.
    bool with_all_bound(const CNode& n, Cont k) {
        for (int s : n.free_obj)
            if (!obj_[s]) {
                return for_each_object([&](const Value* v) {
                    bind_obj(s, v);
                    bool r = with_all_bound(n, k);
                    undo(trail_.size() - 1);
                    return r;
                });
            }
        for (int s : n.free_set)
            if (!set_[s]) {
                for (const AttrSet* a : sets()) {
                    bind_set(s, a);
                    bool r = with_all_bound(n, k);
                    undo(trail_.size() - 1);
                    if (!r) return false;
                }
                return true;
            }
        return k();
    }

    bool has_solution(const CNode& n) {
        auto stop = [] { return false; };
        return !solve(n, Cont(stop));
    }

    // ---- solving

    bool solve(const CNode& n, Cont k) {
        switch (n.kind) {
            case FormulaKind::Atom: return solve_atom(n, k);
            case FormulaKind::Not: {
                auto test = [&] { return has_solution(n.kids[0]) ? true : k(); };
                return with_all_bound(n, Cont(test));
            }
            case FormulaKind::And: {
                std::vector<char> used(n.kids.size(), 0);
                return solve_and(n, used, n.kids.size(), k);
            }
            case FormulaKind::Or:
                for (const auto& kid : n.kids) {
                    auto rest = [&] { return with_all_bound(n, k); };
                    if (!solve(kid, Cont(rest))) return false;
                }
                return true;
            case FormulaKind::Exists: return solve_exists(n, k);
            case FormulaKind::CountExists: return solve_count(n, k);
            case FormulaKind::Forall: {
                auto test = [&] {
                    const CNode& body = n.kids[0];
                    bool all = true;
                    auto check = [&](auto bind) {
                        std::size_t mark = trail_.size();
                        bind();
                        bool ok = has_solution(body);
                        undo(mark);
                        if (!ok) all = false;
                        return ok;
                    };
                    if (n.var_set) {
                        for (const AttrSet* s : sets())
                            if (!check([&] { bind_set(n.var, s); })) break;
                    } else {
                        for_each_object([&](const Value* v) { return check([&] { bind_obj(n.var, v); }); });
                    }
                    return all ? k() : true;
                };
                return with_all_bound(n, Cont(test));
            }
            case FormulaKind::Implies: break;  // compiled away
        }
        return true;
    }

    struct Choice {
        int priority = 9;
        std::size_t cost = std::numeric_limits<std::size_t>::max();
    };

    Choice estimate(const CNode& c) {
        if (all_free_bound(c)) return {0, c.kind == FormulaKind::Atom ? 0u : 1u};
        switch (c.kind) {
            case FormulaKind::Atom:
                switch (c.akind) {
                    case AtomKind::Rel: return {2, rel_bucket_size(c)};
                    case AtomKind::SetMember: {
                        AttrSet scratch;
                        if (bound(c.args[2])) {
                            const AttrSet* s = set_value(c.args[2], scratch);
                            return {2, s ? s->size() : 0};
                        }
                        return {5, 0};
                    }
                    case AtomKind::Eq: {
                        for (int side = 0; side < 2; ++side) {
                            const CTerm& x = c.args[side];
                            if ((x.k == CTerm::K::Obj || x.k == CTerm::K::Set) && bound(c.args[1 - side])) return {1, 1};
                        }
                        return {5, 0};
                    }
                    default: return {5, 0};
                }
            case FormulaKind::Exists:
            case FormulaKind::CountExists:
            case FormulaKind::Or:
            case FormulaKind::And: {
                // Compound conjuncts that leave a variable unbound would
                // enumerate the domain; run them after the generators.
                bool loose = std::any_of(c.loose_obj.begin(), c.loose_obj.end(), [&](int s) { return !obj_[s]; }) ||
                             std::any_of(c.loose_set.begin(), c.loose_set.end(), [&](int s) { return !set_[s]; });
                return {loose ? 6 : 3, 0};
            }
            default: return {5, 0};
        }
    }

    std::size_t rel_bucket_size(const CNode& c) {
        if (!c.builtin.empty())
            return c.builtin == kNoValuePredicate ? kb_.no_value_facts().size() : kb_.commons_namespaces().size();
        Value scratch;
        const Value* p = bound(c.pred) ? obj_value(c.pred, scratch) : nullptr;
        if (!p) return kb_.size();
        if (!p->is_entity()) return 0;
        Value ss, so;
        if (bound(c.args[0]))
            if (const Value* s = obj_value(c.args[0], ss)) return kb_.by_subject(p->entity(), *s).size();
        if (bound(c.args[1]))
            if (const Value* o = obj_value(c.args[1], so)) return kb_.by_value(p->entity(), *o).size();
        return kb_.by_property(p->entity()).size();
    }

    bool solve_and(const CNode& n, std::vector<char>& used, std::size_t left, Cont k) {
        if (left == 0) return k();
        std::size_t best = n.kids.size();
        Choice bc;
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (used[i]) continue;
            Choice c = estimate(n.kids[i]);
            if (best == n.kids.size() || c.priority < bc.priority || (c.priority == bc.priority && c.cost < bc.cost)) {
                best = i;
                bc = c;
            }
        }
        used[best] = 1;
        auto rest = [&] { return solve_and(n, used, left - 1, k); };
        bool r = solve(n.kids[best], Cont(rest));
        used[best] = 0;
        return r;
    }

    /// Matches a set term against a concrete, stable attribute set.
    bool match_set(const CTerm& t, const AttrSet& q, Cont k) {
        if (t.k == CTerm::K::Set) {
            if (t.implicit) return k();
            if (set_[t.slot]) return *set_[t.slot] == q ? k() : true;
            bind_set(t.slot, &q);
            bool r = k();
            undo(trail_.size() - 1);
            return r;
        }
        if (t.k != CTerm::K::Lit) return true;
        if (bound(t)) {
            AttrSet scratch;
            const AttrSet* lit = set_value(t, scratch);
            return lit && literal_matches(*lit, q) ? k() : true;
        }
        return match_literal_pairs(t, 0, q, k);
    }

    bool match_literal_pairs(const CTerm& t, std::size_t i, const AttrSet& q, Cont k) {
        if (i == t.kids.size()) {
            AttrSet scratch;
            const AttrSet* lit = set_value(t, scratch);
            return lit && literal_matches(*lit, q) ? k() : true;
        }
        for (const auto& [a, v] : q) {
            std::size_t mark = trail_.size();
            if (unify(t.kids[i], Value(a), false) && unify(t.kids[i + 1], v, true)) {
                bool r = match_literal_pairs(t, i + 2, q, k);
                undo(mark);
                if (!r) return false;
                continue;
            }
            undo(mark);
        }
        return true;
    }

    bool solve_atom(const CNode& n, Cont k) {
        switch (n.akind) {
            case AtomKind::True: return k();
            case AtomKind::False: return true;
            case AtomKind::Rel: return solve_rel(n, k);
            case AtomKind::SetMember: return solve_member(n, k);
            case AtomKind::Eq: return solve_eq(n, k);
            case AtomKind::DtRel: {
                if (!all_free_bound(n)) {
                    auto again = [&] { return solve_atom(n, k); };
                    return with_all_bound(n, Cont(again));
                }
                std::vector<Value> args;
                for (const auto& a : n.args) {
                    Value s;
                    const Value* v = obj_value(a, s);
                    if (!v) return true;
                    args.push_back(*v);
                }
                try {
                    return datatype_relation(n.name, args) ? k() : true;
                } catch (const DatatypeError& e) {
                    diags_.insert(e.what());
                    return true;
                }
            }
        }
        return true;
    }

    bool solve_rel(const CNode& n, Cont k) {
        if (n.builtin == kNoValuePredicate) {
            for (const auto& fact : kb_.no_value_facts()) {
                std::size_t mark = trail_.size();
                if (unify(n.args[0], Value(fact.property), false) && unify(n.args[1], fact.subject, true))
                    if (!match_set(n.attrs, fact.qualifiers, k)) {
                        undo(mark);
                        return false;
                    }
                undo(mark);
            }
            return true;
        }
        if (n.builtin == kCommonsPredicate) {
            if (commons_.empty())
                for (const auto& [page, ns] : kb_.commons_namespaces())
                    commons_.emplace_back(Value::string(page), Value::string(ns));
            for (const auto& [page, ns] : commons_) {
                std::size_t mark = trail_.size();
                if (unify(n.args[0], page, false) && unify(n.args[1], ns, false))
                    if (!match_set(n.attrs, kEmptySet, k)) {
                        undo(mark);
                        return false;
                    }
                undo(mark);
            }
            return true;
        }

        auto over_property = [&](const EntityId& p) {
            Value ss, so;
            const KnowledgeBase::Index* idx = nullptr;
            if (bound(n.args[0])) {
                const Value* s = obj_value(n.args[0], ss);
                if (!s) return true;
                idx = &kb_.by_subject(p, *s);
            } else if (bound(n.args[1])) {
                const Value* o = obj_value(n.args[1], so);
                if (!o) return true;
                idx = &kb_.by_value(p, *o);
            } else {
                idx = &kb_.by_property(p);
            }
            for (auto i : *idx) {
                const Statement& st = kb_.statements()[i];
                if (!visible(st, cfg_)) continue;
                std::size_t mark = trail_.size();
                if (unify(n.args[0], st.subject, true) && unify(n.args[1], st.value, true))
                    if (!match_set(n.attrs, st.qualifiers, k)) {
                        undo(mark);
                        return false;
                    }
                undo(mark);
            }
            return true;
        };

        if (bound(n.pred)) {
            Value scratch;
            const Value* p = obj_value(n.pred, scratch);
            if (!p || !p->is_entity()) return true;
            return over_property(p->entity());
        }
        for (const auto& p : kb_.properties()) {
            std::size_t mark = trail_.size();
            if (unify(n.pred, Value(p), false)) {
                if (!over_property(p)) {
                    undo(mark);
                    return false;
                }
            }
            undo(mark);
        }
        return true;
    }

    bool solve_member(const CNode& n, Cont k) {
        const CTerm& st = n.args[2];
        if (!bound(st)) {
            if (st.k == CTerm::K::Set) {
                for (const AttrSet* s : sets()) {
                    bind_set(st.slot, s);
                    bool r = solve_member(n, k);
                    undo(trail_.size() - 1);
                    if (!r) return false;
                }
                return true;
            }
            auto again = [&] { return solve_member(n, k); };
            return with_all_bound(n, Cont(again));
        }
        AttrSet scratch;
        const AttrSet* s = set_value(st, scratch);
        if (!s) return true;
        const bool stable = s != &scratch;
        for (const auto& [a, v] : *s) {
            if (n.attr_is_var && is_bookkeeping(a)) continue;
            std::size_t mark = trail_.size();
            if (unify(n.args[0], Value(a), false) && unify(n.args[1], v, stable)) {
                if (!k()) {
                    undo(mark);
                    return false;
                }
            }
            undo(mark);
        }
        return true;
    }

    bool solve_eq(const CNode& n, Cont k) {
        const CTerm& l = n.args[0];
        const CTerm& r = n.args[1];
        const bool lb = bound(l), rb = bound(r);
        if (lb && rb) {
            if (is_set_term(l) != is_set_term(r)) return true;
            if (is_set_term(l)) {
                AttrSet s1, s2;
                const AttrSet* a = set_value(l, s1);
                const AttrSet* b = set_value(r, s2);
                return a && b && *a == *b ? k() : true;
            }
            Value s1, s2;
            const Value* a = obj_value(l, s1);
            const Value* b = obj_value(r, s2);
            return a && b && *a == *b ? k() : true;
        }
        for (int side = 0; side < 2; ++side) {
            const CTerm& x = n.args[side];
            const CTerm& t = n.args[1 - side];
            if (!bound(t) || bound(x)) continue;
            if (x.k == CTerm::K::Obj && !is_set_term(t)) {
                Value s;
                const Value* v = obj_value(t, s);
                const Value* p = v ? intern(*v) : nullptr;
                if (!p) return true;
                bind_obj(x.slot, p);
                bool res = k();
                undo(trail_.size() - 1);
                return res;
            }
            if (x.k == CTerm::K::Set && is_set_term(t)) {
                AttrSet s;
                const AttrSet* v = set_value(t, s);
                const AttrSet* p = v ? find_set(*v) : nullptr;
                if (!p) return true;
                bind_set(x.slot, p);
                bool res = k();
                undo(trail_.size() - 1);
                return res;
            }
            if (x.k == CTerm::K::Obj || x.k == CTerm::K::Set) return true;  // kind mismatch
        }
        auto again = [&] { return solve_eq(n, k); };
        return with_all_bound(n, Cont(again));
    }

    struct Projection {
        std::vector<const Value*> objs;
        std::vector<const AttrSet*> sets;
    };

    using Key = std::pair<std::vector<Value>, std::vector<AttrSet>>;

    Key key_of(const std::vector<int>& os, const std::vector<int>& ss) const {
        Key key;
        for (int s : os) key.first.push_back(*obj_[s]);
        for (int s : ss) key.second.push_back(*set_[s]);
        return key;
    }

    void unbound_free(const CNode& n, std::vector<int>& os, std::vector<int>& ss) const {
        for (int s : n.free_obj)
            if (!obj_[s]) os.push_back(s);
        for (int s : n.free_set)
            if (!set_[s]) ss.push_back(s);
    }

    bool replay(const std::vector<int>& os, const std::vector<int>& ss, const Projection& p, Cont k) {
        std::size_t mark = trail_.size();
        for (std::size_t i = 0; i < os.size(); ++i) bind_obj(os[i], p.objs[i]);
        for (std::size_t i = 0; i < ss.size(); ++i) bind_set(ss[i], p.sets[i]);
        bool r = k();
        undo(mark);
        return r;
    }

    Projection snapshot(const std::vector<int>& os, const std::vector<int>& ss) const {
        Projection p;
        for (int s : os) p.objs.push_back(obj_[s]);
        for (int s : ss) p.sets.push_back(set_[s]);
        return p;
    }

    bool solve_exists(const CNode& n, Cont k) {
        std::vector<int> os, ss;
        unbound_free(n, os, ss);
        if (os.empty() && ss.empty()) return has_solution(n.kids[0]) ? k() : true;
        std::map<Key, Projection> groups;
        auto collect = [&] {
            auto key = key_of(os, ss);
            if (!groups.count(key)) groups.emplace(std::move(key), snapshot(os, ss));
            return true;
        };
        solve(n.kids[0], Cont(collect));
        for (const auto& [key, p] : groups)
            if (!replay(os, ss, p, k)) return false;
        return true;
    }

    bool solve_count(const CNode& n, Cont k) {
        if (!bound(n.count)) {
            auto again = [&] { return solve_count(n, k); };
            return with_all_bound(n, Cont(again));
        }
        Value scratch;
        const Value* cv = obj_value(n.count, scratch);
        if (!cv) return true;
        auto threshold = count_threshold(*cv);
        if (!threshold) {
            diags_.insert(count_error(*cv));
            return true;
        }
        if (*threshold <= 0) return with_all_bound(n, k);
        const auto need = static_cast<std::size_t>(*threshold);

        std::vector<int> os, ss;
        unbound_free(n, os, ss);
        struct Group {
            Projection p;
            std::set<Value> objs;
            std::set<AttrSet> sets;
            std::size_t size() const { return objs.size() + sets.size(); }
        };
        std::map<Key, Group> groups;
        const bool grouped = !os.empty() || !ss.empty();
        auto collect = [&] {
            auto key = key_of(os, ss);
            auto it = groups.find(key);
            if (it == groups.end()) it = groups.emplace(std::move(key), Group{snapshot(os, ss), {}, {}}).first;
            if (n.var_set)
                it->second.sets.insert(*set_[n.var]);
            else
                it->second.objs.insert(*obj_[n.var]);
            return grouped || it->second.size() < need;
        };
        solve(n.kids[0], Cont(collect));
        for (const auto& [key, g] : groups)
            if (g.size() >= need && !replay(os, ss, g.p, k)) return false;
        return true;
    }

    const KnowledgeBase& kb_;
    const Formula& f_;
    EvalConfig cfg_;
    std::set<Value> extra_;
    std::vector<AttrSet> owned_sets_;
    std::vector<const AttrSet*> set_domain_;
    bool set_domain_built_ = false;
    std::vector<std::pair<Value, Value>> commons_;
    Scope scope_;
    std::vector<std::string> obj_names_, set_names_;
    std::vector<const Value*> obj_;
    std::vector<const AttrSet*> set_;
    std::vector<int> trail_;
    std::set<std::string> diags_;
    CNode root_;
};

}  // namespace

EvalResult evaluate(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg) {
    auto safe = check_safe_range(f);
    if (!safe.ok) throw EvalError("unsafe formula: " + safe.diagnostics.front());
    return Solver(kb, f, cfg).run();
}

// --- structural model checking ----------------------------------------------

namespace {

class ModelChecker {
public:
    ModelChecker(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg)
        : kb_(kb), cfg_(cfg), objects_(object_domain(kb, f)), sets_(set_domain(kb, f, cfg)) {}

    Binding env;
    std::set<std::string> diags;

    bool eval(const Formula& f) {
        switch (f.kind) {
            case FormulaKind::Atom: return atom(f.atom);
            case FormulaKind::Not: return !eval(f.children[0]);
            case FormulaKind::And:
                for (const auto& c : f.children)
                    if (!eval(c)) return false;
                return true;
            case FormulaKind::Or:
                for (const auto& c : f.children)
                    if (eval(c)) return true;
                return false;
            case FormulaKind::Implies: return !eval(f.children[0]) || eval(f.children[1]);
            case FormulaKind::Exists: return count_witnesses(f, 1) >= 1;
            case FormulaKind::Forall: {
                return with_each(f, [&] { return eval(f.children[0]); }, /*want=*/false) == 0;
            }
            case FormulaKind::CountExists: {
                auto c = oval(f.count);
                if (!c) return false;
                auto t = count_threshold(*c);
                if (!t) {
                    diags.insert(count_error(*c));
                    return false;
                }
                if (*t <= 0) return true;
                return count_witnesses(f, static_cast<std::size_t>(*t)) >= static_cast<std::size_t>(*t);
            }
        }
        return false;
    }

private:
    /// Runs `test` with f.var bound to each domain element; counts elements
    /// for which test() == want, stopping early when `limit` is reached.
    template <typename F>
    std::size_t with_each(const Formula& f, F&& test, bool want, std::size_t limit = 1) {
        std::size_t n = 0;
        const std::string& v = f.var;
        if (is_set_variable(v)) {
            auto saved = env.sets.find(v) != env.sets.end() ? std::optional<AttrSet>(env.sets[v]) : std::nullopt;
            for (const auto& s : sets_) {
                env.sets[v] = s;
                if (test() == want && ++n >= limit) break;
            }
            if (saved)
                env.sets[v] = *saved;
            else
                env.sets.erase(v);
        } else {
            auto saved = env.objects.find(v) != env.objects.end() ? std::optional<Value>(env.objects[v]) : std::nullopt;
            for (const auto& d : objects_) {
                env.objects[v] = d;
                if (test() == want && ++n >= limit) break;
            }
            if (saved)
                env.objects[v] = *saved;
            else
                env.objects.erase(v);
        }
        return n;
    }

    std::size_t count_witnesses(const Formula& f, std::size_t limit) {
        return with_each(f, [&] { return eval(f.children[0]); }, true, limit);
    }

    std::optional<Value> oval(const Term& t) {
        switch (t.kind) {
            case Term::Kind::Const: return t.constant;
            case Term::Kind::ObjVar: {
                auto* v = env.object(t.name);
                if (!v) throw EvalError("binding does not cover " + t.name);
                return *v;
            }
            case Term::Kind::Apply: {
                std::vector<Value> args;
                for (const auto& a : t.args) {
                    auto v = oval(a);
                    if (!v) return std::nullopt;
                    args.push_back(*v);
                }
                try {
                    return datatype_function(t.name, args);
                } catch (const DatatypeError& e) {
                    diags.insert(e.what());
                    return std::nullopt;
                }
            }
            default: return std::nullopt;
        }
    }

    std::optional<AttrSet> sval(const Term& t) {
        if (t.kind == Term::Kind::SetVar) {
            auto* s = env.set(t.name);
            if (!s) throw EvalError("binding does not cover " + t.name);
            return *s;
        }
        if (t.kind != Term::Kind::SetLit) return std::nullopt;
        AttrSet out;
        for (const auto& p : t.pairs) {
            auto a = oval(p.attr);
            auto v = oval(p.value);
            if (!a || !v || !a->is_entity()) return std::nullopt;
            out.insert(a->entity(), *v);
        }
        return out;
    }

    bool attrs_match(const Term& attrs, const AttrSet& q) {
        if (attrs.implicit) return true;
        auto s = sval(attrs);
        if (!s) return false;
        return attrs.kind == Term::Kind::SetVar ? *s == q : literal_matches(*s, q);
    }

    bool atom(const Atom& a) {
        switch (a.kind) {
            case AtomKind::True: return true;
            case AtomKind::False: return false;
            case AtomKind::Rel: {
                auto s = oval(a.args[0]);
                auto o = oval(a.args[1]);
                if (!s || !o) return false;
                if (a.builtin == kNoValuePredicate) {
                    for (const auto& fact : kb_.no_value_facts())
                        if (Value(fact.property) == *s && fact.subject == *o && attrs_match(a.attrs, fact.qualifiers))
                            return true;
                    return false;
                }
                if (a.builtin == kCommonsPredicate) {
                    if (!s->is_string() || !o->is_string()) return false;
                    auto it = kb_.commons_namespaces().find(s->str_value());
                    return it != kb_.commons_namespaces().end() && it->second == o->str_value() &&
                           attrs_match(a.attrs, kEmptySet);
                }
                auto p = oval(a.predicate);
                if (!p || !p->is_entity()) return false;
                for (const auto& st : kb_.statements())
                    if (visible(st, cfg_) && st.property == p->entity() && st.subject == *s && st.value == *o &&
                        attrs_match(a.attrs, st.qualifiers))
                        return true;
                return false;
            }
            case AtomKind::SetMember: {
                auto attr = oval(a.args[0]);
                auto val = oval(a.args[1]);
                auto set = sval(a.args[2]);
                if (!attr || !val || !set || !attr->is_entity()) return false;
                if (a.args[0].is_var() && is_bookkeeping(attr->entity())) return false;
                return set->contains(attr->entity(), *val);
            }
            case AtomKind::Eq: {
                const bool ls = a.args[0].is_set(), rs = a.args[1].is_set();
                if (ls != rs) return false;
                if (ls) {
                    auto x = sval(a.args[0]);
                    auto y = sval(a.args[1]);
                    return x && y && *x == *y;
                }
                auto x = oval(a.args[0]);
                auto y = oval(a.args[1]);
                return x && y && *x == *y;
            }
            case AtomKind::DtRel: {
                std::vector<Value> args;
                for (const auto& t : a.args) {
                    auto v = oval(t);
                    if (!v) return false;
                    args.push_back(*v);
                }
                try {
                    return datatype_relation(a.name, args);
                } catch (const DatatypeError& e) {
                    diags.insert(e.what());
                    return false;
                }
            }
        }
        return false;
    }

    const KnowledgeBase& kb_;
    EvalConfig cfg_;

public:
    const std::set<Value> objects_;
    const std::vector<AttrSet> sets_;
};

}  // namespace

bool holds(const KnowledgeBase& kb, const Formula& f, const Binding& b, const EvalConfig& cfg,
           std::vector<std::string>* diagnostics) {
    ModelChecker mc(kb, f, cfg);
    mc.env = b;
    bool r = mc.eval(f);
    if (diagnostics) diagnostics->insert(diagnostics->end(), mc.diags.begin(), mc.diags.end());
    return r;
}

EvalResult brute_force_evaluate(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg) {
    if (kb.active_domain().size() > cfg.oracle_domain_limit)
        throw EvalError("active domain has " + std::to_string(kb.active_domain().size()) +
                        " constants, above the oracle limit of " + std::to_string(cfg.oracle_domain_limit));
    ModelChecker mc(kb, f, cfg);

    // Conjuncts of a top-level conjunction are tested as soon as their
    // variables are assigned; this only prunes, it never changes the answer.
    std::vector<const Formula*> parts;
    if (f.kind == FormulaKind::And)
        for (const auto& c : f.children) parts.push_back(&c);
    else
        parts.push_back(&f);

    std::vector<std::string> order;
    std::vector<std::set<std::string>> part_vars;
    for (const auto* p : parts) {
        part_vars.push_back(free_variables(*p));
        for (const auto& v : part_vars.back())
            if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
    std::vector<std::vector<const Formula*>> ready(order.size() + 1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::size_t last = 0;
        for (const auto& v : part_vars[i])
            last = std::max(last, static_cast<std::size_t>(std::find(order.begin(), order.end(), v) - order.begin()) + 1);
        ready[last].push_back(parts[i]);
    }

    EvalResult out;
    std::set<Binding> found;
    bool stop = false;
    auto check = [&](std::size_t level) {
        for (const auto* p : ready[level])
            if (!mc.eval(*p)) return false;
        return true;
    };
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (stop) return;
        if (i == order.size()) {
            found.insert(mc.env);
            if (cfg.max_bindings && found.size() >= *cfg.max_bindings) {
                stop = true;
                out.truncated = true;
            }
            return;
        }
        const std::string& v = order[i];
        if (is_set_variable(v)) {
            for (const auto& s : mc.sets_) {
                mc.env.sets[v] = s;
                if (check(i + 1)) assign(i + 1);
            }
            mc.env.sets.erase(v);
        } else {
            for (const auto& d : mc.objects_) {
                mc.env.objects[v] = d;
                if (check(i + 1)) assign(i + 1);
            }
            mc.env.objects.erase(v);
        }
    };
    if (check(0)) assign(0);
    out.bindings.assign(found.begin(), found.end());
    out.diagnostics.assign(mc.diags.begin(), mc.diags.end());
    return out;
}

}  // namespace marshal
