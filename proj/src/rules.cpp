// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/rules.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "marshal/eval.hpp"
#include "marshal/literal.hpp"

namespace marshal {

namespace {

bool visible(const Statement& st, bool include_deprecated) {
    return include_deprecated || st.rank != Rank::Deprecated;
}

struct KeyHash {
    std::size_t operator()(const StatementKey& k) const {
        std::size_t h = k.subject.hash();
        hash_combine(h, std::hash<std::uint64_t>{}(k.property.id));
        hash_combine(h, k.value.hash());
        hash_combine(h, k.qualifiers.hash());
        return h;
    }
};

using KeySet = std::unordered_set<StatementKey, KeyHash>;

std::vector<const Formula*> conjuncts(const Formula& body) {
    std::vector<const Formula*> out;
    if (body.kind == FormulaKind::And)
        for (const auto& c : body.children) out.push_back(&c);
    else
        out.push_back(&body);
    return out;
}

[[noreturn]] void reject(const std::string& rule, const std::string& why) {
    throw RuleError("rule '" + rule + "': " + why);
}

bool has_apply(const Term& t) {
    if (t.kind == Term::Kind::Apply) return true;
    for (const auto& p : t.pairs)
        if (has_apply(p.attr) || has_apply(p.value)) return true;
    return false;
}

void validate(const Rule& r) {
    std::set<std::string> bound;
    std::set<std::string> rel_sets;
    std::vector<const Atom*> pending;
    for (const Formula* c : conjuncts(r.body)) {
        if (c->kind != FormulaKind::Atom) reject(r.name, "body must be a conjunction of atoms");
        const Atom& a = c->atom;
        switch (a.kind) {
            case AtomKind::Rel: {
                if (!a.builtin.empty()) reject(r.name, "built-in predicate '" + a.builtin + "' in rule body");
                for (const Term* t : {&a.predicate, &a.args[0], &a.args[1], &a.attrs}) {
                    if (has_apply(*t)) reject(r.name, "datatype function in rule body");
                    for (const auto& v : term_variables(*t)) bound.insert(v);
                }
                if (a.attrs.kind == Term::Kind::SetVar && !a.attrs.implicit) rel_sets.insert(a.attrs.name);
                break;
            }
            case AtomKind::SetMember:
            case AtomKind::Eq:
                for (const auto& t : a.args) {
                    if (has_apply(t)) reject(r.name, "datatype function in rule body");
                    if (a.kind == AtomKind::Eq && t.is_set()) reject(r.name, "set equality in rule body");
                }
                pending.push_back(&a);
                break;
            default:
                reject(r.name, "body may only contain relational, set and equality atoms");
        }
    }
    for (const Atom* a : pending) {
        if (a->kind != AtomKind::SetMember) continue;
        const Term& s = a->args[2];
        if (s.kind == Term::Kind::SetVar && !rel_sets.count(s.name))
            reject(r.name, "set variable " + s.name + " is not the attribute set of a body atom");
        if (s.kind == Term::Kind::SetLit && !s.is_ground()) reject(r.name, "set literal in a set atom must be ground");
    }
    auto is_bound = [&](const Term& t) {
        for (const auto& v : term_variables(t))
            if (!bound.count(v)) return false;
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const Atom* a : pending) {
            bool ready = a->kind == AtomKind::SetMember || is_bound(a->args[0]) || is_bound(a->args[1]);
            if (!ready) continue;
            for (std::size_t i = 0; i < 2; ++i)
                for (const auto& v : term_variables(a->args[i])) changed |= bound.insert(v).second;
        }
    }
    for (const auto& v : all_variables(r.body))
        if (!bound.count(v) && !is_set_variable(v)) reject(r.name, "variable " + v + " is not range-restricted");

    if (!r.head.is_atom(AtomKind::Rel) || !r.head.atom.builtin.empty())
        reject(r.name, "head must be a single relational atom");
    const Atom& h = r.head.atom;
    for (const Term* t : {&h.predicate, &h.args[0], &h.args[1]}) {
        if (has_apply(*t)) reject(r.name, "datatype function in rule head");
        for (const auto& v : term_variables(*t))
            if (!bound.count(v)) reject(r.name, "head variable " + v + " does not occur in the body");
    }
    if (h.attrs.kind == Term::Kind::SetVar && !h.attrs.implicit && !rel_sets.count(h.attrs.name))
        reject(r.name, "head set variable " + h.attrs.name + " is not the attribute set of a body atom");
    if (h.attrs.kind == Term::Kind::SetLit) {
        for (const auto& p : h.attrs.pairs) {
            if (p.attr.kind == Term::Kind::Const &&
                (!p.attr.constant.is_entity() || is_bookkeeping(p.attr.constant.entity())))
                reject(r.name, "head attribute must be a property");
            for (const auto& v : term_variables(p.attr))
                if (!bound.count(v)) reject(r.name, "head variable " + v + " does not occur in the body");
            for (const auto& v : term_variables(p.value))
                if (!bound.count(v)) reject(r.name, "head variable " + v + " does not occur in the body");
        }
    }
}

// --- compiled rule bodies -------------------------------------------------

struct CT {
    enum class K { Const, Obj, Set, Implicit, Lit };
    K k = K::Const;
    Value c;
    int slot = -1;
    std::vector<CT> kids;  // Lit: attribute, value, attribute, value, ...
};

struct CAtom {
    AtomKind kind = AtomKind::True;
    CT pred, a, b, set;
    int rel_pos = -1;  // position among the body's relational atoms
};

struct CompiledRule {
    const Rule* rule = nullptr;
    std::vector<CAtom> atoms;
    std::vector<std::size_t> rels;                // atom indexes of relational atoms
    std::vector<std::vector<std::size_t>> order;  // per delta position
    CAtom head;
    int nobj = 0;
    int nset = 0;
};

class Compiler {
public:
    CT term(const Term& t) {
        CT c;
        switch (t.kind) {
            case Term::Kind::Const:
                c.c = t.constant;
                break;
            case Term::Kind::ObjVar:
                c.k = CT::K::Obj;
                c.slot = slot(obj_, t.name);
                break;
            case Term::Kind::SetVar:
                c.k = t.implicit ? CT::K::Implicit : CT::K::Set;
                if (!t.implicit) c.slot = slot(set_, t.name);
                break;
            case Term::Kind::SetLit:
                c.k = CT::K::Lit;
                for (const auto& p : t.pairs) {
                    c.kids.push_back(term(p.attr));
                    c.kids.push_back(term(p.value));
                }
                break;
            case Term::Kind::Apply:
                break;  // rejected by validation
        }
        return c;
    }

    CAtom atom(const Atom& a) {
        CAtom c;
        c.kind = a.kind;
        if (a.kind == AtomKind::Rel) {
            c.pred = term(a.predicate);
            c.a = term(a.args[0]);
            c.b = term(a.args[1]);
            c.set = term(a.attrs);
        } else {
            c.a = term(a.args[0]);
            c.b = term(a.args[1]);
            if (a.kind == AtomKind::SetMember) c.set = term(a.args[2]);
        }
        return c;
    }

    int nobj() const { return static_cast<int>(obj_.size()); }
    int nset() const { return static_cast<int>(set_.size()); }

private:
    static int slot(std::map<std::string, int>& m, const std::string& name) {
        auto [it, fresh] = m.try_emplace(name, static_cast<int>(m.size()));
        (void)fresh;
        return it->second;
    }
    std::map<std::string, int> obj_;
    std::map<std::string, int> set_;
};

void collect_slots(const CT& t, std::set<int>& obj, std::set<int>& set) {
    if (t.k == CT::K::Obj) obj.insert(t.slot);
    if (t.k == CT::K::Set) set.insert(t.slot);
    for (const auto& k : t.kids) collect_slots(k, obj, set);
}

bool ct_bound(const CT& t, const std::set<int>& obj, const std::set<int>& set) {
    std::set<int> o, s;
    collect_slots(t, o, s);
    return std::includes(obj.begin(), obj.end(), o.begin(), o.end()) &&
           std::includes(set.begin(), set.end(), s.begin(), s.end());
}

/// Greedy join order starting from the delta atom: ready equality and set
/// atoms first, then relational atoms with the most bound positions.
std::vector<std::size_t> plan(const CompiledRule& cr, std::size_t first) {
    std::vector<std::size_t> order{first};
    std::vector<bool> used(cr.atoms.size(), false);
    used[first] = true;
    std::set<int> obj, set;
    auto bind = [&](const CAtom& a) {
        for (const CT* t : {&a.pred, &a.a, &a.b, &a.set}) collect_slots(*t, obj, set);
    };
    bind(cr.atoms[first]);
    for (std::size_t n = 1; n < cr.atoms.size(); ++n) {
        int best_score = 1 << 20;
        std::size_t best = 0;
        for (std::size_t i = 0; i < cr.atoms.size(); ++i) {
            if (used[i]) continue;
            const CAtom& a = cr.atoms[i];
            int score;
            if (a.kind == AtomKind::Eq) {
                score = ct_bound(a.a, obj, set) || ct_bound(a.b, obj, set) ? 0 : 1000;
            } else if (a.kind == AtomKind::SetMember) {
                score = ct_bound(a.set, obj, set) ? 1 : 1000;
            } else {
                bool p = ct_bound(a.pred, obj, set);
                bool s = ct_bound(a.a, obj, set);
                bool o = ct_bound(a.b, obj, set);
                score = !p ? 10 : (s && o) ? 2 : (s || o) ? 3 : 5;
            }
            if (score < best_score) {
                best_score = score;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        bind(cr.atoms[best]);
    }
    return order;
}

CompiledRule compile(const Rule& r) {
    CompiledRule cr;
    cr.rule = &r;
    Compiler c;
    for (const Formula* f : conjuncts(r.body)) {
        CAtom a = c.atom(f->atom);
        if (a.kind == AtomKind::Rel) {
            a.rel_pos = static_cast<int>(cr.rels.size());
            cr.rels.push_back(cr.atoms.size());
        }
        cr.atoms.push_back(std::move(a));
    }
    cr.head = c.atom(r.head.atom);
    cr.nobj = c.nobj();
    cr.nset = c.nset();
    for (std::size_t d : cr.rels) cr.order.push_back(plan(cr, d));
    return cr;
}

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/// Statement instantiated from a rule head, or nullopt when the head does
/// not denote a statement (non-entity subject, non-property predicate).
std::optional<Statement> instantiate(const Atom& head, const std::function<std::optional<Value>(const Term&)>& obj,
                                     const std::function<const AttrSet*(const Term&)>& set) {
    auto p = obj(head.predicate);
    auto s = obj(head.args[0]);
    auto o = obj(head.args[1]);
    if (!p || !s || !o) return std::nullopt;
    if (!p->is_entity() || !p->entity().is_property()) return std::nullopt;
    if (!s->is_entity() && !s->is_anon()) return std::nullopt;
    AttrSet quals;
    const Term& t = head.attrs;
    if (t.kind == Term::Kind::SetVar && !t.implicit) {
        const AttrSet* q = set(t);
        if (!q) return std::nullopt;
        quals = q->qualifiers_only();
    } else if (t.kind == Term::Kind::SetLit) {
        for (const auto& pair : t.pairs) {
            auto a = obj(pair.attr);
            auto v = obj(pair.value);
            if (!a || !v || !a->is_entity() || is_bookkeeping(a->entity())) return std::nullopt;
            quals.insert(a->entity(), *v);
        }
    }
    return make_statement(*s, p->entity(), *o, std::move(quals));
}

class Matcher {
public:
    Matcher(const KnowledgeBase& kb, const CompiledRule& cr, bool include_deprecated, std::vector<Statement>& out)
        : kb_(kb), cr_(cr), incl_(include_deprecated), out_(out), obj_(cr.nobj), set_(cr.nset, nullptr),
          matched_(cr.rels.size(), 0), ranges_(cr.atoms.size()) {}

    void run(std::size_t delta_pos, Range old, Range delta, Range all) {
        for (std::size_t j = 0; j < cr_.rels.size(); ++j)
            ranges_[cr_.rels[j]] = j < delta_pos ? old : j == delta_pos ? delta : all;
        order_ = &cr_.order[delta_pos];
        step(0);
    }

private:
    std::optional<Value> value(const CT& t) const {
        if (t.k == CT::K::Const) return t.c;
        if (t.k == CT::K::Obj) return obj_[t.slot];
        return std::nullopt;
    }

    bool unify(const CT& t, const Value& v) {
        if (t.k == CT::K::Const) return t.c == v;
        if (t.k != CT::K::Obj) return false;
        if (obj_[t.slot]) return *obj_[t.slot] == v;
        obj_[t.slot] = v;
        trail_.push_back(t.slot);
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            obj_[trail_.back()].reset();
            trail_.pop_back();
        }
    }

    std::optional<AttrSet> ground_literal(const CT& t) const {
        AttrSet s;
        for (std::size_t i = 0; i + 1 < t.kids.size(); i += 2) {
            auto a = value(t.kids[i]);
            auto v = value(t.kids[i + 1]);
            if (!a || !v || !a->is_entity()) return std::nullopt;
            s.insert(a->entity(), *v);
        }
        return s;
    }

    template <class F>
    void match_set(const CT& t, const AttrSet& q, F&& k) {
        switch (t.k) {
            case CT::K::Implicit:
                k();
                return;
            case CT::K::Set:
                if (set_[t.slot]) {
                    if (*set_[t.slot] == q) k();
                } else {
                    set_[t.slot] = &q;
                    k();
                    set_[t.slot] = nullptr;
                }
                return;
            case CT::K::Lit:
                match_pairs(t, 0, q, k);
                return;
            default:
                return;
        }
    }

    template <class F>
    void match_pairs(const CT& t, std::size_t i, const AttrSet& q, F& k) {
        if (i == t.kids.size()) {
            auto lit = ground_literal(t);
            if (lit && literal_matches(*lit, q)) k();
            return;
        }
        for (const auto& [a, v] : q) {
            std::size_t mark = trail_.size();
            if (unify(t.kids[i], Value(a)) && unify(t.kids[i + 1], v)) match_pairs(t, i + 2, q, k);
            undo(mark);
        }
    }

    void step(std::size_t n) {
        if (n == order_->size()) {
            emit();
            return;
        }
        const std::size_t idx = (*order_)[n];
        const CAtom& a = cr_.atoms[idx];
        switch (a.kind) {
            case AtomKind::Rel:
                match_rel(a, ranges_[idx], n);
                return;
            case AtomKind::SetMember: {
                std::optional<AttrSet> scratch;
                const AttrSet* s = nullptr;
                if (a.set.k == CT::K::Set) {
                    s = set_[a.set.slot];
                } else if (a.set.k == CT::K::Lit) {
                    scratch = ground_literal(a.set);
                    if (scratch) s = &*scratch;
                }
                if (!s) return;
                const bool hide = a.a.k == CT::K::Obj;
                for (const auto& [attr, v] : *s) {
                    if (hide && is_bookkeeping(attr)) continue;
                    std::size_t mark = trail_.size();
                    if (unify(a.a, Value(attr)) && unify(a.b, v)) step(n + 1);
                    undo(mark);
                }
                return;
            }
            case AtomKind::Eq: {
                std::size_t mark = trail_.size();
                auto l = value(a.a);
                auto r = value(a.b);
                bool ok = l ? unify(a.b, *l) : r ? unify(a.a, *r) : false;
                if (ok) step(n + 1);
                undo(mark);
                return;
            }
            default:
                return;
        }
    }

    void match_rel(const CAtom& a, Range range, std::size_t n) {
        const auto& sts = kb_.statements();
        auto visit = [&](std::uint32_t i) {
            const Statement& st = sts[i];
            if (!visible(st, incl_)) return;
            std::size_t mark = trail_.size();
            if (unify(a.pred, Value(st.property)) && unify(a.a, st.subject) && unify(a.b, st.value)) {
                matched_[a.rel_pos] = i;
                match_set(a.set, st.qualifiers, [&] { step(n + 1); });
            }
            undo(mark);
        };
        auto p = value(a.pred);
        if (!p) {
            for (std::size_t i = range.lo; i < range.hi; ++i) visit(static_cast<std::uint32_t>(i));
            return;
        }
        if (!p->is_entity()) return;
        auto s = value(a.a);
        auto o = value(a.b);
        const auto& idx = s ? kb_.by_subject(p->entity(), *s)
                            : o ? kb_.by_value(p->entity(), *o) : kb_.by_property(p->entity());
        for (auto it = std::lower_bound(idx.begin(), idx.end(), range.lo); it != idx.end() && *it < range.hi; ++it)
            visit(*it);
    }

    void emit() {
        auto st = instantiate_compiled();
        if (!st) return;
        st->derivation = Derivation{cr_.rule->name, {matched_.begin(), matched_.end()}};
        out_.push_back(std::move(*st));
    }

    std::optional<Statement> instantiate_compiled() const {
        const CAtom& h = cr_.head;
        auto p = value(h.pred);
        auto s = value(h.a);
        auto o = value(h.b);
        if (!p || !s || !o) return std::nullopt;
        if (!p->is_entity() || !p->entity().is_property()) return std::nullopt;
        if (!s->is_entity() && !s->is_anon()) return std::nullopt;
        AttrSet quals;
        if (h.set.k == CT::K::Set) {
            if (!set_[h.set.slot]) return std::nullopt;
            quals = set_[h.set.slot]->qualifiers_only();
        } else if (h.set.k == CT::K::Lit) {
            auto lit = ground_literal(h.set);
            if (!lit) return std::nullopt;
            quals = std::move(*lit);
        }
        return make_statement(*s, p->entity(), *o, std::move(quals));
    }

    const KnowledgeBase& kb_;
    const CompiledRule& cr_;
    bool incl_;
    std::vector<Statement>& out_;
    std::vector<std::optional<Value>> obj_;
    std::vector<const AttrSet*> set_;
    std::vector<int> trail_;
    std::vector<std::size_t> matched_;
    std::vector<Range> ranges_;
    const std::vector<std::size_t>* order_ = nullptr;
};

KeySet visible_keys(const KnowledgeBase& kb, bool include_deprecated) {
    KeySet seen;
    seen.reserve(kb.size() * 2);
    for (const auto& st : kb.statements())
        if (visible(st, include_deprecated)) seen.insert(StatementKey::of(st));
    return seen;
}

}  // namespace

// --- rules and rule sets ----------------------------------------------------

Rule make_rule(std::string name, const Formula& implication, RuleOrigin origin) {
    if (implication.kind != FormulaKind::Implies) reject(name, "expected an implication `body -> head`");
    Rule r{std::move(name), implication.children[0], implication.children[1], origin};
    validate(r);
    return r;
}

Rule parse_rule(std::string name, std::string_view text, const LabelMap& labels, RuleOrigin origin) {
    return make_rule(std::move(name), parse_formula(text, labels), origin);
}

std::string print_rule(const Rule& r, const PrintOptions& opts) {
    return print_formula(make_implies(r.body, r.head), opts);
}

void RuleSet::add(Rule r) {
    if (find(r.name)) throw RuleError("duplicate rule name '" + r.name + "'");
    rules_.push_back(std::move(r));
}

void RuleSet::extend(const RuleSet& other) {
    for (const auto& r : other.rules()) add(r);
}

bool RuleSet::remove(std::string_view name) {
    auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.name == name; });
    if (it == rules_.end()) return false;
    rules_.erase(it);
    return true;
}

const Rule* RuleSet::find(std::string_view name) const {
    for (const auto& r : rules_)
        if (r.name == name) return &r;
    return nullptr;
}

namespace {

constexpr const char* kOntology = R"(
rule: subclass_of_transitive
`subclass_of`(?x, ?y) & `subclass_of`(?y, ?z) -> `subclass_of`(?x, ?z)
---
rule: instance_of_propagation
`instance_of`(?x, ?c) & `subclass_of`(?c, ?d) -> `instance_of`(?x, ?d)
---
rule: subproperty_lifting
`subproperty_of`(?p, ?q) & ?p(?s, ?o)@?S -> ?q(?s, ?o)@?S
---
rule: symmetric_property
`instance_of`(?p, `symmetric_property`) & ?p(?x, ?y)@?S -> ?p(?y, ?x)@?S
---
rule: transitive_property
`instance_of`(?p, `transitive_property`) & ?p(?x, ?y) & ?p(?y, ?z) -> ?p(?x, ?z)
---
rule: reflexive_property_subject
`instance_of`(?p, `reflexive_property`) & ?p(?x, ?y) -> ?p(?x, ?x)
---
rule: reflexive_property_object
`instance_of`(?p, `reflexive_property`) & ?p(?x, ?y) -> ?p(?y, ?y)
)";

constexpr const char* kSymmetricConstraintRule = R"(
rule: symmetric_constraint
`property_constraint`(?p, `symmetric_constraint`) & ?p(?x, ?y)@?S -> ?p(?y, ?x)@?S
)";

}  // namespace

RuleSet builtin_ontology(const OntologyOptions& opts) {
    RuleSet rs = load_rules(kOntology, LabelMap::builtin(), RuleOrigin::Builtin);
    if (opts.symmetric_constraint_as_rule)
        rs.extend(load_rules(kSymmetricConstraintRule, LabelMap::builtin(), RuleOrigin::Builtin));
    return rs;
}

RuleSet load_rules(std::string_view text, const LabelMap& labels, RuleOrigin origin) {
    RuleSet rs;
    for (const auto& block : parse_blocks(text)) {
        const std::string* name = block.header("rule");
        if (!name || name->empty())
            throw RuleError("line " + std::to_string(block.first_line) + ": rule block without a `rule:` header");
        rs.add(make_rule(*name, parse_formula(block.body, labels, block.body_pos), origin));
    }
    return rs;
}

RuleSet load_rules_file(const std::string& path, const LabelMap& labels) {
    std::ifstream in(path);
    if (!in) throw RuleError("cannot open rule file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_rules(buf.str(), labels, RuleOrigin::User);
}

// --- closure ----------------------------------------------------------------

StatementKey StatementKey::of(const Statement& st) {
    return {st.subject, st.property, st.value, st.qualifiers.qualifiers_only()};
}

KnowledgeBase closure(const KnowledgeBase& kb, const RuleSet& rules, ClosureStats* stats, const ClosureOptions& opts) {
    KnowledgeBase out = kb;
    ClosureStats local;
    std::vector<CompiledRule> compiled;
    compiled.reserve(rules.size());
    for (const auto& r : rules.rules()) compiled.push_back(compile(r));

    KeySet seen = visible_keys(out, opts.include_deprecated);
    const std::size_t chunk = std::max<std::size_t>(opts.chunk, 1);

    struct Item {
        std::size_t rule;
        std::size_t delta_pos;
        Range delta;
    };

    std::size_t lo = 0;
    std::size_t hi = out.size();
    while (lo < hi) {
        if (opts.max_rounds && local.rounds >= *opts.max_rounds) break;
        ++local.rounds;

        std::vector<Item> items;
        for (std::size_t r = 0; r < compiled.size(); ++r) {
            for (std::size_t d = 0; d < compiled[r].rels.size(); ++d) {
                const CAtom& a = compiled[r].atoms[compiled[r].rels[d]];
                if (a.pred.k == CT::K::Const) {
                    if (!a.pred.c.is_entity()) continue;
                    const auto& idx = out.by_property(a.pred.c.entity());
                    auto first = std::lower_bound(idx.begin(), idx.end(), lo);
                    if (first == idx.end() || *first >= hi) continue;
                }
                for (std::size_t c = lo; c < hi; c += chunk) items.push_back({r, d, {c, std::min(hi, c + chunk)}});
            }
        }

        std::vector<std::vector<Statement>> results(items.size());
        const Range old{0, lo};
        const Range all{0, hi};
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(items.size()); ++i) {
            const Item& it = items[i];
            Matcher m(out, compiled[it.rule], opts.include_deprecated, results[i]);
            m.run(it.delta_pos, old, it.delta, all);
        }

        for (auto& batch : results) {
            for (auto& st : batch) {
                if (!seen.insert(StatementKey::of(st)).second) continue;
                ++local.per_rule[st.derivation->rule];
                ++local.derived;
                out.add_statement(std::move(st));
            }
        }
        lo = hi;
        hi = out.size();
    }
    if (stats) *stats = std::move(local);
    return out;
}

KnowledgeBase closure_reference(const KnowledgeBase& kb, const RuleSet& rules, ClosureStats* stats,
                                const ClosureOptions& opts) {
    KnowledgeBase out = kb;
    ClosureStats local;
    KeySet seen = visible_keys(out, opts.include_deprecated);
    EvalConfig cfg;
    cfg.include_deprecated = opts.include_deprecated;

    for (bool changed = true; changed;) {
        if (opts.max_rounds && local.rounds >= *opts.max_rounds) break;
        ++local.rounds;
        changed = false;
        for (const auto& rule : rules.rules()) {
            EvalResult res = evaluate(out, rule.body, cfg);
            for (const auto& b : res.bindings) {
                auto obj = [&](const Term& t) -> std::optional<Value> {
                    if (t.kind == Term::Kind::Const) return t.constant;
                    if (t.kind == Term::Kind::ObjVar) {
                        if (const Value* v = b.object(t.name)) return *v;
                    }
                    return std::nullopt;
                };
                auto set = [&](const Term& t) -> const AttrSet* { return b.set(t.name); };
                auto st = instantiate(rule.head.atom, obj, set);
                if (!st || !seen.insert(StatementKey::of(*st)).second) continue;
                st->derivation = Derivation{rule.name, {}};
                ++local.per_rule[rule.name];
                ++local.derived;
                out.add_statement(std::move(*st));
                changed = true;
            }
        }
    }
    if (stats) *stats = std::move(local);
    return out;
}

// --- explanations -------------------------------------------------------------

std::size_t DerivationNode::depth() const {
    std::size_t d = 0;
    for (const auto& p : premises) d = std::max(d, p.depth());
    return rule.empty() ? 0 : d + 1;
}

namespace {

DerivationNode build_tree(const KnowledgeBase& kb, std::size_t idx) {
    DerivationNode node;
    node.statement = idx;
    const Statement& st = kb.statements()[idx];
    if (st.derivation) {
        node.rule = st.derivation->rule;
        for (std::size_t p : st.derivation->premises)
            if (p < idx) node.premises.push_back(build_tree(kb, p));
    }
    return node;
}

void print_tree(const KnowledgeBase& kb, const DerivationNode& n, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    const Statement& st = kb.statements()[n.statement];
    out += format_statement(st);
    out += n.rule.empty() ? "  [" + st.id + "]" : "  [" + st.id + " by " + n.rule + "]";
    out += '\n';
    for (const auto& p : n.premises) print_tree(kb, p, indent + 1, out);
}

}  // namespace

DerivationNode explain(const KnowledgeBase& kb, std::string_view statement_id) {
    auto idx = kb.index_of(statement_id);
    if (!idx) throw RuleError("unknown statement '" + std::string(statement_id) + "'");
    return build_tree(kb, *idx);
}

std::string print_derivation(const KnowledgeBase& kb, const DerivationNode& node) {
    std::string out;
    print_tree(kb, node, 0, out);
    return out;
}

}  // namespace marshal
