// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/catalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>
#include <variant>

#include "marshal/datatype.hpp"
#include "marshal/labels.hpp"
#include "marshal/literal.hpp"

namespace marshal {

namespace {

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

EntityId parse_entity(const std::string& text, const LabelMap& labels, int line) {
    if (auto e = EntityId::try_parse(text)) return *e;
    if (auto e = labels.lookup(text)) return *e;
    throw CatalogError("line " + std::to_string(line) + ": unknown entity '" + text + "'");
}

std::vector<std::vector<std::string>> parse_groups(const std::string& text) {
    std::vector<std::vector<std::string>> groups;
    std::size_t start = 0;
    for (;;) {
        std::size_t bar = text.find('|', start);
        groups.push_back(split_words(text.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return groups;
}

struct TemplateDefaults {
    std::vector<std::string> subject_vars;
    std::vector<std::vector<std::string>> unordered;
};

}  // namespace

std::string ConstraintTemplate::display() const { return name + " (" + type_id.str() + ")"; }

std::vector<ConstraintTemplate> load_templates(std::string_view text, const LabelMap& labels) {
    std::vector<ConstraintTemplate> out;
    std::map<std::string, TemplateDefaults> defaults;
    for (const auto& block : parse_blocks(text)) {
        const std::string* key = block.header("template");
        if (!key || key->empty())
            throw CatalogError("line " + std::to_string(block.first_line) + ": block without a `template:` header");
        auto it = std::find_if(out.begin(), out.end(), [&](const ConstraintTemplate& t) { return t.key == *key; });
        if (it == out.end()) {
            ConstraintTemplate t;
            t.key = *key;
            const std::string* name = block.header("name");
            const std::string* type = block.header("type");
            if (!name || !type)
                throw CatalogError("line " + std::to_string(block.first_line) + ": template '" + *key +
                                   "' needs `name:` and `type:` headers");
            t.name = *name;
            t.type_id = parse_entity(*type, labels, block.first_line);
            if (const std::string* scope = block.header("scope")) {
                if (*scope == "non-property")
                    t.scope = TemplateScope::NonProperty;
                else if (*scope != "property")
                    throw CatalogError("line " + std::to_string(block.first_line) + ": unknown scope '" + *scope + "'");
            }
            if (const std::string* req = block.header("required"))
                for (const auto& w : split_words(*req)) t.required_params.push_back(parse_entity(w, labels, block.first_line));
            if (const std::string* opt = block.header("optional"))
                for (const auto& w : split_words(*opt)) t.optional_params.push_back(parse_entity(w, labels, block.first_line));
            TemplateDefaults d;
            if (const std::string* s = block.header("subject")) d.subject_vars = split_words(*s);
            if (const std::string* u = block.header("unordered")) d.unordered = parse_groups(*u);
            defaults[*key] = d;
            out.push_back(std::move(t));
            it = out.end() - 1;
        }
        const TemplateDefaults& d = defaults[*key];
        TemplateFormula f;
        if (const std::string* l = block.header("label")) f.label = *l;
        f.text = block.body;
        while (!f.text.empty() && (f.text.back() == '\n' || f.text.back() == ' ')) f.text.pop_back();
        f.positive = parse_formula(block.body, labels, block.body_pos);
        if (f.positive.kind != FormulaKind::Implies)
            throw CatalogError("line " + std::to_string(block.first_line) + ": template '" + *key +
                               "' formula is not an implication");
        if (const std::string* pv = block.header("property_var")) f.property_var = *pv;
        f.subject_vars = d.subject_vars;
        if (const std::string* s = block.header("subject")) f.subject_vars = split_words(*s);
        f.unordered = d.unordered;
        if (const std::string* u = block.header("unordered")) f.unordered = parse_groups(*u);
        if (!f.unordered.empty() && (f.unordered.size() != 2 || f.unordered[0].size() != f.unordered[1].size()))
            throw CatalogError("line " + std::to_string(block.first_line) +
                               ": `unordered:` needs two groups of equal size");
        if (const std::string* v = block.header("variant")) f.variant = *v == "yes";
        it->formulas.push_back(std::move(f));
    }
    return out;
}

const std::vector<ConstraintTemplate>& builtin_templates() {
    static const std::vector<ConstraintTemplate> templates = load_templates(builtin_catalog_text());
    return templates;
}

const ConstraintTemplate* find_template(const std::vector<ConstraintTemplate>& templates, std::string_view key) {
    for (const auto& t : templates)
        if (t.key == key || t.name == key || t.type_id.str() == key) return &t;
    return nullptr;
}

std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::Mandatory: return "mandatory";
        case Severity::Suggestion: return "suggestion";
        case Severity::Normal: break;
    }
    return "normal";
}

// --- declarations -------------------------------------------------------------

Extraction extract_declarations(const KnowledgeBase& kb, const std::vector<ConstraintTemplate>& templates) {
    Extraction ex;
    const auto& sts = kb.statements();
    for (std::uint32_t idx : kb.by_property(wd::property_constraint)) {
        const Statement& st = sts[idx];
        ConstraintDeclaration d;
        d.statement_id = st.id;
        d.params = st.qualifiers;
        d.rank = st.rank;
        auto fail = [&](const std::string& why) {
            d.valid = false;
            d.diagnostics.push_back("declaration " + st.id + ": " + why);
        };
        if (st.subject.is_entity() && st.subject.entity().is_property())
            d.property = st.subject.entity();
        else
            fail("subject " + format_value(st.subject) + " is not a property");
        if (st.value.is_entity()) {
            d.type_id = st.value.entity();
            for (const auto& t : templates)
                if (t.scope == TemplateScope::Property && t.type_id == d.type_id) d.tmpl = &t;
            if (!d.tmpl) fail("unknown constraint type " + d.type_id.str());
        } else {
            fail("constraint type " + format_value(st.value) + " is not an item");
        }
        for (const auto& v : st.qualifiers.values_of(wd::constraint_status)) {
            if (v == Value(wd::mandatory_constraint)) d.severity = Severity::Mandatory;
            if (v == Value(wd::suggestion_constraint)) d.severity = Severity::Suggestion;
        }
        for (const auto& v : st.qualifiers.values_of(wd::exception_to_constraint)) d.exceptions.insert(v);
        if (d.tmpl)
            for (const auto& p : d.tmpl->required_params)
                if (!st.qualifiers.has_attr(p)) {
                    auto label = LabelMap::builtin().label_of(p);
                    fail("missing required parameter " + p.str() + (label ? " (" + *label + ")" : ""));
                }
        if (st.rank == Rank::Deprecated) fail("deprecated rank, skipped");
        if (d.valid) ++ex.valid;
        ex.declarations.push_back(std::move(d));
    }
    return ex;
}

Formula generic_violation_query(const TemplateFormula& f) { return negate_to_violation_query(f.positive); }

std::vector<ViolationQuery> derive_violation_queries(const ConstraintDeclaration& decl, bool variants) {
    std::vector<ViolationQuery> out;
    if (!decl.tmpl) return out;
    for (const auto& f : decl.tmpl->formulas) {
        if (f.variant && !variants) continue;
        std::map<std::string, Term> repl;
        repl[f.property_var] = Term::constant_of(Value(decl.property));
        if (free_variables(f.positive).count("?CQ")) repl["?CQ"] = Term::set_of(decl.params.qualifiers_only());
        Formula q = negate_to_violation_query(substitute(f.positive, repl));
        SafeRange sr = check_safe_range(q);
        if (!sr.ok) {
            std::string why;
            for (const auto& d : sr.diagnostics) why += (why.empty() ? "" : "; ") + d;
            throw CatalogError(decl.tmpl->key + (f.label.empty() ? "" : " [" + f.label + "]") +
                               ": derived query is not safe-range: " + why);
        }
        out.push_back({&f, std::move(q)});
    }
    return out;
}

// --- checking -----------------------------------------------------------------

namespace {

using Slot = std::variant<Value, AttrSet>;

std::vector<Slot> group_key(const Binding& b, const std::vector<std::string>& vars) {
    std::vector<Slot> key;
    for (const auto& v : vars) {
        if (const Value* o = b.object(v))
            key.emplace_back(*o);
        else if (const AttrSet* s = b.set(v))
            key.emplace_back(*s);
        else
            key.emplace_back(Value());
    }
    return key;
}

void swap_var(Binding& b, const std::string& x, const std::string& y) {
    auto ox = b.objects.find(x);
    auto oy = b.objects.find(y);
    if (ox != b.objects.end() && oy != b.objects.end()) std::swap(ox->second, oy->second);
    auto sx = b.sets.find(x);
    auto sy = b.sets.find(y);
    if (sx != b.sets.end() && sy != b.sets.end()) std::swap(sx->second, sy->second);
}

/// Puts the smaller of two interchangeable groups first.
Binding canonical(Binding b, const TemplateFormula& f) {
    if (f.unordered.size() != 2) return b;
    if (group_key(b, f.unordered[1]) < group_key(b, f.unordered[0]))
        for (std::size_t i = 0; i < f.unordered[0].size(); ++i) swap_var(b, f.unordered[0][i], f.unordered[1][i]);
    return b;
}

std::string describe(const Binding& b) {
    std::string out;
    for (const auto& [k, v] : b.objects) out += (out.empty() ? "" : ", ") + k + "=" + format_value(v);
    for (const auto& [k, s] : b.sets) out += (out.empty() ? "" : ", ") + k + "=" + format_attrset(s.qualifiers_only());
    return out.empty() ? "(no witnesses)" : out;
}

struct Outcome {
    std::vector<Violation> violations;
    std::vector<std::string> diagnostics;
    bool checked = false;
};

bool contains_regex(const Formula& f) {
    if (f.is_atom(AtomKind::DtRel)) return f.atom.name == "matches_regex";
    for (const auto& c : f.children)
        if (contains_regex(c)) return true;
    return false;
}

/// Evaluates one violation query and turns its bindings into violations.
void run_query(const KnowledgeBase& kb, const ConstraintTemplate& t, const TemplateFormula& f, const Formula& q,
               const ConstraintDeclaration* decl, const CheckConfig& cfg, const std::string& where, Outcome& out) {
    EvalResult res;
    try {
        res = evaluate(kb, q, cfg.eval);
    } catch (const std::exception& e) {
        out.diagnostics.push_back(where + ": " + e.what());
        return;
    }
    for (const auto& d : res.diagnostics) out.diagnostics.push_back(where + ": " + d);
    if (res.truncated) out.diagnostics.push_back(where + ": binding limit reached, results truncated");

    std::set<Binding> seen;
    for (const auto& raw : res.bindings) {
        Binding b = canonical(raw, f);
        if (!seen.insert(b).second) continue;
        Violation v;
        v.tmpl = &t;
        v.formula_label = f.label;
        v.binding = b;
        if (decl) {
            v.property = decl->property;
            v.declaration_id = decl->statement_id;
            v.params = decl->params.qualifiers_only();
            v.severity = decl->severity;
        } else if (const Value* p = b.object("?p"); p && p->is_entity()) {
            v.property = p->entity();
        }
        for (const auto& s : f.subject_vars) {
            const Value* sv = b.object(s);
            if (!sv) continue;
            if (!v.subject) v.subject = *sv;
            if (decl && decl->exceptions.count(*sv)) v.suppressed = true;
        }
        if (!res.diagnostics.empty()) {
            std::vector<std::string> diags;
            try {
                holds(kb, q, raw, cfg.eval, &diags);
            } catch (const std::exception& e) {
                diags.push_back(e.what());
            }
            std::sort(diags.begin(), diags.end());
            diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
            v.diagnostics = std::move(diags);
        }
        v.message = t.display() + (v.property ? " on " + v.property->str() : "") +
                    (f.label.empty() ? "" : " [" + f.label + "]") + ": " + describe(b);
        out.violations.push_back(std::move(v));
    }
}

Outcome check_declaration(const KnowledgeBase& kb, const ConstraintDeclaration& d, const CheckConfig& cfg) {
    Outcome out;
    if (d.tmpl && !cfg.templates.empty() && !cfg.templates.count(d.tmpl->key)) return out;
    if (!d.valid) {
        out.diagnostics = d.diagnostics;
        return out;
    }
    const std::string where = "declaration " + d.statement_id + " (" + d.property.str() + " " + d.tmpl->name + ")";
    std::vector<ViolationQuery> queries;
    try {
        queries = derive_violation_queries(d, cfg.variants);
    } catch (const std::exception& e) {
        out.diagnostics.push_back(where + ": " + e.what());
        return out;
    }
    out.checked = true;
    for (const auto& vq : queries) {
        const std::string at = where + (vq.formula->label.empty() ? "" : " [" + vq.formula->label + "]");
        if (contains_regex(vq.query)) {
            bool unsupported = false;
            for (const auto& pat : d.params.values_of(wd::format_as_regex)) {
                if (!pat.is_string()) continue;
                if (auto why = unsupported_pattern_reason(pat.str_value())) {
                    out.diagnostics.push_back(at + ": unsupported pattern " + format_value(pat) + ": " + *why);
                    unsupported = true;
                }
            }
            if (unsupported) continue;
        }
        run_query(kb, *d.tmpl, *vq.formula, vq.query, &d, cfg, at, out);
    }
    return out;
}

CheckResult merge(std::vector<Outcome>& outs) {
    CheckResult r;
    for (auto& o : outs) {
        if (o.checked) ++r.declarations_checked;
        for (auto& v : o.violations) r.violations.push_back(std::move(v));
        for (auto& d : o.diagnostics) r.diagnostics.push_back(std::move(d));
    }
    sort_violations(r.violations);
    return r;
}

CheckResult run_check(const KnowledgeBase& kb, const std::vector<ConstraintDeclaration>& decls, const CheckConfig& cfg,
                      bool parallel) {
    std::vector<Outcome> outs(decls.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < static_cast<long>(decls.size()); ++i) outs[i] = check_declaration(kb, decls[i], cfg);
    return merge(outs);
}

}  // namespace

CheckResult check(const KnowledgeBase& kb, const std::vector<ConstraintDeclaration>& decls, const CheckConfig& cfg) {
    return run_check(kb, decls, cfg, cfg.parallel);
}

CheckResult check_serial(const KnowledgeBase& kb, const std::vector<ConstraintDeclaration>& decls,
                         const CheckConfig& cfg) {
    return run_check(kb, decls, cfg, false);
}

CheckResult check_nonproperty(const KnowledgeBase& kb, const CheckConfig& cfg,
                              const std::vector<ConstraintTemplate>& templates) {
    std::vector<std::pair<const ConstraintTemplate*, const TemplateFormula*>> work;
    for (const auto& t : templates) {
        if (t.scope != TemplateScope::NonProperty) continue;
        if (!cfg.templates.empty() && !cfg.templates.count(t.key)) continue;
        for (const auto& f : t.formulas)
            if (!f.variant || cfg.variants) work.emplace_back(&t, &f);
    }
    std::vector<Outcome> outs(work.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
    for (long i = 0; i < static_cast<long>(work.size()); ++i) {
        const auto& [t, f] = work[i];
        const std::string where = t->name + (f->label.empty() ? "" : " [" + f->label + "]");
        Formula q;
        try {
            q = generic_violation_query(*f);
        } catch (const std::exception& e) {
            outs[i].diagnostics.push_back(where + ": " + e.what());
            continue;
        }
        outs[i].checked = true;
        run_query(kb, *t, *f, q, nullptr, cfg, where, outs[i]);
    }
    return merge(outs);
}

void sort_violations(std::vector<Violation>& vs) {
    auto key = [](const Violation& v) {
        return std::make_tuple(v.tmpl ? v.tmpl->type_id : EntityId{}, v.property.has_value(),
                               v.property.value_or(EntityId{}), v.subject.has_value(), v.subject.value_or(Value()));
    };
    std::stable_sort(vs.begin(), vs.end(), [&](const Violation& a, const Violation& b) {
        auto ka = key(a);
        auto kb = key(b);
        if (ka != kb) return ka < kb;
        if (a.binding != b.binding) return a.binding < b.binding;
        if (a.formula_label != b.formula_label) return a.formula_label < b.formula_label;
        return a.declaration_id < b.declaration_id;
    });
}

std::vector<std::string> catalog_self_test(const std::vector<ConstraintTemplate>& templates) {
    std::vector<std::string> failures;
    std::set<std::string> keys;
    for (const auto& t : templates) {
        if (!keys.insert(t.key).second) failures.push_back(t.key + ": duplicate template key");
        if (t.formulas.empty()) failures.push_back(t.key + ": no formulae");
        for (const auto& f : t.formulas) {
            const std::string where = t.key + (f.label.empty() ? "" : " [" + f.label + "]");
            if (f.positive.kind != FormulaKind::Implies) failures.push_back(where + ": not an implication");
            try {
                Formula again = parse_formula(print_formula(f.positive));
                if (!structurally_equal(again, f.positive)) failures.push_back(where + ": print/parse mismatch");
                Formula q = generic_violation_query(f);
                if (auto sr = check_safe_range(q); !sr.ok)
                    failures.push_back(where + ": violation query is not safe-range");
                if (t.scope == TemplateScope::Property) {
                    ConstraintDeclaration d;
                    d.property = P(1);
                    d.type_id = t.type_id;
                    d.tmpl = &t;
                    derive_violation_queries(d, true);
                }
            } catch (const std::exception& e) {
                failures.push_back(where + ": " + e.what());
            }
            for (const auto& s : f.subject_vars)
                if (!all_variables(f.positive).count(s)) failures.push_back(where + ": unknown subject variable " + s);
        }
    }
    return failures;
}

}  // namespace marshal
