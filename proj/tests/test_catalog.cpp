// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <random>

#include "doctest.h"

#include "marshal/catalog.hpp"
#include "marshal/eval.hpp"
#include "marshal/formula.hpp"
#include "marshal/rules.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

CheckResult run(const KnowledgeBase& kb, const std::string& tmpl = "") {
    CheckConfig cfg;
    if (!tmpl.empty()) cfg.templates = {tmpl};
    return check(kb, extract_declarations(kb).declarations, cfg);
}

std::set<Value> subjects(const CheckResult& r, bool include_suppressed = true) {
    std::set<Value> out;
    for (const auto& v : r.violations)
        if (v.subject && (include_suppressed || !v.suppressed)) out.insert(*v.subject);
    return out;
}

Binding project(const Binding& b, const std::set<std::string>& vars) {
    Binding out;
    for (const auto& [k, v] : b.objects)
        if (vars.count(k)) out.objects.emplace(k, v);
    for (const auto& [k, v] : b.sets)
        if (vars.count(k)) out.sets.emplace(k, v);
    return out;
}

}  // namespace

TEST_CASE("template library is well formed") {
    const auto& ts = builtin_templates();
    CHECK(ts.size() == 37);
    CHECK(catalog_self_test(ts).empty());
    std::set<std::string> keys;
    for (const auto& t : ts) {
        CHECK(keys.insert(t.key).second);
        CHECK_FALSE(t.formulas.empty());
    }
    CHECK(find_template(ts, "symmetric")->type_id == Q(21510862));
    CHECK(find_template(ts, "nope") == nullptr);
}

TEST_CASE("malformed template files are rejected") {
    CHECK_THROWS_AS(load_templates("template: x\nname: x\ntype: Q1\nscope: property\nP1(?x, ?y)\n"), CatalogError);
    CHECK_THROWS_AS(load_templates("name: x\nP1(?x, ?y) -> P2(?x, ?y)\n"), CatalogError);
    auto ok = load_templates("template: x\nname: x\ntype: Q1\nscope: non-property\nP1(?x, ?y) -> P2(?x, ?y)\n");
    CHECK(ok.size() == 1);
}

TEST_CASE("declaration extraction") {
    KnowledgeBase kb = load_native(R"(
P2302(P1, Q19474404) @ {P2316: Q21502408, P2303: Q7}
P2302(P2, Q21510856)
P2302(P3, Q999999999)
P2302(P4, Q21502410) rank=deprecated
P2302(Q5, Q21502410)
P2302(P6, Q62026391)
P2302(P7, Q21502410) @ {P2316: Q62026391}
)");
    Extraction ex = extract_declarations(kb);
    REQUIRE(ex.declarations.size() == 7);
    CHECK(ex.valid == 2);
    const auto& d = ex.declarations;
    CHECK(d[0].valid);
    CHECK(d[0].severity == Severity::Mandatory);
    CHECK(d[0].exceptions == std::set<Value>{Value(Q(7))});
    CHECK_FALSE(d[1].valid);
    CHECK(d[1].diagnostics.front().find("P2306") != std::string::npos);
    CHECK_FALSE(d[2].valid);
    CHECK(d[2].diagnostics.front().find("Q999999999") != std::string::npos);
    CHECK_FALSE(d[3].valid);
    CHECK(d[3].diagnostics.front().find("deprecated") != std::string::npos);
    CHECK_FALSE(d[4].valid);
    CHECK(d[6].severity == Severity::Suggestion);
    CHECK(d[6].valid);
}

TEST_CASE("worked examples") {
    SUBCASE("single value") {
        auto r = run(load_native("P2302(P1, Q19474404)\nP1(Q1, Q2)\nP1(Q1, Q3)\nP1(Q4, Q2)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(1))});
        CHECK(r.violations.size() == 1);
    }
    SUBCASE("single value with separator") {
        auto r = run(load_native(
            "P2302(P1, Q19474404) @ {P4155: P580}\nP1(Q1, Q2) @ {P580: 2000-01-01/11}\nP1(Q1, Q3) @ {P580: 2001-01-01/11}\n"));
        CHECK(r.violations.empty());
    }
    SUBCASE("item requires statement") {
        auto r = run(load_native(
            "P2302(P1, Q21503247) @ {P2306: P31, P2305: Q5}\nP1(Q1, Q9)\nP31(Q1, Q5)\nP1(Q2, Q9)\nP31(Q2, Q6)\nP1(Q3, Q9)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2)), Value(Q(3))});
    }
    SUBCASE("value requires statement") {
        auto r = run(load_native("P2302(P1, Q21510864) @ {P2306: P31}\nP1(Q1, Q2)\nP1(Q1, Q3)\nP31(Q3, Q5)\n"));
        CHECK(r.violations.size() == 1);
    }
    SUBCASE("one of and none of") {
        auto r = run(load_native("P2302(P1, Q21510859) @ {P2305: Q10, P2305: Q11}\nP1(Q1, Q10)\nP1(Q2, Q12)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2))});
        auto n = run(load_native("P2302(P1, Q52558054) @ {P2305: Q10}\nP1(Q1, Q10)\nP1(Q2, Q12)\n"));
        CHECK(subjects(n) == std::set<Value>{Value(Q(1))});
    }
    SUBCASE("inverse") {
        auto r = run(load_native("P2302(P40, Q21510855) @ {P2306: P22}\nP40(Q1, Q2)\nP22(Q2, Q1)\nP40(Q1, Q3)\n"));
        CHECK(r.violations.size() == 1);
    }
    SUBCASE("range on quantities") {
        auto r = run(load_native("P2302(P1082, Q21510860) @ {P2313: 0, P2312: 100}\n"
                                 "P1082(Q1, 50)\nP1082(Q2, -1)\nP1082(Q3, 101)\nP1082(Q4, 100)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2)), Value(Q(3))});
    }
    SUBCASE("range on dates") {
        auto r = run(load_native("P2302(P569, Q21510860) @ {P2310: 1900-01-01/11, P2311: 2000-01-01/11}\n"
                                 "P569(Q1, 1950-01-01/11)\nP569(Q2, 1850-06-01/11)\nP569(Q3, 2010-01-01/11)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2)), Value(Q(3))});
    }
    SUBCASE("format") {
        auto r = run(load_native("P2302(P212, Q21502404) @ {P1793: \"97[89]-\\\\d+\"}\nP212(Q1, \"978-123\")\nP212(Q2, \"123\")\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2))});
    }
    SUBCASE("unsupported pattern is skipped with a diagnostic") {
        auto r = run(load_native("P2302(P212, Q21502404) @ {P1793: \"(?<=a)b\"}\nP212(Q1, \"ab\")\n"));
        CHECK(r.violations.empty());
        CHECK_FALSE(r.diagnostics.empty());
    }
    SUBCASE("integer") {
        auto r = run(load_native("P2302(P1, Q52848401)\nP1(Q1, 3)\nP1(Q2, 3.5)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(2))});
    }
    SUBCASE("allowed qualifiers") {
        auto r = run(load_native("P2302(P1, Q21510851) @ {P2306: P580}\nP1(Q1, Q2) @ {P580: Q3}\nP1(Q4, Q2) @ {P582: Q3}\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(4))});
    }
    SUBCASE("citation needed") {
        auto r = run(load_native("P2302(P1, Q54554025)\nP1(Q1, Q2) refs=1\nP1(Q3, Q2)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(3))});
    }
    SUBCASE("conflicts with") {
        auto r = run(load_native("P2302(P1, Q21502838) @ {P2306: P2}\nP1(Q1, Q9)\nP2(Q1, Q8)\nP1(Q3, Q9)\n"));
        CHECK(subjects(r) == std::set<Value>{Value(Q(1))});
    }
}

TEST_CASE("Commons link") {
    KnowledgeBase kb = load_native(R"(
P2302(P18, Q21510852) @ {P2307: "File"}
P18(Q1, "a.jpg")
P18(Q2, "b.jpg")
P18(Q3, "c.jpg")
commons_ns("a.jpg", "File")
commons_ns("b.jpg", "Category")
)");
    auto r = run(kb);
    std::map<std::string, std::set<Value>> by_formula;
    for (const auto& v : r.violations) by_formula[v.formula_label].insert(*v.subject);
    CHECK(by_formula["page exists"] == std::set<Value>{Value(Q(3))});
    CHECK(by_formula["namespace"] == std::set<Value>{Value(Q(2)), Value(Q(3))});
}

TEST_CASE("single value excludes its exceptions in the formula") {
    auto r = run(load_native("P2302(P1, Q19474404) @ {P2303: Q1}\nP1(Q1, Q2)\nP1(Q1, Q3)\nP1(Q4, Q2)\nP1(Q4, Q3)\n"));
    CHECK(subjects(r) == std::set<Value>{Value(Q(4))});
}

TEST_CASE("exceptions suppress but keep violations") {
    KnowledgeBase kb = load_native("P2302(P1, Q52848401) @ {P2303: Q1}\nP1(Q1, 0.5)\nP1(Q4, 1.5)\n");
    auto r = run(kb);
    REQUIRE(r.violations.size() == 2);
    CHECK(subjects(r, false) == std::set<Value>{Value(Q(4))});
    for (const auto& v : r.violations) CHECK(v.suppressed == (*v.subject == Value(Q(1))));
}

TEST_CASE("severity follows the constraint status") {
    KnowledgeBase kb = load_native("P2302(P1, Q52848401) @ {P2316: Q21502408}\nP2302(P2, Q52848401) @ {P2316: Q62026391}\n"
                                   "P2302(P3, Q52848401)\nP1(Q1, 0.5)\nP2(Q1, 0.5)\nP3(Q1, 0.5)\n");
    std::map<EntityId, Severity> sev;
    for (const auto& v : run(kb).violations) sev[*v.property] = v.severity;
    CHECK(sev[P(1)] == Severity::Mandatory);
    CHECK(sev[P(2)] == Severity::Suggestion);
    CHECK(sev[P(3)] == Severity::Normal);
}

TEST_CASE("zero violations exactly when the positive formula holds") {
    std::mt19937_64 rng(77);
    for (const auto& t : builtin_templates()) {
        if (t.scope != TemplateScope::Property) continue;
        int kbs = 0;
        for (int attempt = 0; kbs < 8 && attempt < 400; ++attempt) {
            KnowledgeBase kb;
            if (!random_kb_for(t, rng, kb)) continue;
            ++kbs;
            for (const auto& d : extract_declarations(kb).declarations) {
                if (!d.valid) continue;
                for (const auto& tf : t.formulas) {
                    if (tf.text.find("matches_regex") != std::string::npos) continue;
                    Formula positive = substitute(tf.positive, {{tf.property_var, Term::constant_of(Value(d.property))},
                                                                {"?CQ", Term::set_of(d.params.qualifiers_only())}});
                    const Formula& body = positive.children[0];
                    if (!check_safe_range(body).ok) continue;
                    Formula violation = negate_to_violation_query(positive);
                    std::set<std::string> body_vars = free_variables(body);
                    std::set<Binding> flagged;
                    for (const auto& b : evaluate(kb, violation).bindings) flagged.insert(project(b, body_vars));
                    for (const auto& b : evaluate(kb, body).bindings) {
                        CAPTURE(t.key);
                        CAPTURE(b.str());
                        CHECK(holds(kb, positive, b) == !flagged.count(b));
                    }
                }
            }
        }
        CHECK(kbs == 8);
    }
}

TEST_CASE("parallel and serial checks agree") {
    std::mt19937_64 rng(78);
    for (const auto& t : builtin_templates()) {
        if (t.scope != TemplateScope::Property) continue;
        KnowledgeBase merged;
        for (int i = 0; i < 6; ++i) {
            KnowledgeBase kb;
            if (random_kb_for(t, rng, kb)) merged = merge(merged, kb);
        }
        auto decls = extract_declarations(merged).declarations;
        CheckConfig cfg;
        cfg.variants = true;
        auto a = check(merged, decls, cfg), b = check_serial(merged, decls, cfg);
        REQUIRE(a.violations.size() == b.violations.size());
        for (std::size_t i = 0; i < a.violations.size(); ++i) {
            CHECK(a.violations[i].message == b.violations[i].message);
            CHECK(a.violations[i].binding == b.violations[i].binding);
        }
        CHECK(a.diagnostics == b.diagnostics);
    }
}

TEST_CASE("closure removes symmetric gaps") {
    std::mt19937_64 rng(79);
    const ConstraintTemplate* t = find_template(builtin_templates(), "symmetric");
    for (int i = 0; i < 40; ++i) {
        KnowledgeBase kb;
        if (!random_kb_for(*t, rng, kb)) continue;
        CheckConfig cfg;
        cfg.templates = {"symmetric"};
        auto before = check(kb, extract_declarations(kb).declarations, cfg);
        CHECK(before.violations.size() == symmetric_gaps(kb, P(1)).size());
        // Literal objects cannot become subjects, so those gaps remain.
        std::set<std::pair<Value, Value>> remaining;
        for (const auto& [x, y] : symmetric_gaps(kb, P(1)))
            if (!y.is_entity() && !y.is_anon()) remaining.emplace(x, y);
        KnowledgeBase closed = closure(kb, builtin_ontology());
        std::set<std::pair<Value, Value>> after;
        for (const auto& v : check(closed, extract_declarations(closed).declarations, cfg).violations)
            after.emplace(*v.binding.object("?x"), *v.binding.object("?y"));
        CHECK(after == remaining);
    }
}

TEST_CASE("unordered pairs are reported once") {
    auto r = run(load_native("P2302(P1, Q21502410)\nP1(Q1, \"x\")\nP1(Q2, \"x\")\nP1(Q3, \"x\")\n"));
    CHECK(r.violations.size() == 3);
}

TEST_CASE("non-property templates bind the property") {
    KnowledgeBase kb = load_native("P31(P5, Q18647519)\nP5(Q1, Q2)\nP5(Q2, Q1)\nP5(Q3, Q4)\n");
    CheckConfig cfg;
    cfg.templates = {"asymmetric"};
    auto r = check_nonproperty(kb, cfg);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].property == P(5));
}

TEST_CASE("report order is deterministic") {
    KnowledgeBase kb = load_native("P2302(P2, Q52848401)\nP2302(P1, Q52848401)\nP1(Q2, 0.5)\nP1(Q1, 0.5)\nP2(Q1, 0.5)\n");
    auto r = run(kb);
    auto sorted = r.violations;
    sort_violations(sorted);
    REQUIRE(sorted.size() == 3);
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i].message == r.violations[i].message);
    CHECK(*sorted[0].property == P(1));
    CHECK(*sorted[0].subject == Value(Q(1)));
}
