// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <random>

#include "doctest.h"

#include "marshal/rules.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

std::set<StatementKey> keys(const KnowledgeBase& kb) {
    std::set<StatementKey> out;
    for (const auto& st : kb.statements()) out.insert(StatementKey::of(st));
    return out;
}

std::set<std::pair<Value, Value>> pairs_of(const KnowledgeBase& kb, const EntityId& p) {
    std::set<std::pair<Value, Value>> out;
    for (const auto* st : kb.facts_for(p)) out.emplace(st->subject, st->value);
    return out;
}

std::string random_hierarchy(std::mt19937_64& rng, int classes, int edges, int instances) {
    std::string text;
    auto node = [&](int n) { return "Q" + std::to_string(1 + rng() % n); };
    for (int i = 0; i < edges; ++i) text += "P279(" + node(classes) + ", " + node(classes) + ")\n";
    for (int i = 0; i < instances; ++i)
        text += "P31(Q" + std::to_string(1000 + i) + ", " + node(classes) + ")\n";
    for (int i = 0; i < 4; ++i) text += "P26(" + node(classes) + ", " + node(classes) + ")\n";
    text += "P2302(P26, Q21510862)\nP1647(P3, P4)\nP4(Q1, Q2) @ {P580: 2000-01-01/11}\n";
    return text;
}

}  // namespace

TEST_CASE("parallel closure equals the serial reference") {
    std::mt19937_64 rng(31);
    RuleSet rules = builtin_ontology();
    for (int round = 0; round < 40; ++round) {
        KnowledgeBase kb = load_native(random_hierarchy(rng, 10, 14, 6));
        ClosureStats fast_stats, slow_stats;
        ClosureOptions small_chunks;
        small_chunks.chunk = 3;
        KnowledgeBase fast = closure(kb, rules, &fast_stats, small_chunks);
        KnowledgeBase slow = closure_reference(kb, rules, &slow_stats);
        CHECK(keys(fast) == keys(slow));
        CHECK(fast_stats.derived == slow_stats.derived);
    }
}

TEST_CASE("subclass closure matches graph reachability") {
    std::mt19937_64 rng(32);
    for (int round = 0; round < 40; ++round) {
        KnowledgeBase kb = load_native(random_hierarchy(rng, 15, 20, 5));
        KnowledgeBase closed = closure(kb, builtin_ontology());
        auto base = pairs_of(kb, wd::subclass_of);
        CHECK(pairs_of(closed, wd::subclass_of) == transitive_closure(base));

        std::set<std::pair<Value, Value>> inst;
        for (const auto& [x, c] : pairs_of(kb, wd::instance_of)) {
            inst.emplace(x, c);
            for (const auto& [a, b] : transitive_closure(base))
                if (a == c) inst.emplace(x, b);
        }
        CHECK(pairs_of(closed, wd::instance_of) == inst);
    }
}

TEST_CASE("closure is idempotent and monotone") {
    std::mt19937_64 rng(33);
    RuleSet rules = builtin_ontology();
    for (int round = 0; round < 20; ++round) {
        KnowledgeBase kb = load_native(random_hierarchy(rng, 12, 15, 4));
        KnowledgeBase once = closure(kb, rules);
        ClosureStats again;
        KnowledgeBase twice = closure(once, rules, &again);
        CHECK(again.derived == 0);
        CHECK(keys(twice) == keys(once));
        auto before = keys(kb), after = keys(once);
        CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
}

TEST_CASE("symmetric constraint and subproperty rules") {
    KnowledgeBase kb = load_native(
        "P2302(P26, Q21510862)\nP26(Q1, Q2) @ {P580: 2000-01-01/11}\nP1647(P3, P4)\nP3(Q5, Q6) @ {P585: 1999-01-01/9}\n");
    KnowledgeBase closed = closure(kb, builtin_ontology());
    CHECK(pairs_of(closed, P(26)).count({Value(Q(2)), Value(Q(1))}) == 1);
    CHECK(pairs_of(closed, P(4)).count({Value(Q(5)), Value(Q(6))}) == 1);
    OntologyOptions off;
    off.symmetric_constraint_as_rule = false;
    CHECK(pairs_of(closure(kb, builtin_ontology(off)), P(26)).size() == 1);
}

TEST_CASE("deprecated statements do not fire rules") {
    KnowledgeBase kb = load_native("P279(Q1, Q2) rank=deprecated\nP279(Q2, Q3)\n");
    CHECK(closure(kb, builtin_ontology()).size() == kb.size());
    ClosureOptions opts;
    opts.include_deprecated = true;
    CHECK(closure(kb, builtin_ontology(), nullptr, opts).size() == kb.size() + 1);
}

TEST_CASE("user rules copy qualifiers and validate shape") {
    RuleSet rs = load_rules("rule: spouse_to_partner\nP26(?x, ?y)@?S -> P451(?x, ?y)@?S\n");
    REQUIRE(rs.size() == 1);
    KnowledgeBase kb = load_native("P26(Q1, Q2) @ {P580: 2000-01-01/11} rank=preferred\n");
    KnowledgeBase closed = closure(kb, rs);
    auto derived = closed.facts_for(P(451));
    REQUIRE(derived.size() == 1);
    CHECK(derived[0]->qualifiers.qualifiers_only() == AttrSet{{P(580), Value(day(2000, 1, 1))}});
    CHECK(derived[0]->rank == Rank::Normal);
    CHECK_THROWS_AS(load_rules("rule: bad\nP1(?x, ?y) -> !P2(?x, ?y)\n"), RuleError);
    CHECK_THROWS_AS(load_rules("rule: unbound\nP1(?x, ?y) -> P2(?x, ?z)\n"), RuleError);
    CHECK_THROWS_AS(load_rules("rule: a\nP1(?x, ?y) -> P2(?x, ?y)\n---\nrule: a\nP1(?x, ?y) -> P3(?x, ?y)\n"), RuleError);
}

TEST_CASE("derivations explain derived statements") {
    KnowledgeBase kb = load_native("P279(Q1, Q2)\nP279(Q2, Q3)\nP279(Q3, Q4)\nP31(Q9, Q1)\n");
    KnowledgeBase closed = closure(kb, builtin_ontology());
    const Statement* target = nullptr;
    for (const auto& st : closed.statements())
        if (st.property == wd::instance_of && st.value == Value(Q(4))) target = &st;
    REQUIRE(target != nullptr);
    REQUIRE(target->derivation.has_value());
    DerivationNode tree = explain(closed, target->id);
    CHECK_FALSE(tree.rule.empty());
    CHECK(tree.depth() >= 2);
    std::string text = print_derivation(closed, tree);
    CHECK(text.find("P31(Q9, Q1)") != std::string::npos);
    CHECK(explain(closed, closed.statements()[0].id).premises.empty());
    CHECK_THROWS_AS(explain(closed, "no-such-id"), RuleError);
}
