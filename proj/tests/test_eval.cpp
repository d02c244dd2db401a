// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <random>

#include "doctest.h"

#include "marshal/eval.hpp"
#include "marshal/formula.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

// Queries over the predicates of random_kb_for(symmetric): P1, P2 and friends.
const char* const kQueries[] = {
    "P1(?x, ?y)",
    "P1(?x, ?y) & !P1(?y, ?x)",
    "P1(?x, ?y) & P1(?y, ?z) & ?x != ?z",
    "P1(?x, ?y)@?S & (@rank : @preferred) in ?S",
    "P1(?x, ?y)@?S & !(exists ?v . (P2 : ?v) in ?S)",
    "P1(?x, ?y)@?S & P2(?x, ?z)@?S",
    "P1(?x, ?y)@?S & P1(?x, ?z)@?T & ?S != ?T",
    "P1(?x, ?y) | P2(?x, ?y)",
    "P1(?x, ?y) & (forall ?z . !P2(?y, ?z) | ?z = ?x)",
    "P1(?x, ?y) & exists[2] ?o . P1(?x, ?o)",
    "P1(?x, ?y) & !(exists[2] ?o . P2(?x, ?o))",
    "P1(?x, ?y)@{P2: ?v}",
    "P1(?x, ?y) & ?p = P1 & ?p(?y, ?x)",
    "no_value(?p, ?s)@?Q & ?p(?s, ?o)",
    "no_value(?p, ?s)@?Q & ?p(?s, ?o)@?Q",
    "?p(?s, ?o) & ?p != P2302 & !(exists ?w . ?p(?o, ?w))",
    "P1(?x, ?y) & P2(?x, ?t) & P2(?y, ?u) & less_than(?t, ?u)",
    "P1(?x, ?y) & P2(?x, ?t) & P2(?y, ?u) & overlaps(?t, ?u)",
};

}  // namespace

TEST_CASE("evaluator agrees with the generate-and-test reference") {
    std::mt19937_64 rng(2024);
    const ConstraintTemplate* t = find_template(builtin_templates(), "symmetric");
    REQUIRE(t != nullptr);
    std::vector<Formula> queries;
    for (const char* q : kQueries) queries.push_back(parse_formula(q));
    int kbs = 0;
    std::size_t nonempty = 0;
    RandomKbLimits lim;
    lim.properties = 2;
    while (kbs < 150) {
        KnowledgeBase kb;
        if (!random_kb_for(*t, rng, kb, lim)) continue;
        ++kbs;
        for (std::size_t i = 0; i < queries.size(); ++i) {
            CAPTURE(kQueries[i]);
            auto fast = evaluate(kb, queries[i]);
            auto slow = brute_force_evaluate(kb, queries[i]);
            nonempty += !fast.bindings.empty();
            CHECK(fast.bindings == slow.bindings);
            CHECK(std::is_sorted(fast.bindings.begin(), fast.bindings.end()));
            CHECK(std::adjacent_find(fast.bindings.begin(), fast.bindings.end()) == fast.bindings.end());
            for (const auto& b : fast.bindings) CHECK(holds(kb, queries[i], b));
        }
    }
    CHECK(nonempty > 300);
}

TEST_CASE("relational atoms enumerate exactly the visible statements") {
    KnowledgeBase kb = load_native(R"(
P1(Q1, Q2)
P1(Q2, Q3) rank=deprecated
P1(Q3, Q1) @ {P5: Q9}
P2(Q1, Q1)
)");
    auto r = evaluate(kb, parse_formula("P1(?x, ?y)"));
    CHECK(r.bindings.size() == 2);
    EvalConfig all;
    all.include_deprecated = true;
    CHECK(evaluate(kb, parse_formula("P1(?x, ?y)"), all).bindings.size() == 3);
    auto sets = evaluate(kb, parse_formula("P1(?x, ?y)@?S"));
    REQUIRE(sets.bindings.size() == 2);
    const AttrSet* s = sets.bindings[1].set("?S");
    REQUIRE(s != nullptr);
    CHECK(s->contains(P(5), Value(Q(9))));
}

TEST_CASE("set literals match qualifiers exactly and bookkeeping by inclusion") {
    KnowledgeBase kb = load_native(R"(
P1(Q1, Q2) @ {P5: Q9} rank=preferred refs=1
P1(Q3, Q4) @ {P5: Q9, P6: Q8}
P1(Q5, Q6)
)");
    auto match = [&](const char* q) { return evaluate(kb, parse_formula(q)).bindings.size(); };
    CHECK(match("P1(?x, ?y)@{P5: Q9}") == 1);
    CHECK(match("P1(?x, ?y)@{P5: Q9, @rank: @preferred}") == 1);
    CHECK(match("P1(?x, ?y)@{P5: Q9, @rank: @normal}") == 0);
    CHECK(match("P1(?x, ?y)@{}") == 1);
    CHECK(match("P1(?x, ?y)@{P5: ?v}") == 1);
    CHECK(match("P1(?x, ?y)@?S & (P5 : Q9) in ?S") == 2);
}

TEST_CASE("datatype errors are reported, not thrown") {
    KnowledgeBase kb = load_native("P1(Q1, \"text\")\nP1(Q2, 5)\n");
    auto r = evaluate(kb, parse_formula("P1(?x, ?v) & less_than(?v, 10)"));
    CHECK(r.bindings.size() == 1);
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("unsafe queries are refused") {
    KnowledgeBase kb = load_native("P1(Q1, Q2)\n");
    CHECK_THROWS_AS(evaluate(kb, parse_formula("!P1(?x, ?y)")), EvalError);
    CHECK_THROWS_AS(holds(kb, parse_formula("P1(?x, ?y)"), Binding{}), EvalError);
}

TEST_CASE("binding limit truncates") {
    KnowledgeBase kb = load_native("P1(Q1, Q2)\nP1(Q2, Q3)\nP1(Q3, Q4)\n");
    EvalConfig cfg;
    cfg.max_bindings = 2;
    auto r = evaluate(kb, parse_formula("P1(?x, ?y)"), cfg);
    CHECK(r.bindings.size() == 2);
    CHECK(r.truncated);
}

TEST_CASE("the reference evaluator refuses large domains") {
    std::string text;
    for (int i = 0; i < 20; ++i) text += "P1(Q" + std::to_string(i + 1) + ", Q" + std::to_string(i + 100) + ")\n";
    CHECK_THROWS_AS(brute_force_evaluate(load_native(text), parse_formula("P1(?x, ?y)")), EvalError);
}
