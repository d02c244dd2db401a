// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "doctest.h"

#include "marshal/catalog.hpp"
#include "marshal/eval.hpp"
#include "marshal/formula.hpp"
#include "marshal/lexer.hpp"

using namespace marshal;

namespace {

const char* const kSamples[] = {
    "P26(?x, ?y) -> P26(?y, ?x)",
    "P31(?x, Q5) & !(exists ?d . P570(?x, ?d))",
    "P26(?x, ?y)@?SQ & (P580 : ?t) in ?SQ",
    "P26(?x, ?y)@{P580: 2000-01-01/11, P582: ?e}",
    "exists[2] ?o . P1(?s, ?o)",
    "exists[?n] ?o . P1(?s, ?o) & ?n = ?n",
    "forall ?y . !P1(?x, ?y) | ?x = ?y",
    "less_than(difference(?a, ?b), 5) | overlaps(?a, ?b)",
    "no_value(?p, ?s)@?Q & ?p(?s, ?o)@?Q",
    "Commons_namespace(?v, \"File\") & matches_regex(?v, \"[a-z]+\\\\.jpg\")",
    "P1(?x, -12.5 unit=Q11573) & P2(?x, \"a \\\"quoted\\\" string\") & P3(?x, _:b4)",
    "(P1(?a, ?b) | P2(?a, ?b)) & ?a != ?b & true",
    "`instance_of`(?x, `human`) -> !`subclass_of`(?x, ?c) | false",
    "P1(?x, ?y)@?S & (@rank : @normal) in ?S & (@wikidata_reference : ?r) in ?S",
};

}  // namespace

TEST_CASE("print and parse are inverse") {
    for (const char* text : kSamples) {
        CAPTURE(text);
        Formula f = parse_formula(text);
        std::string once = print_formula(f);
        Formula g = parse_formula(once);
        CHECK(structurally_equal(f, g));
        CHECK(print_formula(g) == once);
        PrintOptions labelled{&LabelMap::builtin()};
        CHECK(structurally_equal(parse_formula(print_formula(f, labelled)), f));
    }
}

TEST_CASE("every template formula round-trips") {
    for (const auto& t : builtin_templates())
        for (const auto& tf : t.formulas) {
            CAPTURE(tf.text);
            Formula again = parse_formula(print_formula(tf.positive));
            CHECK(structurally_equal(again, tf.positive));
        }
}

TEST_CASE("parse errors carry a position and the expected tokens") {
    try {
        parse_formula("P1(?x, ?y) &\n  P2(?x ?y)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("2:") != std::string::npos);
        CHECK(msg.find("expected") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_formula("`no such label`(?x, ?y)"), ParseError);
    CHECK_THROWS_AS(parse_formula("P1(?x, ?y) ->"), ParseError);
    CHECK_THROWS_AS(parse_formula("P1(?x, ?y) &"), ParseError);
}

TEST_CASE("free and implicit variables") {
    Formula f = parse_formula("P1(?x, ?y) & exists ?z . P2(?y, ?z)@?Z");
    CHECK(free_variables(f) == std::set<std::string>{"?Z", "?x", "?y"});
    CHECK(implicit_variables(f).size() == 1);
    CHECK(all_variables(f).count("?z") == 1);
    CHECK(all_variables(f).count("?Z") == 1);
    Formula c = parse_formula("P1(?x, Q5)@{P2: \"s\"}");
    auto consts = formula_constants(c);
    CHECK(consts.count(Value(Q(5))) == 1);
    CHECK(consts.count(Value::string("s")) == 1);
    CHECK(ground_set_literals(c).size() == 1);
}

TEST_CASE("negation normal form") {
    auto same = [](const char* a, const char* b) {
        CAPTURE(a);
        CHECK(structurally_equal(negate(parse_formula(a)), parse_formula(b)));
    };
    same("P1(?x, ?y) & P2(?x, ?y)", "!P1(?x, ?y) | !P2(?x, ?y)");
    same("P1(?x, ?y) | P2(?x, ?y)", "!P1(?x, ?y) & !P2(?x, ?y)");
    same("P1(?x, ?y) -> P2(?x, ?y)", "P1(?x, ?y) & !P2(?x, ?y)");
    same("!P1(?x, ?y)", "P1(?x, ?y)");
    same("forall ?y . P1(?x, ?y)", "exists ?y . !P1(?x, ?y)");
    same("exists ?y . P1(?x, ?y)", "!(exists ?y . P1(?x, ?y))");
    for (const char* text : kSamples) {
        Formula f = parse_formula(text);
        CHECK(structurally_equal(negate(negate(f)), negate(negate(negate(negate(f))))));
    }
}

TEST_CASE("violation queries lift existential witnesses") {
    Formula q = negate_to_violation_query(parse_formula("P1(?x, ?y) -> (forall ?z . P2(?y, ?z))"));
    CHECK(free_variables(q) == std::set<std::string>{"?x", "?y", "?z"});
    CHECK(check_safe_range(q).ok == false);
    Formula r = negate_to_violation_query(parse_formula("P1(?x, ?y) -> P2(?y, ?x)"));
    CHECK(print_formula(r) == "P1(?x, ?y) & !P2(?y, ?x)");
    CHECK_THROWS_AS(negate_to_violation_query(parse_formula("P1(?x, ?y)")), FormulaError);
}

TEST_CASE("safe-range analysis") {
    CHECK(check_safe_range(parse_formula("P1(?x, ?y) & !P2(?y, ?x)")).ok);
    CHECK(check_safe_range(parse_formula("P1(?x, ?y) & ?z = ?x")).ok);
    CHECK(check_safe_range(parse_formula("P1(?x, ?y)@?S & (P2 : ?v) in ?S")).ok);
    CHECK(check_safe_range(parse_formula("P1(?x, ?y) | P2(?x, ?y)")).ok);
    auto bad = check_safe_range(parse_formula("!P1(?x, ?y)"));
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.diagnostics.empty());
    CHECK_FALSE(check_safe_range(parse_formula("P1(?x, ?y) | P2(?x, ?z)")).ok);
    CHECK_FALSE(check_safe_range(parse_formula("P1(?x, ?y) & less_than(?y, ?w)")).ok);
    CHECK_FALSE(check_safe_range(parse_formula("P1(?x, ?y) & (forall ?z . P2(?y, ?z))")).ok);
}

TEST_CASE("substitution respects binders") {
    Formula f = parse_formula("P1(?x, ?y) & exists ?x . P2(?x, ?y)");
    Formula g = substitute(f, {{"?x", Term::constant_of(Value(Q(7)))}});
    CHECK(structurally_equal(g, parse_formula("P1(Q7, ?y) & exists ?x . P2(?x, ?y)")));
}

TEST_CASE("block files") {
    auto blocks = parse_blocks("# comment\nrule: a\nP1(?x, ?y) -> P2(?x, ?y)\n---\nrule: b\nlabel: x y\nP3(?x, ?y) -> P4(?x, ?y)\n");
    REQUIRE(blocks.size() == 2);
    CHECK(*blocks[0].header("rule") == "a");
    CHECK(*blocks[1].header("label") == "x y");
    CHECK(blocks[1].header("nope") == nullptr);
    CHECK(blocks[1].body.find("P3") != std::string::npos);
}
