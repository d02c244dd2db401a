// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

// Shared test helpers: fixture paths, random small KBs and independent
// oracles. Nothing here calls the evaluator.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "marshal/catalog.hpp"
#include "marshal/ingest.hpp"
#include "marshal/kb.hpp"
#include "marshal/labels.hpp"

namespace marshal::testing {

inline std::string fixture_path(const std::string& name) { return std::string(MARSHAL_FIXTURES) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline KnowledgeBase kb_from(std::string_view native) { return load_native(native); }

inline TimeValue day(std::int64_t y, unsigned m, unsigned d) {
    TimeValue t;
    t.year = y;
    t.month = static_cast<std::uint8_t>(m);
    t.day = static_cast<std::uint8_t>(d);
    t.precision = 11;
    return t;
}

inline TimeValue year(std::int64_t y) {
    TimeValue t;
    t.year = y;
    t.precision = 9;
    return t;
}

// --- random KBs ----------------------------------------------------------------

struct RandomKbLimits {
    std::size_t entities = 5;       // plain items used as subjects and values
    std::size_t properties = 3;     // statement predicates besides property_constraint
    std::size_t qual_attrs = 2;     // qualifier attributes
    std::size_t domain = 12;        // active-domain constants
    std::size_t max_statements = 7;
};

/// Value for a declaration parameter, drawn from the KB's own pools.
inline Value param_value(const EntityId& param, std::mt19937_64& rng, const std::vector<Value>& items,
                         const std::vector<EntityId>& props, const std::vector<Value>& scalars) {
    auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    if (param == wd::property || param == wd::separator) return Value(pick(props));
    if (param == wd::relation)
        return Value(pick(std::vector<EntityId>{Q(21503252), Q(21514624), Q(30208840)}));
    if (param == wd::property_scope) return Value(pick(std::vector<EntityId>{Q(54828448), Q(54828449), Q(54828450)}));
    if (param == wd::format_as_regex) return Value::string("a+");
    if (param == wd::namespace_) return Value::string("File");
    if (param == wd::minimum_value || param == wd::maximum_value) {
        for (const auto& s : scalars)
            if (s.is_quantity()) return s;
        return Value::quantity(Decimal(2));
    }
    if (param == wd::minimum_date || param == wd::maximum_date) {
        for (const auto& s : scalars)
            if (s.is_time()) return s;
        return Value(day(2000, 1, 1));
    }
    if (param == EntityId::pseudo(Pseudo::MinimumCount)) return Value::quantity(Decimal(2));
    return pick(items);
}

/// Small random KB exercising template `t`: a declaration on P1 when the
/// template is property-scoped, plus random statements over the template's
/// own predicates. Returns false when the domain budget was exceeded.
inline bool random_kb_for(const ConstraintTemplate& t, std::mt19937_64& rng, KnowledgeBase& out,
                          const RandomKbLimits& lim = {}) {
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    // Predicates and class items mentioned by the template.
    std::set<EntityId> tmpl_props, tmpl_items;
    bool wants_time = false, wants_qty = false, wants_string = false;
    for (const auto& f : t.formulas) {
        for (const auto& c : formula_constants(f.positive)) {
            if (!c.is_entity()) continue;
            const EntityId& e = c.entity();
            if (e.is_property() && e != wd::property_constraint) tmpl_props.insert(e);
            if (e.kind == EntityKind::Item && e != t.type_id) tmpl_items.insert(e);
        }
        const std::string& text = f.text;
        if (text.find("less_than") != std::string::npos || text.find("overlaps") != std::string::npos ||
            text.find("date") != std::string::npos)
            wants_time = true;
        if (text.find("geq") != std::string::npos || text.find("integer") != std::string::npos ||
            text.find("unit") != std::string::npos || text.find("precise") != std::string::npos ||
            text.find("difference") != std::string::npos)
            wants_qty = true;
        if (text.find("regex") != std::string::npos || text.find("Commons") != std::string::npos) wants_string = true;
    }
    for (const auto& p : t.required_params) tmpl_props.erase(p);
    for (const auto& p : t.optional_params) tmpl_props.erase(p);

    std::vector<EntityId> props{P(1)};
    std::vector<EntityId> extra(tmpl_props.begin(), tmpl_props.end());
    extra.push_back(P(2));
    std::shuffle(extra.begin(), extra.end(), rng);
    while (props.size() < lim.properties && !extra.empty()) {
        props.push_back(extra.back());
        extra.pop_back();
    }
    std::vector<Value> items;
    std::size_t n_items = 2 + below(lim.entities - 1);
    for (std::size_t i = 1; i <= n_items && items.size() < lim.entities; ++i) items.push_back(Value(Q(i)));
    for (const auto& c : tmpl_items)
        if (items.size() < lim.entities && coin(0.5)) items.push_back(Value(c));
    std::vector<Value> scalars;
    if (wants_time || coin(0.15)) scalars.push_back(Value(coin(0.5) ? day(2000, 1, 1 + below(3)) : year(1999 + below(3))));
    if (wants_qty || coin(0.15)) scalars.push_back(Value::quantity(Decimal(static_cast<long long>(below(3)))));
    if (wants_string || coin(0.15)) scalars.push_back(Value::string(coin(0.5) ? "aa" : "b"));
    std::vector<EntityId> quals;
    for (const auto& p : props)
        if (quals.size() < lim.qual_attrs && coin(0.5)) quals.push_back(p);

    KnowledgeBase kb;
    if (t.scope == TemplateScope::Property) {
        AttrSet params;
        for (const auto& p : t.required_params) params.insert(p, param_value(p, rng, items, props, scalars));
        for (const auto& p : t.optional_params)
            if (coin(0.4)) params.insert(p, param_value(p, rng, items, props, scalars));
        if (coin(0.15)) params.insert(wd::exception_to_constraint, items[below(items.size())]);
        kb.add_statement(make_statement(Value(P(1)), wd::property_constraint, Value(t.type_id), params));
    }
    std::vector<Value> values = items;
    values.insert(values.end(), scalars.begin(), scalars.end());
    std::size_t n = 1 + below(lim.max_statements);
    for (std::size_t i = 0; i < n; ++i) {
        EntityId p = props[below(props.size())];
        Value s = items[below(items.size())];
        Value o = p == wd::instance_of || p == wd::subclass_of || coin(0.6) ? items[below(items.size())]
                                                                            : values[below(values.size())];
        AttrSet q;
        for (const auto& a : quals)
            if (coin(0.4)) q.insert(a, values[below(values.size())]);
        Rank r = coin(0.85) ? Rank::Normal : (coin(0.5) ? Rank::Preferred : Rank::Deprecated);
        std::vector<AnonId> refs;
        if (coin(0.1)) refs.push_back(kb.fresh_anon());
        kb.add_statement(make_statement(s, p, o, q, r, refs));
    }
    if (coin(0.3)) {
        AttrSet q;
        if (!quals.empty() && coin(0.5)) q.insert(quals[0], values[below(values.size())]);
        kb.add_no_value({props[below(props.size())], items[below(items.size())], q, Rank::Normal});
    }
    if (wants_string && coin(0.5)) kb.add_commons_namespace("aa", coin(0.5) ? "File" : "Category");
    if (kb.active_domain().size() > lim.domain) return false;
    out = std::move(kb);
    return true;
}

// --- oracles -----------------------------------------------------------------------

/// Pairs (x, y) with p(x, y) and no p(y, x), counting non-deprecated statements.
inline std::set<std::pair<Value, Value>> symmetric_gaps(const KnowledgeBase& kb, const EntityId& p) {
    std::set<std::pair<Value, Value>> edges, gaps;
    for (const auto& st : kb.statements())
        if (st.property == p && st.rank != Rank::Deprecated) edges.emplace(st.subject, st.value);
    for (const auto& [x, y] : edges)
        if (!edges.count({y, x})) gaps.emplace(x, y);
    return gaps;
}

/// Transitive closure of a relation by repeated breadth-first search.
inline std::set<std::pair<Value, Value>> transitive_closure(const std::set<std::pair<Value, Value>>& edges) {
    std::map<Value, std::vector<Value>> next;
    for (const auto& [a, b] : edges) next[a].push_back(b);
    std::set<std::pair<Value, Value>> out;
    for (const auto& [start, _] : next) {
        std::vector<Value> stack{start};
        std::set<Value> seen;
        while (!stack.empty()) {
            Value v = stack.back();
            stack.pop_back();
            auto it = next.find(v);
            if (it == next.end()) continue;
            for (const auto& w : it->second)
                if (seen.insert(w).second) {
                    out.emplace(start, w);
                    stack.push_back(w);
                }
        }
    }
    return out;
}

/// Day number of a proleptic Gregorian date, counted by whole years and
/// months (a different method from the library's).
inline std::int64_t oracle_day_number(std::int64_t y, int m, int d) {
    static const int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    auto leap = [](std::int64_t yy) { return (yy % 4 == 0 && yy % 100 != 0) || yy % 400 == 0; };
    std::int64_t n = 0;
    for (std::int64_t k = 1900; k < y; ++k) n += leap(k) ? 366 : 365;
    for (std::int64_t k = y; k < 1900; ++k) n -= leap(k) ? 366 : 365;
    for (int k = 1; k < m; ++k) n += month_days[k - 1] + (k == 2 && leap(y) ? 1 : 0);
    return n + d - 1;
}

/// First and last day covered by a year- or day-precision time.
inline std::pair<std::int64_t, std::int64_t> oracle_days(const TimeValue& t) {
    if (t.precision == 9) return {oracle_day_number(t.year, 1, 1), oracle_day_number(t.year, 12, 31)};
    auto n = oracle_day_number(t.year, t.month, t.day);
    return {n, n};
}

/// Day of the written timestamp; a year-precision value is read as Jan 1.
inline std::int64_t oracle_main_day(const TimeValue& t) {
    return t.precision == 9 ? oracle_day_number(t.year, 1, 1) : oracle_day_number(t.year, t.month, t.day);
}

/// A start and an end are compatible when the start comes first or their
/// covered periods share a day.
inline bool oracle_compatible(const TimeValue& start, const TimeValue& end) {
    auto [s0, s1] = oracle_days(start);
    auto [e0, e1] = oracle_days(end);
    return oracle_main_day(start) < oracle_main_day(end) || (s0 <= e1 && e0 <= s1);
}

/// Lifespans for the contemporary oracle.
struct Lifespan {
    std::vector<TimeValue> starts;
    std::vector<TimeValue> ends;
};

/// Whether a and b coexist: every direction with both a start and an end
/// has some compatible pair.
inline bool oracle_contemporary(const Lifespan& a, const Lifespan& b) {
    auto direction = [](const Lifespan& x, const Lifespan& y) {
        if (x.starts.empty() || y.ends.empty()) return true;
        for (const auto& s : x.starts)
            for (const auto& e : y.ends)
                if (oracle_compatible(s, e)) return true;
        return false;
    };
    return direction(a, b) && direction(b, a);
}

}  // namespace marshal::testing
