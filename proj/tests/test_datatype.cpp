// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <random>

#include "doctest.h"

#include "marshal/datatype.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

bool rel(std::string_view name, std::vector<Value> args) { return datatype_relation(name, args); }

}  // namespace

TEST_CASE("civil day numbers agree with a year-by-year count") {
    std::mt19937_64 rng(11);
    const std::int64_t base = oracle_day_number(1970, 1, 1);
    for (int i = 0; i < 3000; ++i) {
        std::int64_t y = std::uniform_int_distribution<std::int64_t>(1600, 2400)(rng);
        unsigned m = std::uniform_int_distribution<unsigned>(1, 12)(rng);
        unsigned d = std::uniform_int_distribution<unsigned>(1, 28)(rng);
        CHECK(days_from_civil(y, m, d) == oracle_day_number(y, m, d) - base);
    }
}

TEST_CASE("time intervals by precision") {
    auto y = time_interval(year(2000));
    CHECK(y.start == days_from_civil(2000, 1, 1) * 86400);
    CHECK(y.end == days_from_civil(2001, 1, 1) * 86400 - 1);
    auto d = time_interval(day(2000, 2, 29));
    CHECK(d.end - d.start == 86399);
    TimeValue month = day(2001, 2, 1);
    month.precision = 10;
    auto m = time_interval(month);
    CHECK(m.end - m.start + 1 == 28 * 86400);
    TimeValue decade = year(1987);
    decade.precision = 8;
    CHECK(time_interval(decade).start == days_from_civil(1980, 1, 1) * 86400);
}

TEST_CASE("less_than and overlaps against the interval oracle") {
    std::mt19937_64 rng(12);
    auto random_time = [&] {
        std::int64_t y = std::uniform_int_distribution<std::int64_t>(1998, 2001)(rng);
        if (std::bernoulli_distribution(0.4)(rng)) return year(y);
        return day(y, std::uniform_int_distribution<unsigned>(1, 12)(rng),
                   std::uniform_int_distribution<unsigned>(1, 28)(rng));
    };
    for (int i = 0; i < 2000; ++i) {
        TimeValue a = random_time(), b = random_time();
        auto [a0, a1] = oracle_days(a);
        auto [b0, b1] = oracle_days(b);
        CHECK(rel("overlaps", {Value(a), Value(b)}) == (a0 <= b1 && b0 <= a1));
        CHECK(rel("less_than", {Value(a), Value(b)}) == (oracle_main_day(a) < oracle_main_day(b)));
    }
}

TEST_CASE("quantity relations") {
    Value two = Value::quantity(Decimal(2)), three = Value::quantity(Decimal::parse("3.0"));
    CHECK(rel("less_than", {two, three}));
    CHECK(rel("geq", {three, two}));
    CHECK(rel("leq", {two, two}));
    CHECK(rel("integer", {three}));
    CHECK_FALSE(rel("integer", {Value::quantity(Decimal::parse("2.5"))}));
    Quantity bounded{Decimal(5), std::nullopt, Decimal(4), Decimal(6)};
    CHECK_FALSE(rel("precise", {Value(bounded)}));
    CHECK(rel("precise", {two}));
    Value metres = Value::quantity(Decimal(2), Q(11573));
    CHECK(unit_holds(Q(11573), metres));
    CHECK_FALSE(unit_holds(Q(11573), two));
    CHECK(unit_holds(std::nullopt, two));
    CHECK(rel("less_than", {Value::quantity(Decimal(1)), metres}));
    Value centimetres = Value::quantity(Decimal(2), Q(174728));
    CHECK_THROWS_AS(rel("less_than", {metres, centimetres}), DatatypeError);
    Value hour = Value::quantity(Decimal(1), Q(25235)), minutes = Value::quantity(Decimal(59), Q(7727));
    CHECK(rel("less_than", {minutes, hour}));
    CHECK_THROWS_AS(rel("less_than", {two, Value::string("x")}), DatatypeError);
}

TEST_CASE("difference of quantities and times") {
    std::vector<Value> q{Value::quantity(Decimal(10)), Value::quantity(Decimal::parse("2.5"))};
    CHECK(datatype_function("difference", q) == Value::quantity(Decimal::parse("7.5")));
    std::vector<Value> t{Value(day(2000, 3, 1)), Value(day(2000, 2, 1))};
    Value diff = datatype_function("difference", t);
    REQUIRE(diff.is_quantity());
    CHECK(diff.quantity_value().amount == Decimal(29));
}

TEST_CASE("regex dialect") {
    CHECK(matches_regex("978-0-306", "\\d{3}-\\d-\\d{3}"));
    CHECK(matches_regex("abc", "[a-c]+"));
    CHECK_FALSE(matches_regex("abcd", "[a-c]+"));
    CHECK(matches_regex("Q1", "Q[1-9]\\d*|P[1-9]\\d*"));
    CHECK(unsupported_pattern_reason("(?<=a)b").has_value());
    CHECK(unsupported_pattern_reason("\\p{L}+").has_value());
    CHECK(unsupported_pattern_reason("a++").has_value());
    CHECK_FALSE(unsupported_pattern_reason("[0-9]{4}").has_value());
    CHECK_THROWS_AS(matches_regex("ab", "(?<=a)b"), UnsupportedPattern);
}

TEST_CASE("arity table") {
    CHECK(datatype_arity("less_than") == 2u);
    CHECK(datatype_arity("integer") == 1u);
    CHECK(datatype_arity("difference") == 2u);
    CHECK_FALSE(datatype_arity("frobnicate").has_value());
    CHECK(is_datatype_relation("overlaps"));
    CHECK(is_datatype_function("difference"));
}
