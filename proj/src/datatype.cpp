// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/datatype.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <regex>

#include "marshal/literal.hpp"

namespace marshal {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

std::int64_t pow10_years(int n) {
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) r *= 10;
    return r;
}

[[noreturn]] void kind_error(std::string_view rel, const Value& v, std::string_view wanted) {
    throw DatatypeError(std::string(rel) + ": expected " + std::string(wanted) + ", got " + format_value(v));
}

const Quantity& want_quantity(std::string_view rel, const Value& v) {
    if (!v.is_quantity()) kind_error(rel, v, "a quantity");
    return v.quantity_value();
}

const TimeValue& want_time(std::string_view rel, const Value& v) {
    if (!v.is_time()) kind_error(rel, v, "a time");
    return v.time();
}

// Seconds per unit for the time units a duration may carry.
std::optional<Decimal> seconds_per_unit(const EntityId& unit) {
    if (unit.is(Pseudo::Days) || unit == Q(573)) return Decimal(86400);
    if (unit == Q(577)) return Decimal(31556952);  // mean Gregorian year
    if (unit == Q(23387)) return Decimal(604800);
    if (unit == Q(25235)) return Decimal(3600);
    if (unit == Q(7727)) return Decimal(60);
    if (unit == Q(11574)) return Decimal(1);
    return std::nullopt;
}

// Puts two quantities on a common scale for ordering. Unitless operands
// compare by amount; differing time units are converted; anything else is
// incomparable.
std::pair<Decimal, Decimal> comparable_amounts(std::string_view rel, const Quantity& a, const Quantity& b) {
    if (!a.unit || !b.unit || *a.unit == *b.unit) return {a.amount, b.amount};
    auto sa = seconds_per_unit(*a.unit);
    auto sb = seconds_per_unit(*b.unit);
    if (sa && sb) return {a.amount * *sa, b.amount * *sb};
    throw DatatypeError(std::string(rel) + ": incomparable values " + format_value(Value(a)) + " and " +
                        format_value(Value(b)));
}

std::strong_ordering compare_ordered(std::string_view rel, const Value& a, const Value& b) {
    if (a.is_quantity() && b.is_quantity()) {
        auto [x, y] = comparable_amounts(rel, a.quantity_value(), b.quantity_value());
        return x <=> y;
    }
    if (a.is_time() && b.is_time()) return time_main_seconds(a.time()) <=> time_main_seconds(b.time());
    if (!a.is_quantity() && !a.is_time()) kind_error(rel, a, "a quantity or time");
    kind_error(rel, b, a.is_quantity() ? "a quantity" : "a time");
}

struct RegexCache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const std::regex>, std::less<>> compiled;

    std::shared_ptr<const std::regex> get(std::string_view pattern) {
        std::lock_guard lock(mu);
        if (auto it = compiled.find(pattern); it != compiled.end()) return it->second;
        if (auto reason = unsupported_pattern_reason(pattern))
            throw UnsupportedPattern("unsupported pattern /" + std::string(pattern) + "/: " + *reason);
        auto re = std::make_shared<const std::regex>(std::string(pattern), std::regex::ECMAScript);
        compiled.emplace(std::string(pattern), re);
        return re;
    }
};

RegexCache& regex_cache() {
    static RegexCache cache;
    return cache;
}

}  // namespace

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = floor_div(y, 400);
    const auto yoe = static_cast<std::int64_t>(y - era * 400);
    const std::int64_t doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

std::int64_t time_main_seconds(const TimeValue& t) {
    return days_from_civil(t.year, t.month, t.day) * 86400 + t.hour * 3600 + t.minute * 60 + t.second;
}

TimeInterval time_interval(const TimeValue& t) {
    const int p = t.precision;
    TimeInterval iv;
    if (p <= 9) {
        const std::int64_t span = pow10_years(9 - p);
        const std::int64_t first = floor_div(t.year, span) * span;
        const std::int64_t last = first + span - 1;
        iv.start = days_from_civil(first, 1, 1) * 86400;
        iv.end = days_from_civil(last, 12, 31) * 86400 + 86399;
        return iv;
    }
    if (p == 10) {
        iv.start = days_from_civil(t.year, t.month, 1) * 86400;
        iv.end = days_from_civil(t.year, t.month, days_in_month(t.year, t.month)) * 86400 + 86399;
        return iv;
    }
    const std::int64_t day = days_from_civil(t.year, t.month, t.day) * 86400;
    switch (p) {
        case 11:
            return {day, day + 86399};
        case 12:
            return {day + t.hour * 3600, day + t.hour * 3600 + 3599};
        case 13: {
            auto s = day + t.hour * 3600 + t.minute * 60;
            return {s, s + 59};
        }
        default: {
            auto s = time_main_seconds(t);
            return {s, s};
        }
    }
}

bool is_datatype_relation(std::string_view name) {
    return name == "less_than" || name == "overlaps" || name == "matches_regex" || name == "integer" ||
           name == "precise" || name == "geq" || name == "leq" || name == "unit_holds";
}

bool is_datatype_function(std::string_view name) { return name == "difference"; }

std::optional<std::size_t> datatype_arity(std::string_view name) {
    if (name == "integer" || name == "precise") return 1;
    if (is_datatype_relation(name) || is_datatype_function(name)) return 2;
    return std::nullopt;
}

bool unit_holds(const std::optional<EntityId>& unit, const Value& v) {
    if (!v.is_quantity()) return false;
    const auto& q = v.quantity_value();
    const bool unitless = !unit || unit->is(Pseudo::NoValue);
    if (unitless) return !q.unit.has_value();
    return q.unit.has_value() && *q.unit == *unit;
}

bool datatype_relation(std::string_view name, std::span<const Value> args) {
    auto arity = datatype_arity(name);
    if (!arity || !is_datatype_relation(name)) throw DatatypeError("unknown datatype relation '" + std::string(name) + "'");
    if (args.size() != *arity)
        throw DatatypeError(std::string(name) + ": expected " + std::to_string(*arity) + " arguments");

    if (name == "integer") return want_quantity(name, args[0]).amount.is_integer();
    if (name == "precise") return !want_quantity(name, args[0]).has_bounds();
    if (name == "overlaps") {
        auto a = time_interval(want_time(name, args[0]));
        auto b = time_interval(want_time(name, args[1]));
        return a.start <= b.end && b.start <= a.end;
    }
    if (name == "less_than") return compare_ordered(name, args[0], args[1]) < 0;
    if (name == "geq") return compare_ordered(name, args[0], args[1]) >= 0;
    if (name == "leq") return compare_ordered(name, args[0], args[1]) <= 0;
    if (name == "matches_regex") {
        if (!args[0].is_string()) kind_error(name, args[0], "a string");
        if (!args[1].is_string()) kind_error(name, args[1], "a string pattern");
        return matches_regex(args[0].str_value(), args[1].str_value());
    }
    // unit_holds(unit, value)
    if (!args[0].is_entity()) kind_error(name, args[0], "a unit entity");
    return unit_holds(args[0].entity(), args[1]);
}

Value datatype_function(std::string_view name, std::span<const Value> args) {
    if (name != "difference") throw DatatypeError("unknown datatype function '" + std::string(name) + "'");
    if (args.size() != 2) throw DatatypeError("difference: expected 2 arguments");
    const Value& a = args[0];
    const Value& b = args[1];
    if (a.is_quantity() && b.is_quantity()) {
        const auto& qa = a.quantity_value();
        const auto& qb = b.quantity_value();
        if (qa.unit != qb.unit)
            throw DatatypeError("difference: incomparable values " + format_value(a) + " and " + format_value(b));
        return Value::quantity(qa.amount - qb.amount, qa.unit);
    }
    if (a.is_time() && b.is_time()) {
        const auto& ta = a.time();
        const auto& tb = b.time();
        auto days = days_from_civil(ta.year, ta.month, ta.day) - days_from_civil(tb.year, tb.month, tb.day);
        return Value::quantity(Decimal(days), EntityId::pseudo(Pseudo::Days));
    }
    throw DatatypeError("difference: incomparable values " + format_value(a) + " and " + format_value(b));
}

std::optional<std::string> unsupported_pattern_reason(std::string_view pattern) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        char c = pattern[i];
        if (c == '\\' && i + 1 < pattern.size()) {
            char e = pattern[i + 1];
            switch (e) {
                case 'p':
                case 'P':
                case 'X':
                case 'R':
                case 'h':
                case 'H':
                case 'A':
                case 'z':
                case 'Z':
                case 'G':
                case 'K':
                case 'Q':
                case 'E':
                    return std::string("escape \\") + e + " is not supported";
                default:
                    break;
            }
            ++i;
            continue;
        }
        if (c == '(' && i + 1 < pattern.size() && pattern[i + 1] == '?') {
            char k = i + 2 < pattern.size() ? pattern[i + 2] : '\0';
            if (k != ':' && k != '=' && k != '!') return "group syntax (?" + std::string(1, k) + " is not supported";
        }
        if ((c == '*' || c == '+' || c == '?' || c == '}') && i + 1 < pattern.size() && pattern[i + 1] == '+' &&
            !(i > 0 && pattern[i - 1] == '\\'))
            return "possessive quantifiers are not supported";
    }
    try {
        std::regex probe(std::string(pattern), std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        return std::string("invalid pattern: ") + e.what();
    }
    return std::nullopt;
}

bool matches_regex(std::string_view text, std::string_view pattern) {
    auto re = regex_cache().get(pattern);
    return std::regex_match(text.begin(), text.end(), *re);
}

}  // namespace marshal
