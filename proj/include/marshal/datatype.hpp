// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "marshal/value.hpp"

namespace marshal {

/// A datatype relation or function was applied to values of the wrong kind,
/// or to quantities whose units cannot be compared.
class DatatypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The pattern uses a construct outside the supported regex dialect.
class UnsupportedPattern : public DatatypeError {
public:
    using DatatypeError::DatatypeError;
};

/// Closed interval of seconds (relative to 1970-01-01T00:00:00) covered by a
/// time value at its precision.
struct TimeInterval {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

/// Days from 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t year, unsigned month, unsigned day);

/// Seconds of the main value (the timestamp as written).
std::int64_t time_main_seconds(const TimeValue& t);

/// Year precisions (0-9) cover 10^(9-p) aligned years; finer precisions
/// cover the calendar month/day/hour/minute/second.
TimeInterval time_interval(const TimeValue& t);

bool is_datatype_relation(std::string_view name);
bool is_datatype_function(std::string_view name);
/// Expected argument count, or nullopt for unknown names.
std::optional<std::size_t> datatype_arity(std::string_view name);

/// less_than, overlaps, matches_regex, integer, precise, geq, leq, unit_holds.
/// Throws DatatypeError on kind mismatch.
bool datatype_relation(std::string_view name, std::span<const Value> args);

/// difference. Throws DatatypeError on kind or unit mismatch.
Value datatype_function(std::string_view name, std::span<const Value> args);

/// True iff `v` is a quantity whose unit is `unit`; `@novalue` (or an
/// unset unit) stands for unitless.
bool unit_holds(const std::optional<EntityId>& unit, const Value& v);

/// Full-match regular expression test. Throws UnsupportedPattern when the
/// pattern falls outside the dialect.
bool matches_regex(std::string_view text, std::string_view pattern);

/// Empty when the pattern is inside the dialect; otherwise the reason.
std::optional<std::string> unsupported_pattern_reason(std::string_view pattern);

}  // namespace marshal
