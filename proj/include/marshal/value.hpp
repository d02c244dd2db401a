// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace marshal {

enum class EntityKind : std::uint8_t { Item, Property, Pseudo };

/// Reserved ids for pseudo entities. The numbering is internal; only the
/// `@name` spelling is ever written out.
enum class Pseudo : std::uint64_t {
    Rank = 1,
    Reference,
    Days,
    Preferred,
    Normal,
    Deprecated,
    NoValue,
    WikidataReference,
    MinimumCount,
    LocalClass,
    LocalValueTypeConstraint,
    EssentialPropertyConstraint,
    DisjointWith,
};

/// A Wikidata item (`Q<n>`), property (`P<n>`) or one of the reserved
/// pseudo entities (`@rank`, `@days`, ...).
struct EntityId {
    EntityKind kind = EntityKind::Item;
    std::uint64_t id = 1;

    static EntityId item(std::uint64_t n);
    static EntityId property(std::uint64_t n);
    static EntityId pseudo(Pseudo p) { return {EntityKind::Pseudo, static_cast<std::uint64_t>(p)}; }

    /// Parses `Q42`, `P26` or `@rank`. Throws std::invalid_argument.
    static EntityId parse(std::string_view text);
    static std::optional<EntityId> try_parse(std::string_view text);

    bool is_item() const { return kind == EntityKind::Item; }
    bool is_property() const { return kind == EntityKind::Property; }
    bool is_pseudo() const { return kind == EntityKind::Pseudo; }
    bool is(Pseudo p) const { return is_pseudo() && id == static_cast<std::uint64_t>(p); }

    std::string str() const;

    friend auto operator<=>(const EntityId&, const EntityId&) = default;
    friend bool operator==(const EntityId&, const EntityId&) = default;
};

inline EntityId Q(std::uint64_t n) { return EntityId::item(n); }
inline EntityId P(std::uint64_t n) { return EntityId::property(n); }

/// Exact decimal: mantissa * 10^exponent, kept normalized so that structural
/// equality is numeric equality.
class Decimal {
public:
    using Int = boost::multiprecision::cpp_int;

    Decimal() = default;
    Decimal(long long v);  // NOLINT(google-explicit-constructor)

    /// Accepts `[+-]digits[.digits][e[+-]digits]`. Throws std::invalid_argument.
    static Decimal parse(std::string_view text);
    static std::optional<Decimal> try_parse(std::string_view text);

    bool is_integer() const { return exponent_ >= 0; }
    bool is_zero() const { return mantissa_ == 0; }
    bool is_negative() const { return mantissa_ < 0; }
    /// Value as a 64-bit integer when integral and in range.
    std::optional<long long> to_int64() const;

    Decimal operator-() const;
    friend Decimal operator+(const Decimal& a, const Decimal& b);
    friend Decimal operator-(const Decimal& a, const Decimal& b);
    friend Decimal operator*(const Decimal& a, const Decimal& b);

    /// Plain positional notation, no exponent, no leading `+`.
    std::string str() const;

    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);
    friend bool operator==(const Decimal& a, const Decimal& b) {
        return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
    }

    std::size_t hash() const;

private:
    Decimal(Int mantissa, int exponent);
    void normalize();

    Int mantissa_ = 0;
    int exponent_ = 0;
};

struct Quantity {
    Decimal amount;
    std::optional<EntityId> unit;  // none = unitless
    std::optional<Decimal> lower;
    std::optional<Decimal> upper;

    bool has_bounds() const { return lower.has_value() || upper.has_value(); }

    friend auto operator<=>(const Quantity&, const Quantity&) = default;
    friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// Proleptic Gregorian timestamp with a Wikibase precision code
/// (0 = billion years ... 9 = year, 10 = month, 11 = day, ..., 14 = second).
struct TimeValue {
    std::int64_t year = 1970;
    std::uint8_t month = 1;
    std::uint8_t day = 1;
    std::uint8_t hour = 0;
    std::uint8_t minute = 0;
    std::uint8_t second = 0;
    std::uint8_t precision = 11;

    friend auto operator<=>(const TimeValue&, const TimeValue&) = default;
    friend bool operator==(const TimeValue&, const TimeValue&) = default;
};

/// Fresh anonymous constant (some-value snaks, reference tokens).
struct AnonId {
    std::uint64_t id = 0;
    friend auto operator<=>(const AnonId&, const AnonId&) = default;
    friend bool operator==(const AnonId&, const AnonId&) = default;
};

enum class ValueKind : std::uint8_t { Entity, String, Quantity, Time, Anon };

class Value {
public:
    using Storage = std::variant<EntityId, std::string, Quantity, TimeValue, AnonId>;

    Value() : v_(EntityId{}) {}
    Value(EntityId e) : v_(e) {}                // NOLINT(google-explicit-constructor)
    Value(Quantity q) : v_(std::move(q)) {}     // NOLINT(google-explicit-constructor)
    Value(TimeValue t) : v_(t) {}               // NOLINT(google-explicit-constructor)
    Value(AnonId a) : v_(a) {}                  // NOLINT(google-explicit-constructor)
    static Value string(std::string s) {
        Value v;
        v.v_ = std::move(s);
        return v;
    }
    static Value quantity(Decimal amount, std::optional<EntityId> unit = std::nullopt) {
        return Value(Quantity{std::move(amount), unit, std::nullopt, std::nullopt});
    }

    ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
    bool is_entity() const { return kind() == ValueKind::Entity; }
    bool is_string() const { return kind() == ValueKind::String; }
    bool is_quantity() const { return kind() == ValueKind::Quantity; }
    bool is_time() const { return kind() == ValueKind::Time; }
    bool is_anon() const { return kind() == ValueKind::Anon; }

    const EntityId& entity() const { return std::get<EntityId>(v_); }
    const std::string& str_value() const { return std::get<std::string>(v_); }
    const Quantity& quantity_value() const { return std::get<Quantity>(v_); }
    const TimeValue& time() const { return std::get<TimeValue>(v_); }
    const AnonId& anon() const { return std::get<AnonId>(v_); }

    const Storage& storage() const { return v_; }

    friend std::strong_ordering operator<=>(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

    std::size_t hash() const;

private:
    Storage v_;
};

/// Name of a pseudo entity without the leading `@`, e.g. "rank".
std::string_view pseudo_name(Pseudo p);
std::optional<Pseudo> pseudo_from_name(std::string_view name);

/// `@rank` and `@reference` pairs mirror statement bookkeeping and are hidden
/// from set atoms whose attribute term is a variable.
inline bool is_bookkeeping(const EntityId& attr) {
    return attr.is(Pseudo::Rank) || attr.is(Pseudo::Reference);
}

/// Finite set of attribute-value pairs. Attributes may repeat with distinct
/// values; `@rank` appears at most once.
class AttrSet {
public:
    using Pair = std::pair<EntityId, Value>;

    AttrSet() = default;
    AttrSet(std::initializer_list<Pair> pairs);

    /// Returns false if the pair was already present.
    bool insert(EntityId attr, Value value);
    bool contains(const EntityId& attr, const Value& value) const;
    std::vector<Value> values_of(const EntityId& attr) const;
    bool has_attr(const EntityId& attr) const;

    /// Pairs whose attribute is not a bookkeeping pseudo attribute.
    AttrSet qualifiers_only() const;

    const std::vector<Pair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    friend std::strong_ordering operator<=>(const AttrSet& a, const AttrSet& b);
    friend bool operator==(const AttrSet& a, const AttrSet& b) { return a.pairs_ == b.pairs_; }

    std::size_t hash() const;

private:
    std::vector<Pair> pairs_;  // sorted, unique
};

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};
struct AttrSetHash {
    std::size_t operator()(const AttrSet& s) const { return s.hash(); }
};

inline void hash_combine(std::size_t& seed, std::size_t h) {
    seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace marshal
