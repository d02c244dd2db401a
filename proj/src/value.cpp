// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/value.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>

namespace marshal {

namespace {

constexpr std::array<std::string_view, 13> kPseudoNames = {
    "rank",
    "reference",
    "days",
    "preferred",
    "normal",
    "deprecated",
    "novalue",
    "wikidata_reference",
    "minimum_count",
    "local_class",
    "local_value_type_constraint",
    "essential_property_constraint",
    "disjoint_with",
};

constexpr int kMaxExponent = 4096;

}  // namespace

std::string_view pseudo_name(Pseudo p) {
    auto idx = static_cast<std::size_t>(p) - 1;
    return idx < kPseudoNames.size() ? kPseudoNames[idx] : std::string_view("?");
}

std::optional<Pseudo> pseudo_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kPseudoNames.size(); ++i)
        if (kPseudoNames[i] == name) return static_cast<Pseudo>(i + 1);
    return std::nullopt;
}

EntityId EntityId::item(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("entity id must be positive");
    return {EntityKind::Item, n};
}

EntityId EntityId::property(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("entity id must be positive");
    return {EntityKind::Property, n};
}

std::optional<EntityId> EntityId::try_parse(std::string_view text) {
    if (text.size() < 2) return std::nullopt;
    if (text[0] == '@') {
        if (auto p = pseudo_from_name(text.substr(1))) return EntityId::pseudo(*p);
        return std::nullopt;
    }
    EntityKind kind;
    if (text[0] == 'Q')
        kind = EntityKind::Item;
    else if (text[0] == 'P')
        kind = EntityKind::Property;
    else
        return std::nullopt;
    std::uint64_t n = 0;
    auto digits = text.substr(1);
    if (digits.empty() || digits[0] == '0') return std::nullopt;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
    return EntityId{kind, n};
}

EntityId EntityId::parse(std::string_view text) {
    if (auto e = try_parse(text)) return *e;
    throw std::invalid_argument("not an entity id: '" + std::string(text) + "'");
}

std::string EntityId::str() const {
    switch (kind) {
        case EntityKind::Item:
            return "Q" + std::to_string(id);
        case EntityKind::Property:
            return "P" + std::to_string(id);
        case EntityKind::Pseudo:
            return "@" + std::string(pseudo_name(static_cast<Pseudo>(id)));
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Decimal

Decimal::Decimal(long long v) : mantissa_(v), exponent_(0) { normalize(); }

Decimal::Decimal(Int mantissa, int exponent) : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
}

void Decimal::normalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while (mantissa_ % 10 == 0) {
        mantissa_ /= 10;
        ++exponent_;
    }
}

std::optional<Decimal> Decimal::try_parse(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    int exponent = 0;
    bool any = false;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        digits.push_back(text[i++]);
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        bool frac = false;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            digits.push_back(text[i++]);
            --exponent;
            frac = true;
        }
        if (!frac) return std::nullopt;
        any = true;
    }
    if (!any) return std::nullopt;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        int e = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), e);
        if (ec != std::errc() || ptr == text.data() + i) return std::nullopt;
        i = static_cast<std::size_t>(ptr - text.data());
        exponent += sign * e;
    }
    if (i != text.size()) return std::nullopt;
    if (exponent > kMaxExponent || exponent < -kMaxExponent) return std::nullopt;
    // cpp_int reads a leading 0 as an octal prefix.
    const auto nz = digits.find_first_not_of('0');
    Int m(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    if (negative) m = -m;
    return Decimal(std::move(m), exponent);
}

Decimal Decimal::parse(std::string_view text) {
    if (auto d = try_parse(text)) return *d;
    throw std::invalid_argument("not a decimal: '" + std::string(text) + "'");
}

std::optional<long long> Decimal::to_int64() const {
    if (!is_integer() || exponent_ > 18) return std::nullopt;
    Int v = mantissa_;
    for (int i = 0; i < exponent_; ++i) v *= 10;
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        return std::nullopt;
    return v.convert_to<long long>();
}

namespace {

Decimal::Int pow10(int n) {
    Decimal::Int r = 1;
    for (int i = 0; i < n; ++i) r *= 10;
    return r;
}

}  // namespace

Decimal Decimal::operator-() const { return Decimal(-mantissa_, exponent_); }

Decimal operator+(const Decimal& a, const Decimal& b) {
    int e = std::min(a.exponent_, b.exponent_);
    Decimal::Int ma = a.mantissa_ * pow10(a.exponent_ - e);
    Decimal::Int mb = b.mantissa_ * pow10(b.exponent_ - e);
    return Decimal(ma + mb, e);
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + (-b); }

Decimal operator*(const Decimal& a, const Decimal& b) {
    return Decimal(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    int e = std::min(a.exponent_, b.exponent_);
    Decimal::Int ma = a.mantissa_ * pow10(a.exponent_ - e);
    Decimal::Int mb = b.mantissa_ * pow10(b.exponent_ - e);
    if (ma < mb) return std::strong_ordering::less;
    if (ma > mb) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Decimal::str() const {
    bool negative = mantissa_ < 0;
    std::string digits = (negative ? Int(-mantissa_) : mantissa_).str();
    std::string out;
    if (exponent_ >= 0) {
        out = digits + std::string(static_cast<std::size_t>(exponent_), '0');
    } else {
        auto frac = static_cast<std::size_t>(-exponent_);
        if (digits.size() <= frac) digits.insert(0, frac - digits.size() + 1, '0');
        out = digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
    }
    return negative ? "-" + out : out;
}

std::size_t Decimal::hash() const {
    std::size_t h = std::hash<std::string>{}(mantissa_.str());
    hash_combine(h, std::hash<int>{}(exponent_));
    return h;
}

// ---------------------------------------------------------------------------
// Value

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() <=> b.v_.index();
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.v_);
            if constexpr (std::is_same_v<T, std::string>) {
                int c = x.compare(y);
                return c < 0 ? std::strong_ordering::less
                             : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
            } else {
                return x <=> y;
            }
        },
        a.v_);
}

std::size_t Value::hash() const {
    std::size_t h = v_.index();
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, EntityId>) {
                hash_combine(h, static_cast<std::size_t>(x.kind));
                hash_combine(h, std::hash<std::uint64_t>{}(x.id));
            } else if constexpr (std::is_same_v<T, std::string>) {
                hash_combine(h, std::hash<std::string>{}(x));
            } else if constexpr (std::is_same_v<T, Quantity>) {
                hash_combine(h, x.amount.hash());
                if (x.unit) hash_combine(h, std::hash<std::uint64_t>{}(x.unit->id));
            } else if constexpr (std::is_same_v<T, TimeValue>) {
                hash_combine(h, std::hash<std::int64_t>{}(x.year));
                hash_combine(h, (std::size_t(x.month) << 24) | (std::size_t(x.day) << 16) |
                                    (std::size_t(x.hour) << 8) | x.precision);
                hash_combine(h, (std::size_t(x.minute) << 8) | x.second);
            } else {
                hash_combine(h, std::hash<std::uint64_t>{}(x.id));
            }
        },
        v_);
    return h;
}

// ---------------------------------------------------------------------------
// AttrSet

AttrSet::AttrSet(std::initializer_list<Pair> pairs) {
    for (const auto& [a, v] : pairs) insert(a, v);
}

bool AttrSet::insert(EntityId attr, Value value) {
    if (attr.is(Pseudo::Rank)) {
        auto it = std::find_if(pairs_.begin(), pairs_.end(),
                               [](const Pair& p) { return p.first.is(Pseudo::Rank); });
        if (it != pairs_.end()) {
            if (it->second == value) return false;
            throw std::invalid_argument("attribute set already carries a rank");
        }
    }
    Pair p{attr, std::move(value)};
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
    if (it != pairs_.end() && *it == p) return false;
    pairs_.insert(it, std::move(p));
    return true;
}

bool AttrSet::contains(const EntityId& attr, const Value& value) const {
    Pair p{attr, value};
    return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

std::vector<Value> AttrSet::values_of(const EntityId& attr) const {
    std::vector<Value> out;
    for (const auto& [a, v] : pairs_)
        if (a == attr) out.push_back(v);
    return out;
}

bool AttrSet::has_attr(const EntityId& attr) const {
    return std::any_of(pairs_.begin(), pairs_.end(), [&](const Pair& p) { return p.first == attr; });
}

AttrSet AttrSet::qualifiers_only() const {
    AttrSet out;
    for (const auto& p : pairs_)
        if (!is_bookkeeping(p.first)) out.pairs_.push_back(p);
    return out;
}

std::strong_ordering operator<=>(const AttrSet& a, const AttrSet& b) {
    return std::lexicographical_compare_three_way(a.pairs_.begin(), a.pairs_.end(), b.pairs_.begin(),
                                                  b.pairs_.end());
}

std::size_t AttrSet::hash() const {
    std::size_t h = pairs_.size();
    for (const auto& [a, v] : pairs_) {
        hash_combine(h, std::hash<std::uint64_t>{}(a.id) ^ static_cast<std::size_t>(a.kind));
        hash_combine(h, v.hash());
    }
    return h;
}

}  // namespace marshal
