// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/literal.hpp"

#include <charconv>
#include <cstdio>

namespace marshal {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_time(const TimeValue& t) {
    char buf[64];
    long long y = t.year < 0 ? -t.year : t.year;
    if (t.hour == 0 && t.minute == 0 && t.second == 0) {
        std::snprintf(buf, sizeof buf, "%s%04lld-%02u-%02u/%u", t.year < 0 ? "-" : "", y, unsigned(t.month),
                      unsigned(t.day), unsigned(t.precision));
    } else {
        std::snprintf(buf, sizeof buf, "%s%04lld-%02u-%02uT%02u:%02u:%02uZ/%u", t.year < 0 ? "-" : "", y,
                      unsigned(t.month), unsigned(t.day), unsigned(t.hour), unsigned(t.minute),
                      unsigned(t.second), unsigned(t.precision));
    }
    return buf;
}

std::string format_value(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Entity:
            return v.entity().str();
        case ValueKind::String:
            return quote(v.str_value());
        case ValueKind::Quantity: {
            const auto& q = v.quantity_value();
            std::string out = q.amount.str();
            if (q.unit) out += " unit=" + q.unit->str();
            if (q.lower) out += " lower=" + q.lower->str();
            if (q.upper) out += " upper=" + q.upper->str();
            return out;
        }
        case ValueKind::Time:
            return format_time(v.time());
        case ValueKind::Anon:
            return "_:b" + std::to_string(v.anon().id);
    }
    return "?";
}

std::string format_attrset(const AttrSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [a, v] : s) {
        if (!first) out += ", ";
        out += a.str() + ": " + format_value(v);
        first = false;
    }
    return out + "}";
}

std::string format_statement(const Statement& st) {
    std::string out = st.property.str() + "(" + format_value(st.subject) + ", " + format_value(st.value) + ")";
    AttrSet q = st.qualifiers.qualifiers_only();
    if (!q.empty()) out += " @ " + format_attrset(q);
    if (st.rank != Rank::Normal) out += " rank=" + std::string(rank_name(st.rank));
    if (!st.references.empty()) out += " refs=" + std::to_string(st.references.size());
    return out;
}

const Token& TokenCursor::peek(std::size_t ahead) const {
    std::size_t k = std::min(i_ + ahead, toks_.size() - 1);
    return toks_[k];
}

Token TokenCursor::next() {
    Token t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
}

bool TokenCursor::accept(Tok kind) {
    if (!at(kind)) return false;
    next();
    return true;
}

Token TokenCursor::expect(Tok kind) {
    if (!at(kind)) fail("unexpected " + std::string(tok_name(peek().kind)), {std::string(tok_name(kind))});
    return next();
}

void TokenCursor::expect_ident(std::string_view word) {
    if (!at_ident(word)) fail("unexpected " + std::string(tok_name(peek().kind)), {"'" + std::string(word) + "'"});
    next();
}

void TokenCursor::fail(const std::string& message, std::set<std::string> expected) const {
    std::string msg = message;
    if (!peek().text.empty() && peek().kind != Tok::End) msg += " '" + peek().text + "'";
    throw ParseError(peek().pos, msg, std::move(expected));
}

AnonId numbered_anon(const std::string& name) {
    // name is "_:b<digits>"
    std::uint64_t n = 0;
    if (name.size() > 3 && name.compare(0, 3, "_:b") == 0) {
        auto [ptr, ec] = std::from_chars(name.data() + 3, name.data() + name.size(), n);
        if (ec == std::errc() && ptr == name.data() + name.size()) return AnonId{n};
    }
    throw std::invalid_argument("anonymous constant must be written _:b<number>, got '" + name + "'");
}

EntityId resolve_entity(const Token& t, const LabelMap& labels) {
    if (t.kind == Tok::Entity) return EntityId::parse(t.text);
    if (t.kind == Tok::Label) {
        if (auto e = labels.lookup(t.text)) return *e;
        throw ParseError(t.pos, "unknown label `" + t.text + "`");
    }
    throw ParseError(t.pos, "expected entity id or label");
}

bool at_value(const TokenCursor& cur) {
    switch (cur.peek().kind) {
        case Tok::Entity:
        case Tok::Label:
        case Tok::String:
        case Tok::Number:
        case Tok::Time:
        case Tok::Anon:
            return true;
        default:
            return false;
    }
}

Value parse_value(TokenCursor& cur, const LabelMap& labels, const AnonResolver& anon) {
    const Token& t = cur.peek();
    switch (t.kind) {
        case Tok::Entity:
        case Tok::Label: {
            auto tok = cur.next();
            return Value(resolve_entity(tok, labels));
        }
        case Tok::String:
            return Value::string(cur.next().text);
        case Tok::Time: {
            auto tok = cur.next();
            return Value(parse_time_literal(tok.text));
        }
        case Tok::Anon: {
            auto tok = cur.next();
            try {
                return Value(anon(tok.text));
            } catch (const std::invalid_argument& e) {
                throw ParseError(tok.pos, e.what());
            }
        }
        case Tok::Number: {
            Quantity q;
            q.amount = Decimal::parse(cur.next().text);
            for (;;) {
                if (!(cur.at(Tok::Ident) && cur.at(Tok::Eq, 1))) break;
                const std::string key = cur.peek().text;
                if (key != "unit" && key != "lower" && key != "upper") break;
                cur.next();
                cur.next();
                if (key == "unit") {
                    if (cur.at_ident("none")) {
                        cur.next();
                        q.unit.reset();
                    } else {
                        q.unit = resolve_entity(cur.next(), labels);
                    }
                } else {
                    auto num = cur.expect(Tok::Number);
                    (key == "lower" ? q.lower : q.upper) = Decimal::parse(num.text);
                }
            }
            if ((q.lower && *q.lower > q.amount) || (q.upper && *q.upper < q.amount))
                cur.fail("quantity bounds must enclose the amount");
            return Value(std::move(q));
        }
        default:
            cur.fail("expected a value", {"entity id", "string", "number", "time"});
    }
}

}  // namespace marshal
