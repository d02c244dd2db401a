// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "marshal/kb.hpp"
#include "marshal/labels.hpp"
#include "marshal/lexer.hpp"
#include "marshal/value.hpp"

namespace marshal {

/// Canonical text for values, shared by the native KB format, formula
/// printing and reports: `Q1`, `"text"`, `3 unit=Q11573`, `1990-01-01/9`, `_:b4`.
std::string format_value(const Value& v);
std::string format_time(const TimeValue& t);
std::string format_attrset(const AttrSet& s);
/// Native fact line: `P26(Q1, Q2) @ {P580: 2000-01-01/11} rank=preferred refs=1`.
/// Rank and reference mirrors are written as `rank=` and `refs=` only.
std::string format_statement(const Statement& st);

/// Token stream with one-token lookahead and expected-set error reporting.
class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    bool at(Tok kind, std::size_t ahead = 0) const { return peek(ahead).kind == kind; }
    bool at_ident(std::string_view word) const { return at(Tok::Ident) && peek().text == word; }
    Token next();
    bool accept(Tok kind);
    Token expect(Tok kind);
    void expect_ident(std::string_view word);
    [[noreturn]] void fail(const std::string& message, std::set<std::string> expected = {}) const;

    std::size_t mark() const { return i_; }
    void reset(std::size_t mark) { i_ = mark; }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

/// Resolves `_:name` tokens to anonymous constants.
using AnonResolver = std::function<AnonId(const std::string& name)>;

/// `_:b<n>` -> AnonId{n}; used where anonymous constants are written by us.
AnonId numbered_anon(const std::string& name);

/// Parses a value literal at the cursor, including quantity attributes
/// (`unit=`, `lower=`, `upper=`). Labels resolve through `labels`.
Value parse_value(TokenCursor& cur, const LabelMap& labels, const AnonResolver& anon);

/// True if the cursor sits on a token that can start a value literal.
bool at_value(const TokenCursor& cur);

/// Resolves an Entity or Label token.
EntityId resolve_entity(const Token& t, const LabelMap& labels);

}  // namespace marshal
