// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marshal/value.hpp"

namespace marshal {

struct SourcePos {
    int line = 1;
    int column = 1;
    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Syntax error with position and the set of tokens that would have been accepted.
class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, std::string message, std::set<std::string> expected = {});

    SourcePos pos() const { return pos_; }
    const std::set<std::string>& expected() const { return expected_; }
    const std::string& detail() const { return detail_; }

private:
    SourcePos pos_;
    std::string detail_;
    std::set<std::string> expected_;
};

enum class Tok {
    End,
    Ident,    // bare word: keywords, builtin names, `unit`, `none`
    Entity,   // Q42, P26, @rank
    ObjVar,   // ?x
    SetVar,   // ?SQ, ?_A1
    String,   // "..."
    Number,   // 3, -1.5, 1e3
    Time,     // 2020-01-01/11, +1990-00-00T00:00:00Z/9
    Anon,     // _:b1
    Label,    // `instance of`
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    At,
    And,
    Or,
    Not,
    Arrow,
    Eq,
    Neq,
};

std::string_view tok_name(Tok t);

struct Token {
    Tok kind = Tok::End;
    std::string text;  // decoded text (string contents without quotes, label without backticks)
    SourcePos pos;
};

/// Tokenizer shared by the formula grammar and the native KB format.
/// `#` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text, SourcePos start = {});

/// Parses the text of a Tok::Time token (with optional `/precision`).
/// Throws std::invalid_argument.
TimeValue parse_time_literal(std::string_view text);

}  // namespace marshal
