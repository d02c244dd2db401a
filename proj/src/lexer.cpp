// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/lexer.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace marshal {

namespace {

std::string render_error(SourcePos pos, const std::string& message, const std::set<std::string>& expected) {
    std::ostringstream out;
    out << pos.line << ":" << pos.column << ": " << message;
    if (!expected.empty()) {
        out << " (expected ";
        bool first = true;
        for (const auto& e : expected) {
            if (!first) out << ", ";
            out << e;
            first = false;
        }
        out << ")";
    }
    return out.str();
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Scanner {
public:
    Scanner(std::string_view text, SourcePos start) : text_(text), pos_(start) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.pos = pos_;
            if (i_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            scan(t);
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t ahead = 0) const { return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0'; }

    void advance(std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i_ < text_.size(); ++k) {
            if (text_[i_] == '\n') {
                ++pos_.line;
                pos_.column = 1;
            } else if ((static_cast<unsigned char>(text_[i_]) & 0xC0) != 0x80) {
                ++pos_.column;
            }
            ++i_;
        }
    }

    void skip_space() {
        for (;;) {
            char c = peek();
            if (c == '#') {
                while (i_ < text_.size() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& message) { throw ParseError(pos_, message); }

    void scan(Token& t) {
        char c = peek();
        switch (c) {
            case '(': return punct(t, Tok::LParen);
            case ')': return punct(t, Tok::RParen);
            case '{': return punct(t, Tok::LBrace);
            case '}': return punct(t, Tok::RBrace);
            case '[': return punct(t, Tok::LBracket);
            case ']': return punct(t, Tok::RBracket);
            case ',': return punct(t, Tok::Comma);
            case ':': return punct(t, Tok::Colon);
            case '.': return punct(t, Tok::Dot);
            case '&': return punct(t, Tok::And);
            case '|': return punct(t, Tok::Or);
            case '=': return punct(t, Tok::Eq);
            case '"': return string_lit(t);
            case '`': return label(t);
            default: break;
        }
        if (c == '!') {
            if (peek(1) == '=') return punct(t, Tok::Neq, 2);
            return punct(t, Tok::Not);
        }
        if (c == '-' && peek(1) == '>') return punct(t, Tok::Arrow, 2);
        if (c == '@') {
            if (is_ident_start(peek(1))) {
                std::size_t n = 1;
                while (is_ident_char(peek(n))) ++n;
                t.kind = Tok::Entity;
                t.text = std::string(text_.substr(i_, n));
                if (!EntityId::try_parse(t.text)) fail("unknown pseudo entity '" + t.text + "'");
                advance(n);
                return;
            }
            return punct(t, Tok::At);
        }
        if (c == '?') {
            std::size_t n = 1;
            while (is_ident_char(peek(n))) ++n;
            if (n == 1) fail("expected variable name after '?'");
            char first = peek(1);
            t.text = std::string(text_.substr(i_, n));
            if (std::islower(static_cast<unsigned char>(first)))
                t.kind = Tok::ObjVar;
            else if (std::isupper(static_cast<unsigned char>(first)) || first == '_')
                t.kind = Tok::SetVar;
            else
                fail("bad variable name '" + t.text + "'");
            advance(n);
            return;
        }
        if (c == '_' && peek(1) == ':') {
            std::size_t n = 2;
            while (is_ident_char(peek(n))) ++n;
            if (n == 2) fail("expected anonymous constant name after '_:'");
            t.kind = Tok::Anon;
            t.text = std::string(text_.substr(i_, n));
            advance(n);
            return;
        }
        if (is_digit(c) || ((c == '+' || c == '-') && is_digit(peek(1)))) return number_or_time(t);
        if (is_ident_start(c)) {
            std::size_t n = 0;
            while (is_ident_char(peek(n))) ++n;
            t.text = std::string(text_.substr(i_, n));
            t.kind = EntityId::try_parse(t.text) && t.text[0] != '@' ? Tok::Entity : Tok::Ident;
            advance(n);
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void punct(Token& t, Tok kind, std::size_t n = 1) {
        t.kind = kind;
        t.text = std::string(text_.substr(i_, n));
        advance(n);
    }

    void string_lit(Token& t) {
        advance();
        std::string out;
        for (;;) {
            if (i_ >= text_.size()) fail("unterminated string literal");
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\n') fail("newline in string literal");
            if (c == '\\') {
                char e = peek(1);
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default: fail(std::string("unknown escape '\\") + e + "'");
                }
                advance(2);
                continue;
            }
            out.push_back(c);
            advance();
        }
        t.kind = Tok::String;
        t.text = std::move(out);
    }

    void label(Token& t) {
        advance();
        std::string out;
        while (i_ < text_.size() && peek() != '`') {
            if (peek() == '\n') fail("newline in label");
            out.push_back(peek());
            advance();
        }
        if (i_ >= text_.size()) fail("unterminated label");
        advance();
        t.kind = Tok::Label;
        t.text = std::move(out);
    }

    // A time literal is `[+-]Y+-MM-DD[THH:MM:SSZ][/precision]`; anything else
    // numeric is a decimal.
    void number_or_time(Token& t) {
        std::size_t n = 0;
        if (peek() == '+' || peek() == '-') ++n;
        while (is_digit(peek(n))) ++n;
        if (peek(n) == '-' && is_digit(peek(n + 1))) {
            while (is_digit(peek(n)) || peek(n) == '-' || peek(n) == ':' || peek(n) == 'T' || peek(n) == 'Z')
                ++n;
            if (peek(n) == '/') {
                ++n;
                while (is_digit(peek(n))) ++n;
            }
            t.kind = Tok::Time;
            t.text = std::string(text_.substr(i_, n));
            try {
                parse_time_literal(t.text);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            advance(n);
            return;
        }
        if (peek(n) == '.' && is_digit(peek(n + 1))) {
            ++n;
            while (is_digit(peek(n))) ++n;
        }
        if ((peek(n) == 'e' || peek(n) == 'E') &&
            (is_digit(peek(n + 1)) || ((peek(n + 1) == '-' || peek(n + 1) == '+') && is_digit(peek(n + 2))))) {
            n += 2;
            while (is_digit(peek(n))) ++n;
        }
        t.kind = Tok::Number;
        t.text = std::string(text_.substr(i_, n));
        if (!Decimal::try_parse(t.text)) fail("malformed number '" + t.text + "'");
        advance(n);
    }

    std::string_view text_;
    std::size_t i_ = 0;
    SourcePos pos_;
};

template <typename T>
T parse_field(std::string_view s, const char* what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + " in time literal");
    return v;
}

}  // namespace

ParseError::ParseError(SourcePos pos, std::string message, std::set<std::string> expected)
    : std::runtime_error(render_error(pos, message, expected)),
      pos_(pos),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

std::string_view tok_name(Tok t) {
    switch (t) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier";
        case Tok::Entity: return "entity id";
        case Tok::ObjVar: return "object variable";
        case Tok::SetVar: return "set variable";
        case Tok::String: return "string";
        case Tok::Number: return "number";
        case Tok::Time: return "time";
        case Tok::Anon: return "anonymous constant";
        case Tok::Label: return "label";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::Dot: return "'.'";
        case Tok::At: return "'@'";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::Not: return "'!'";
        case Tok::Arrow: return "'->'";
        case Tok::Eq: return "'='";
        case Tok::Neq: return "'!='";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view text, SourcePos start) { return Scanner(text, start).run(); }

TimeValue parse_time_literal(std::string_view text) {
    TimeValue t;
    std::string_view body = text;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto p = parse_field<int>(body.substr(slash + 1), "precision");
        if (p < 0 || p > 14) throw std::invalid_argument("time precision out of range 0-14");
        t.precision = static_cast<std::uint8_t>(p);
        body = body.substr(0, slash);
    }
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        negative = body[0] == '-';
        body.remove_prefix(1);
    }
    auto time_part = std::string_view{};
    if (auto tpos = body.find('T'); tpos != std::string_view::npos) {
        time_part = body.substr(tpos + 1);
        body = body.substr(0, tpos);
    }
    auto d1 = body.find('-');
    auto d2 = d1 == std::string_view::npos ? d1 : body.find('-', d1 + 1);
    if (d1 == std::string_view::npos || d2 == std::string_view::npos)
        throw std::invalid_argument("time literal needs year-month-day");
    auto year = parse_field<std::int64_t>(body.substr(0, d1), "year");
    if (year > 10'000'000'000LL) throw std::invalid_argument("year out of range");
    auto month = parse_field<int>(body.substr(d1 + 1, d2 - d1 - 1), "month");
    auto day = parse_field<int>(body.substr(d2 + 1), "day");
    if (month < 0 || month > 12 || day < 0 || day > 31) throw std::invalid_argument("month/day out of range");
    t.year = negative ? -year : year;
    // Wikibase writes 00 for unknown month/day at coarse precision.
    t.month = static_cast<std::uint8_t>(month == 0 ? 1 : month);
    t.day = static_cast<std::uint8_t>(day == 0 ? 1 : day);
    if (!time_part.empty()) {
        if (time_part.back() == 'Z') time_part.remove_suffix(1);
        if (time_part.size() != 8 || time_part[2] != ':' || time_part[5] != ':')
            throw std::invalid_argument("time of day must be HH:MM:SS");
        auto h = parse_field<int>(time_part.substr(0, 2), "hour");
        auto m = parse_field<int>(time_part.substr(3, 2), "minute");
        auto s = parse_field<int>(time_part.substr(6, 2), "second");
        if (h > 23 || m > 59 || s > 60) throw std::invalid_argument("time of day out of range");
        t.hour = static_cast<std::uint8_t>(h);
        t.minute = static_cast<std::uint8_t>(m);
        t.second = static_cast<std::uint8_t>(s == 60 ? 59 : s);
    }
    return t;
}

}  // namespace marshal
