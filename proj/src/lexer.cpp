#include "lexer.hpp"

#include <cctype>
#include <cstdlib>

namespace gtlc::surface {

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Let: return "let";
    case Tok::Rec: return "rec";
    case Tok::In: return "in";
    case Tok::Fun: return "fun";
    case Tok::If: return "if";
    case Tok::Then: return "then";
    case Tok::Else: return "else";
    case Tok::Loop: return "loop";
    case Tok::To: return "to";
    case Tok::Do: return "do";
    case Tok::Done: return "done";
    case Tok::Ref: return "ref";
    case Tok::Vector: return "vector";
    case Tok::Type: return "type";
    case Tok::Of: return "of";
    case Tok::Match: return "match";
    case Tok::With: return "with";
    case Tok::True: return "true";
    case Tok::False: return "false";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBracket: return "[";
    case Tok::RBracket: return "]";
    case Tok::DotBracket: return ".[";
    case Tok::Comma: return ",";
    case Tok::Semi: return ";";
    case Tok::Bar: return "|";
    case Tok::Hash: return "#";
    case Tok::Arrow: return "->";
    case Tok::DArrow: return "<-";
    case Tok::ColonColon: return "::";
    case Tok::Colon: return ":";
    case Tok::Eq: return "=";
    case Tok::Assign: return ":=";
    case Tok::Bang: return "!";
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Star: return "*";
    case Tok::Slash: return "/";
    case Tok::Percent: return "%";
    case Tok::PlusDot: return "+.";
    case Tok::MinusDot: return "-.";
    case Tok::StarDot: return "*.";
    case Tok::SlashDot: return "/.";
    case Tok::Lt: return "<";
    case Tok::Le: return "<=";
    case Tok::Gt: return ">";
    case Tok::Ge: return ">=";
    case Tok::Ne: return "<>";
    case Tok::LtDot: return "<.";
    case Tok::LeDot: return "<=.";
    case Tok::GtDot: return ">.";
    case Tok::GeDot: return ">=.";
    case Tok::EqDot: return "=.";
    case Tok::NeDot: return "<>.";
    case Tok::Question: return "?";
    case Tok::LIdent: return "identifier";
    case Tok::UIdent: return "constructor";
    case Tok::IntLit: return "integer";
    case Tok::FloatLit: return "float";
    case Tok::Eof: return "end of input";
    }
    return "?";
}

namespace {

struct Kw {
    const char* text;
    Tok tok;
};

const Kw kKeywords[] = {
    {"let", Tok::Let},     {"rec", Tok::Rec},       {"in", Tok::In},
    {"fun", Tok::Fun},     {"if", Tok::If},         {"then", Tok::Then},
    {"else", Tok::Else},   {"loop", Tok::Loop},     {"to", Tok::To},
    {"do", Tok::Do},       {"done", Tok::Done},     {"ref", Tok::Ref},
    {"vector", Tok::Vector}, {"type", Tok::Type},   {"of", Tok::Of},
    {"match", Tok::Match}, {"with", Tok::With},     {"true", Tok::True},
    {"false", Tok::False},
};

// Largest magnitude a 63-bit two's-complement literal can take (negative
// values are written with unary minus).
constexpr int64_t kMaxIntLit = 4611686018427387903LL;

[[noreturn]] void lex_error(Span sp, const std::string& msg) {
    throw CompileError(CompileError::Kind::Lex, sp, msg);
}

} // namespace

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    const size_t n = src.size();

    auto push = [&](Tok k, size_t b, size_t e) {
        Token t;
        t.kind = k;
        t.span = Span{static_cast<uint32_t>(b), static_cast<uint32_t>(e)};
        out.push_back(std::move(t));
    };

    while (i < n) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        // comments: (* ... *) with nesting
        if (c == '(' && i + 1 < n && src[i + 1] == '*') {
            size_t b = i;
            int depth = 1;
            i += 2;
            while (i < n && depth > 0) {
                if (src[i] == '(' && i + 1 < n && src[i + 1] == '*') {
                    depth++;
                    i += 2;
                } else if (src[i] == '*' && i + 1 < n && src[i + 1] == ')') {
                    depth--;
                    i += 2;
                } else {
                    ++i;
                }
            }
            if (depth > 0)
                lex_error(Span{static_cast<uint32_t>(b), static_cast<uint32_t>(n)},
                          "unterminated comment");
            continue;
        }
        // numbers
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t b = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            bool is_float = false;
            if (i < n && src[i] == '.' && i + 1 < n &&
                std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                is_float = true;
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                // a second dot makes the literal malformed, e.g. "1.2.3"
                if (i < n && src[i] == '.' && i + 1 < n &&
                    std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                    while (i < n && (std::isdigit(static_cast<unsigned char>(src[i])) ||
                                     src[i] == '.'))
                        ++i;
                    lex_error(Span{static_cast<uint32_t>(b), static_cast<uint32_t>(i)},
                              "malformed numeric literal");
                }
            } else if (i < n && src[i] == '.' &&
                       !(i + 1 < n && src[i + 1] == '[')) {
                lex_error(Span{static_cast<uint32_t>(b), static_cast<uint32_t>(i + 1)},
                          "malformed numeric literal: digit expected after '.'");
            }
            std::string text = src.substr(b, i - b);
            Token t;
            t.span = Span{static_cast<uint32_t>(b), static_cast<uint32_t>(i)};
            t.text = text;
            if (is_float) {
                t.kind = Tok::FloatLit;
                t.fval = std::strtod(text.c_str(), nullptr);
            } else {
                t.kind = Tok::IntLit;
                errno = 0;
                char* endp = nullptr;
                long long v = std::strtoll(text.c_str(), &endp, 10);
                if (errno != 0 || v > kMaxIntLit)
                    lex_error(t.span, "integer literal exceeds 63-bit range");
                t.ival = v;
            }
            out.push_back(std::move(t));
            continue;
        }
        // identifiers and keywords
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t b = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                             src[i] == '_' || src[i] == '\''))
                ++i;
            std::string text = src.substr(b, i - b);
            Token t;
            t.span = Span{static_cast<uint32_t>(b), static_cast<uint32_t>(i)};
            t.text = text;
            t.kind = std::isupper(static_cast<unsigned char>(text[0])) ? Tok::UIdent
                                                                       : Tok::LIdent;
            for (auto& kw : kKeywords) {
                if (text == kw.text) {
                    t.kind = kw.tok;
                    break;
                }
            }
            out.push_back(std::move(t));
            continue;
        }
        // operators, longest match first
        auto starts = [&](const char* s) {
            size_t len = 0;
            while (s[len]) ++len;
            if (i + len > n) return false;
            for (size_t k = 0; k < len; ++k)
                if (src[i + k] != s[k]) return false;
            return true;
        };
        struct OpEntry {
            const char* text;
            Tok tok;
        };
        static const OpEntry ops[] = {
            {"<=.", Tok::LeDot}, {">=.", Tok::GeDot}, {"<>.", Tok::NeDot},
            {"+.", Tok::PlusDot}, {"-.", Tok::MinusDot}, {"*.", Tok::StarDot},
            {"/.", Tok::SlashDot}, {"<.", Tok::LtDot}, {">.", Tok::GtDot},
            {"=.", Tok::EqDot}, {"::", Tok::ColonColon}, {":=", Tok::Assign},
            {"->", Tok::Arrow}, {"<-", Tok::DArrow}, {"<=", Tok::Le},
            {">=", Tok::Ge}, {"<>", Tok::Ne}, {".[", Tok::DotBracket},
            {"(", Tok::LParen}, {")", Tok::RParen}, {"[", Tok::LBracket},
            {"]", Tok::RBracket}, {",", Tok::Comma}, {";", Tok::Semi},
            {"|", Tok::Bar}, {"#", Tok::Hash}, {":", Tok::Colon},
            {"=", Tok::Eq}, {"!", Tok::Bang}, {"+", Tok::Plus},
            {"-", Tok::Minus}, {"*", Tok::Star}, {"/", Tok::Slash},
            {"%", Tok::Percent}, {"<", Tok::Lt}, {">", Tok::Gt},
            {"?", Tok::Question},
        };
        bool matched = false;
        for (auto& op : ops) {
            if (starts(op.text)) {
                size_t len = 0;
                while (op.text[len]) ++len;
                push(op.tok, i, i + len);
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched)
            lex_error(Span{static_cast<uint32_t>(i), static_cast<uint32_t>(i + 1)},
                      std::string("illegal character '") + c + "'");
    }
    push(Tok::Eof, n, n);
    return out;
}

} // namespace gtlc::surface
