#ifndef GTLC_LEXER_HPP
#define GTLC_LEXER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "source_span.hpp"

namespace gtlc::surface {

enum class Tok : uint8_t {
    // keywords
    Let, Rec, In, Fun, If, Then, Else, Loop, To, Do, Done,
    Ref, Vector, Type, Of, Match, With, True, False,
    // punctuation / operators
    LParen, RParen, LBracket, RBracket, DotBracket /* .[ */,
    Comma, Semi, Bar, Hash,
    Arrow,      // ->
    DArrow,     // <- (vector set)
    ColonColon, // ::
    Colon, Eq, Assign /* := */, Bang,
    Plus, Minus, Star, Slash, Percent,
    PlusDot, MinusDot, StarDot, SlashDot,
    Lt, Le, Gt, Ge, Ne,                 // <  <=  >  >=  <>
    LtDot, LeDot, GtDot, GeDot, EqDot, NeDot,
    Question,
    LIdent, UIdent, IntLit, FloatLit,
    Eof,
};

struct Token {
    Tok kind;
    Span span;
    std::string text; // identifiers and literal lexemes
    int64_t ival = 0;
    double fval = 0;
};

const char* tok_name(Tok t);

// Lexes the whole buffer. Comments `(* ... *)` (nesting allowed) and
// whitespace are dropped; every token carries its span. Throws CompileError
// (Lex) on illegal characters and malformed numeric literals.
std::vector<Token> tokenize(const std::string& source);

} // namespace gtlc::surface

#endif
