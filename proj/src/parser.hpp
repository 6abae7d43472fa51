#ifndef GTLC_PARSER_HPP
#define GTLC_PARSER_HPP

#include <string>
#include <vector>

#include "lexer.hpp"
#include "surface_ast.hpp"

namespace gtlc::surface {

// Parses a token stream produced by tokenize. Missing annotations are stored
// as absent (null), not as `?`. Throws CompileError (Parse) with the span of
// the offending token.
Program parse_program(const std::vector<Token>& tokens);

// Convenience: tokenize + parse.
Program parse_source(const std::string& source);

// Parse a single type, for tests and tools.
types::TypePtr parse_type_string(const std::string& text);

} // namespace gtlc::surface

#endif
