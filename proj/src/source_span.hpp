#ifndef GTLC_SOURCE_SPAN_HPP
#define GTLC_SOURCE_SPAN_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gtlc {

// Half-open byte range into the source buffer.
struct Span {
    uint32_t begin = 0;
    uint32_t end = 0;
};

inline Span join(Span a, Span b) {
    return Span{a.begin < b.begin ? a.begin : b.begin,
                a.end > b.end ? a.end : b.end};
}

// Line/column lookup for diagnostics; 1-based.
struct LineCol {
    uint32_t line = 1;
    uint32_t col = 1;
};

inline LineCol locate(const std::string& source, uint32_t offset) {
    LineCol lc;
    for (uint32_t i = 0; i < offset && i < source.size(); ++i) {
        if (source[i] == '\n') {
            lc.line++;
            lc.col = 1;
        } else {
            lc.col++;
        }
    }
    return lc;
}

// Front-end failure (lexing, parsing, or typing). Carries the span of the
// offending construct.
struct CompileError : std::runtime_error {
    enum class Kind { Lex, Parse, Type };
    Kind kind;
    Span span;
    CompileError(Kind k, Span s, const std::string& msg)
        : std::runtime_error(msg), kind(k), span(s) {}
};

} // namespace gtlc

#endif
