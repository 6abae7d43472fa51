#ifndef GTLC_PRETTY_HPP
#define GTLC_PRETTY_HPP

#include <string>

#include "surface_ast.hpp"

namespace gtlc::surface {

// Renders a program or expression back to concrete syntax. Round-trip
// property: parse(pretty(parse(p))) structurally equals parse(p), modulo
// spans. Absent annotations stay absent; explicit `?` prints as `: ?`.
std::string pretty(const Program& p);
std::string pretty(const ExprPtr& e);

} // namespace gtlc::surface

#endif
