#ifndef GTLC_CHECKER_HPP
#define GTLC_CHECKER_HPP

#include "elab_ast.hpp"
#include "surface_ast.hpp"

namespace gtlc::checker {

enum class Typing : uint8_t { Gradual, Static, Dynamic };

// Gradual typechecking. Missing annotations are read as `?`. In Static mode
// the program is rejected if any annotation is missing or imprecise; in
// Dynamic mode every annotation is erased to `?` (and source ascriptions
// dropped) before checking. Throws CompileError (Type) with span and the
// failing consistency pair.
elab::Program typecheck(const surface::Program& p, Typing typing = Typing::Gradual);

// Inserts evidence ascriptions everywhere consistency justified typing:
// values, operands, arguments, data-structure elements, primitive-op
// arguments, plus germ-view ascriptions on elimination subjects.
void elaborate_static(elab::Program& p, bool dfo);

// Collapses ascription chains via compile-time consistent transitivity and
// drops ascriptions whose subject is already at least as precise.
// Construction evidence on value nodes is kept (it compiles to no runtime
// check). A chain whose compile-time meet is undefined becomes a CastFail
// node that errors when evaluated.
void simplify_ascriptions(elab::Program& p, bool dfo);

} // namespace gtlc::checker

#endif
