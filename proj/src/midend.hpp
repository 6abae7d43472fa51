#ifndef GTLC_MIDEND_HPP
#define GTLC_MIDEND_HPP

#include "core_ir.hpp"
#include "elab_ast.hpp"

namespace gtlc::midend {

// Gives every binder a globally unique id and resolves variable uses.
// Idempotent up to the choice of suffixes.
void alpha_rename(elab::Program& p);

// Intermediate program between ANF conversion and closure conversion: still
// contains Lambda nodes and VarId atoms.
struct CoreStage {
    types::VariantEnv venv;
    core::ExprPtr main;
    bool dfo = false;
    int32_t next_var = 0;
};

// ANF conversion: every application/operation argument becomes a let-bound
// atom, evaluation order left-to-right.
CoreStage to_anf(const elab::Program& p, bool dfo);

// Inserts DynAscribe nodes: call arguments to dom(i, callee), function
// results to cod(self), reads and writes of refs/vectors/tuples to the
// structure's content evidence.
void elaborate_dynamic(CoreStage& s);

// Static Ascribes whose target is exactly a germ and whose subject has
// static type `?` become CheckGerm.
void specialize_germs(CoreStage& s);

// Deletes DynAscribes whose source position has a fully precise static type
// (the evidence cannot gain precision). With DFO, ascriptions at root-Float
// positions are kept: they may have to box or unbox.
void prune_dynamic_ascriptions(CoreStage& s);

// Lifts lambdas to a code table, captures free variables by value, and turns
// calls to known non-escaping let-rec functions into DirectCall.
core::Program closure_convert(CoreStage& s, bool direct_calls);

} // namespace gtlc::midend

#endif
