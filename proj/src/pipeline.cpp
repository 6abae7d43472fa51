#include "pipeline.hpp"

#include "parser.hpp"
#include "pretty.hpp"

namespace gtlc::pipeline {

core::Program compile(const surface::Program& program, const Options& opts) {
    elab::Program ep = checker::typecheck(program, opts.typing);
    checker::elaborate_static(ep, opts.dfo);
    if (opts.passes.simplify) checker::simplify_ascriptions(ep, opts.dfo);
    midend::alpha_rename(ep);
    midend::CoreStage stage = midend::to_anf(ep, opts.dfo);
    midend::elaborate_dynamic(stage);
    if (opts.passes.germs) midend::specialize_germs(stage);
    if (opts.passes.prune) midend::prune_dynamic_ascriptions(stage);
    return midend::closure_convert(stage, opts.passes.direct);
}

core::Program compile(const std::string& source, const Options& opts) {
    return compile(surface::parse_source(source), opts);
}

bool parse_stage(const std::string& s, Stage& out) {
    if (s == "ast") out = Stage::Ast;
    else if (s == "elab") out = Stage::Elab;
    else if (s == "anf") out = Stage::Anf;
    else if (s == "core") out = Stage::Core;
    else return false;
    return true;
}

std::string emit_stage(const std::string& source, const Options& opts, Stage stage) {
    surface::Program sp = surface::parse_source(source);
    if (stage == Stage::Ast) return surface::pretty(sp);

    elab::Program ep = checker::typecheck(sp, opts.typing);
    checker::elaborate_static(ep, opts.dfo);
    if (opts.passes.simplify) checker::simplify_ascriptions(ep, opts.dfo);
    if (stage == Stage::Elab) return elab::show(ep) + "\n";

    midend::alpha_rename(ep);
    midend::CoreStage cs = midend::to_anf(ep, opts.dfo);
    if (stage == Stage::Anf) return core::show(cs.main) + "\n";

    midend::elaborate_dynamic(cs);
    if (opts.passes.germs) midend::specialize_germs(cs);
    if (opts.passes.prune) midend::prune_dynamic_ascriptions(cs);
    core::Program prog = midend::closure_convert(cs, opts.passes.direct);
    return core::show(prog);
}

} // namespace gtlc::pipeline
