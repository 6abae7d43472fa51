#ifndef GTLC_PIPELINE_HPP
#define GTLC_PIPELINE_HPP

#include <string>

#include "checker.hpp"
#include "core_ir.hpp"
#include "midend.hpp"
#include "vm.hpp"

namespace gtlc::pipeline {

struct PassToggles {
    bool simplify = true;
    bool germs = true;
    bool prune = true;
    bool direct = true;
};

struct Options {
    checker::Typing typing = checker::Typing::Gradual;
    bool dfo = false;
    PassToggles passes;
};

// Full pipeline: parse, typecheck, static elaboration (+ simplification),
// alpha renaming, ANF, dynamic elaboration, germ specialization, pruning,
// closure conversion. Throws CompileError on front-end failures.
core::Program compile(const std::string& source, const Options& opts);

// Compile a pre-parsed program (the dynamizer and harness reuse parses).
core::Program compile(const surface::Program& program, const Options& opts);

enum class Stage { Ast, Elab, Anf, Core };
bool parse_stage(const std::string& s, Stage& out);

// Dump of the pipeline at the requested stage, honoring the same options.
std::string emit_stage(const std::string& source, const Options& opts, Stage stage);

} // namespace gtlc::pipeline

#endif
