#ifndef GTLC_CORE_IR_HPP
#define GTLC_CORE_IR_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elab_ast.hpp"
#include "evidence.hpp"
#include "source_span.hpp"
#include "types.hpp"

namespace gtlc::core {

enum class AtomK : uint8_t { VarId, Local, Env, Int, Float, Bool, Unit };

struct Atom {
    AtomK k = AtomK::Unit;
    int32_t id = -1; // VarId: unique variable; Local/Env: slot index
    int64_t i = 0;
    double f = 0;
    bool b = false;
    types::TypePtr stype; // static type at this use
};

Atom atom_int(int64_t v);
Atom atom_float(double v);
Atom atom_bool(bool v);
Atom atom_unit();
Atom atom_var(int32_t id, types::TypePtr stype);

enum class K : uint8_t {
    Atom,
    Ascribe,    // static evidence ascription of an atom
    DynAscribe, // evidence read from a runtime value (dom/cod/content)
    CheckGerm,  // top-constructor check, no evidence update, no allocation
    CastFail,   // statically known-failing ascription chain
    BinOp,
    PrimOp,
    Call,
    DirectCall,
    MakeClosure,
    Lambda, // before closure conversion only
    MakeRef,
    Deref,
    Assign,
    MakeVec,
    VecGet,
    VecSet,
    MakeTuple,
    TupleProj,
    Construct,
    Match,
    If,
    Loop,
    Let,
};

enum class DynSrcK : uint8_t { Dom, CodSelf, RefContent, VecElem, TupleComp };

// DFO representation expected at the target position of an ascription.
enum class RepHint : uint8_t { None, Imm, Boxed, FromSlot };

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Arm {
    int32_t ctor_id = -1;
    std::vector<int32_t> binders; // var ids; slots after closure conversion
    ExprPtr body;
};

struct LamParam {
    int32_t id = -1;
    types::TypePtr type;
};

struct Expr {
    K k;
    Span span;
    std::vector<Atom> atoms; // operands, evaluation order

    ExprPtr e1, e2; // Let: rhs/body; If: then/else; Loop/Lambda: body in e1
    int32_t var = -1;
    bool rec = false; // Let introduced by let rec

    // Ascribe / CastFail
    ev::Evidence evd;
    ev::Evidence evd2;
    types::TypePtr target;
    std::optional<types::Elim> germ;
    bool value_wrap = false;

    // DynAscribe
    DynSrcK dsrc{};
    Atom dsrc_atom;
    int32_t dsrc_idx = 0;
    types::TypePtr pos_stype; // static upper bound at the source position
    RepHint rep = RepHint::None;

    surface::BinTag bop{};
    surface::PrimTag prim{};

    // Call / DirectCall / MakeClosure / Lambda
    int32_t label = -1;
    std::vector<LamParam> lam_params;
    types::TypePtr fun_type;
    int32_t self_capture = -1;   // capture slot aliasing the closure itself
    types::TypePtr call_rtype;   // static result type at the call site

    int32_t ctor_id = -1;
    int proj_index = 0;
    std::vector<Arm> arms;

    types::TypePtr stype; // static type of this expression's value
};

ExprPtr mk(K k, Span sp);

// DFO slot representation for a float-rooted position.
ev::FloatRep slot_rep(const types::TypePtr& t, bool dfo);

struct CodeEntry {
    std::string name;
    int32_t n_params = 0;
    int32_t n_locals = 0; // including params
    int32_t n_env = 0;
    ExprPtr body;
    types::TypePtr fun_type; // the lambda's own written type
    bool needs_self = false;
    bool direct = false;
};

struct Program {
    types::VariantEnv venv;
    std::vector<CodeEntry> code;
    ExprPtr main;
    int32_t main_locals = 0;
    bool dfo = false;
};

// Debug/emit rendering of the core IR.
std::string show(const ExprPtr& e, const Program* prog = nullptr);
std::string show(const Program& p);

// Syntactic queries used by tests and pass assertions.
int count_nodes(const ExprPtr& e, K kind);
int count_dyn_ascriptions(const Program& p);
int count_germ_ascriptions(const Program& p); // static Ascribes targeting a germ

} // namespace gtlc::core

#endif
