#ifndef GTLC_SURFACE_AST_HPP
#define GTLC_SURFACE_AST_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "source_span.hpp"
#include "types.hpp"

namespace gtlc::surface {

enum class BinTag : uint8_t {
    AddI, SubI, MulI, DivI, ModI,
    AddF, SubF, MulF, DivF,
    LtI, LeI, GtI, GeI, EqI, NeI,
    LtF, LeF, GtF, GeF, EqF, NeF,
};

enum class PrimTag : uint8_t {
    PrintInt, PrintBool, PrintFloat,
    Not, Sqrt, IntToFloat, FloatToInt,
};

bool is_float_bin(BinTag t);
bool bin_returns_bool(BinTag t);
const char* bin_lexeme(BinTag t);
const char* prim_name(PrimTag t);
bool lookup_prim(const std::string& name, PrimTag& out);
int prim_arity(PrimTag t);

enum class K : uint8_t {
    Var, Int, Float, Bool, Unit,
    Lambda, Call, BinOp, PrimOp,
    If, Loop, Let, LetRec,
    MakeRef, Deref, Assign,
    MakeVec, VecGet, VecSet,
    Tuple, Proj, Construct, Match,
    Ascribe, Seq,
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Param {
    std::string name;
    types::TypePtr ann; // nullptr = annotation absent (read as ? by the checker)
    Span span;
};

struct Arm {
    std::string ctor;
    std::vector<std::string> binders;
    ExprPtr body;
    Span span;
};

struct Expr {
    K k;
    Span span;

    std::string name;             // Var / Let / LetRec binder / Construct ctor
    std::vector<ExprPtr> kids;    // generic children, order = evaluation order
    std::vector<Param> params;    // Lambda
    types::TypePtr ann;           // Let/LetRec annotation or Ascribe target; nullptr = absent
    bool paren_tuple = false;     // Tuple: was written wrapped in extra parens

    int64_t ival = 0;
    double fval = 0;
    bool bval = false;
    BinTag bop{};
    PrimTag prim{};
    int proj_index = 0;

    std::vector<Arm> arms; // Match
};

ExprPtr mk(K k, Span sp);

struct VariantDecl {
    std::string name;
    struct Ctor {
        std::string name;
        std::vector<types::TypePtr> fields;
        Span span;
    };
    std::vector<Ctor> ctors;
    Span span;
};

struct Program {
    std::vector<VariantDecl> variants;
    ExprPtr main;
};

// Structural equality ignoring spans; used by round-trip tests and the
// dynamizer's self-checks.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool program_equal(const Program& a, const Program& b);

} // namespace gtlc::surface

#endif
