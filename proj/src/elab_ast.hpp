#ifndef GTLC_ELAB_AST_HPP
#define GTLC_ELAB_AST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evidence.hpp"
#include "source_span.hpp"
#include "surface_ast.hpp"
#include "types.hpp"

namespace gtlc::elab {

enum class K : uint8_t {
    Var, Int, Float, Bool, Unit,
    Lambda, Call, BinOp, PrimOp,
    If, Loop, Let, LetRec,
    MakeRef, Deref, Assign,
    MakeVec, VecGet, VecSet,
    Tuple, Proj, Construct, Match,
    Seq,
    Ascribe,  // evidence-carrying ascription
    CastFail, // ascription chain whose compile-time meet is undefined;
              // evaluates to a cast error when (and only when) reached
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Param {
    std::string name;
    int32_t id = -1; // assigned by alpha renaming
    types::TypePtr type;
    bool ann_absent = false;
    Span span;
};

struct Arm {
    int32_t ctor_id = -1;
    std::vector<Param> binders;
    ExprPtr body;
    Span span;
};

// Typed AST: every node carries its gradual type. Ascribe nodes appear after
// static elaboration.
struct Expr {
    K k;
    Span span;
    types::TypePtr type;

    std::string name;
    int32_t var_id = -1;
    std::vector<ExprPtr> kids;
    std::vector<Param> params; // Lambda
    types::TypePtr ann;        // Let/LetRec annotation as checked
    bool ann_absent = false;

    int64_t ival = 0;
    double fval = 0;
    bool bval = false;
    surface::BinTag bop{};
    surface::PrimTag prim{};
    int proj_index = 0;
    int32_t ctor_id = -1;
    std::vector<Arm> arms;

    // Ascribe / CastFail
    ev::Evidence evd;
    types::TypePtr target;
    bool from_source = false; // originated from a source `e :: T`
    bool value_wrap = false;  // construction evidence on a literal/lambda/ctor
    std::optional<types::Elim> germ; // target is exactly this germ, subject is `?`
    ev::Evidence evd2;               // CastFail: the incompatible pair
};

ExprPtr mk(K k, Span sp, types::TypePtr type);

struct Program {
    types::VariantEnv venv;
    ExprPtr main;
};

// Paper-notation rendering: `<?->int>(fun (x:?) -> <int>x * <int>2)`.
std::string show(const ExprPtr& e);
std::string show(const Program& p);

} // namespace gtlc::elab

#endif
