#include "checker.hpp"

#include <functional>
#include <set>

namespace gtlc::checker {

using elab::Expr;
using elab::ExprPtr;
using elab::K;
using surface::BinTag;
using surface::PrimTag;
using types::TypePtr;

namespace {

[[noreturn]] void type_error(Span sp, const std::string& msg) {
    throw CompileError(CompileError::Kind::Type, sp, msg);
}

[[noreturn]] void inconsistent(Span sp, const TypePtr& a, const TypePtr& b,
                               const std::string& where) {
    type_error(sp, where + ": " + types::show(a) + " is not consistent with " +
                       types::show(b));
}

// ---- static / dynamic typing mode preparation ----

bool ann_fully_static(const TypePtr& t) { return t && types::fully_precise(t); }

void require_static_type(const TypePtr& t, Span sp, const char* what) {
    if (!t) type_error(sp, std::string("static typing mode: missing annotation on ") + what);
    if (!types::fully_precise(t))
        type_error(sp, std::string("static typing mode: imprecise annotation on ") + what +
                           ": " + types::show(t));
}

void check_static_annotations(const surface::ExprPtr& e) {
    switch (e->k) {
    case surface::K::Lambda:
        for (auto& p : e->params) require_static_type(p.ann, p.span, "parameter");
        break;
    case surface::K::Let:
    case surface::K::LetRec:
        require_static_type(e->ann, e->span, "let binding");
        break;
    case surface::K::Ascribe:
        require_static_type(e->ann, e->span, "ascription");
        break;
    default:
        break;
    }
    for (auto& k : e->kids) check_static_annotations(k);
    for (auto& a : e->arms) check_static_annotations(a.body);
}

surface::ExprPtr erase_annotations(const surface::ExprPtr& e) {
    if (e->k == surface::K::Ascribe) return erase_annotations(e->kids[0]);
    auto c = std::make_shared<surface::Expr>(*e);
    c->ann = nullptr;
    for (auto& p : c->params) p.ann = nullptr;
    for (auto& k : c->kids) k = erase_annotations(k);
    for (auto& a : c->arms) a.body = erase_annotations(a.body);
    return c;
}

// ---- typechecking ----

struct Scope {
    std::vector<std::pair<std::string, TypePtr>> vars;

    void push(const std::string& n, TypePtr t) { vars.emplace_back(n, std::move(t)); }
    void pop(size_t n) { vars.resize(vars.size() - n); }
    const TypePtr* find(const std::string& n) const {
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            if (it->first == n) return &it->second;
        return nullptr;
    }
};

struct Checker {
    const types::VariantEnv& venv;
    Scope scope;

    void validate_type(const TypePtr& t, Span sp) {
        switch (t->kind) {
        case types::TypeKind::Named:
            if (!venv.find_variant(t->name))
                type_error(sp, "unknown variant type: " + t->name);
            return;
        case types::TypeKind::Ref:
        case types::TypeKind::Vec:
            validate_type(t->elem, sp);
            return;
        case types::TypeKind::Tuple:
            for (auto& p : t->parts) validate_type(p, sp);
            return;
        case types::TypeKind::Fun:
            for (auto& p : t->parts) validate_type(p, sp);
            validate_type(t->ret, sp);
            return;
        default:
            return;
        }
    }

    TypePtr ann_or_unknown(const TypePtr& ann, Span sp) {
        if (!ann) return types::t_unknown();
        validate_type(ann, sp);
        return ann;
    }

    // The callee view of a type at an application of the given arity.
    TypePtr fun_view(const TypePtr& t, size_t arity, Span sp) {
        if (types::is_unknown(t))
            return types::germ_of({types::ElimKind::Apply, static_cast<int>(arity), ""});
        if (t->kind == types::TypeKind::Fun) {
            if (t->parts.size() != arity)
                type_error(sp, "function of arity " + std::to_string(t->parts.size()) +
                                   " applied to " + std::to_string(arity) + " argument(s)");
            return t;
        }
        type_error(sp, "expression of type " + types::show(t) + " cannot be applied");
    }

    void require_consistent(const TypePtr& a, const TypePtr& b, Span sp,
                            const char* where) {
        if (!types::consistent(a, b)) inconsistent(sp, a, b, where);
    }

    ExprPtr check(const surface::ExprPtr& s) {
        switch (s->k) {
        case surface::K::Int: {
            auto e = elab::mk(K::Int, s->span, types::t_int());
            e->ival = s->ival;
            return e;
        }
        case surface::K::Float: {
            auto e = elab::mk(K::Float, s->span, types::t_float());
            e->fval = s->fval;
            return e;
        }
        case surface::K::Bool: {
            auto e = elab::mk(K::Bool, s->span, types::t_bool());
            e->bval = s->bval;
            return e;
        }
        case surface::K::Unit:
            return elab::mk(K::Unit, s->span, types::t_unit());
        case surface::K::Var: {
            const TypePtr* t = scope.find(s->name);
            if (!t) type_error(s->span, "unbound variable: " + s->name);
            auto e = elab::mk(K::Var, s->span, *t);
            e->name = s->name;
            return e;
        }
        case surface::K::Lambda: {
            std::vector<elab::Param> params;
            for (auto& p : s->params) {
                elab::Param ep;
                ep.name = p.name;
                ep.type = ann_or_unknown(p.ann, p.span);
                ep.ann_absent = p.ann == nullptr;
                ep.span = p.span;
                params.push_back(std::move(ep));
            }
            for (auto& p : params) scope.push(p.name, p.type);
            ExprPtr body = check(s->kids[0]);
            scope.pop(params.size());
            std::vector<TypePtr> ptypes;
            for (auto& p : params) ptypes.push_back(p.type);
            auto e = elab::mk(K::Lambda, s->span, types::t_fun(ptypes, body->type));
            e->params = std::move(params);
            e->kids = {body};
            return e;
        }
        case surface::K::Call: {
            ExprPtr callee = check(s->kids[0]);
            std::vector<ExprPtr> args;
            for (size_t i = 1; i < s->kids.size(); ++i) args.push_back(check(s->kids[i]));
            TypePtr view = fun_view(callee->type, args.size(), s->span);
            for (size_t i = 0; i < args.size(); ++i) {
                if (!types::consistent(args[i]->type, view->parts[i]))
                    inconsistent(args[i]->span, args[i]->type, view->parts[i], "argument");
            }
            auto e = elab::mk(K::Call, s->span, view->ret);
            e->kids.push_back(callee);
            for (auto& a : args) e->kids.push_back(a);
            return e;
        }
        case surface::K::BinOp: {
            ExprPtr l = check(s->kids[0]);
            ExprPtr r = check(s->kids[1]);
            TypePtr operand = surface::is_float_bin(s->bop) ? types::t_float()
                                                            : types::t_int();
            require_consistent(l->type, operand, l->span, "operand");
            require_consistent(r->type, operand, r->span, "operand");
            TypePtr result = surface::bin_returns_bool(s->bop) ? types::t_bool()
                             : surface::is_float_bin(s->bop)   ? types::t_float()
                                                               : types::t_int();
            auto e = elab::mk(K::BinOp, s->span, result);
            e->bop = s->bop;
            e->kids = {l, r};
            return e;
        }
        case surface::K::PrimOp: {
            if (static_cast<int>(s->kids.size()) != surface::prim_arity(s->prim))
                type_error(s->span, std::string(surface::prim_name(s->prim)) +
                                        " expects " +
                                        std::to_string(surface::prim_arity(s->prim)) +
                                        " argument(s)");
            ExprPtr a = check(s->kids[0]);
            TypePtr in, out;
            switch (s->prim) {
            case PrimTag::PrintInt: in = types::t_int(); out = types::t_unit(); break;
            case PrimTag::PrintBool: in = types::t_bool(); out = types::t_unit(); break;
            case PrimTag::PrintFloat: in = types::t_float(); out = types::t_unit(); break;
            case PrimTag::Not: in = types::t_bool(); out = types::t_bool(); break;
            case PrimTag::Sqrt: in = types::t_float(); out = types::t_float(); break;
            case PrimTag::IntToFloat: in = types::t_int(); out = types::t_float(); break;
            case PrimTag::FloatToInt: in = types::t_float(); out = types::t_int(); break;
            }
            require_consistent(a->type, in, a->span, surface::prim_name(s->prim));
            auto e = elab::mk(K::PrimOp, s->span, out);
            e->prim = s->prim;
            e->kids = {a};
            return e;
        }
        case surface::K::If: {
            ExprPtr c = check(s->kids[0]);
            require_consistent(c->type, types::t_bool(), c->span, "condition");
            ExprPtr t = check(s->kids[1]);
            ExprPtr f = check(s->kids[2]);
            TypePtr m = types::meet(t->type, f->type);
            if (!m) inconsistent(s->span, t->type, f->type, "conditional branches");
            auto e = elab::mk(K::If, s->span, m);
            e->kids = {c, t, f};
            return e;
        }
        case surface::K::Loop: {
            ExprPtr lo = check(s->kids[0]);
            ExprPtr hi = check(s->kids[1]);
            require_consistent(lo->type, types::t_int(), lo->span, "loop bound");
            require_consistent(hi->type, types::t_int(), hi->span, "loop bound");
            scope.push(s->name, types::t_int());
            ExprPtr body = check(s->kids[2]);
            scope.pop(1);
            auto e = elab::mk(K::Loop, s->span, types::t_unit());
            e->name = s->name;
            e->kids = {lo, hi, body};
            return e;
        }
        case surface::K::Let: {
            ExprPtr bound = check(s->kids[0]);
            TypePtr var_t = bound->type;
            if (s->ann) {
                validate_type(s->ann, s->span);
                require_consistent(bound->type, s->ann, s->kids[0]->span, "let binding");
                var_t = s->ann;
            }
            scope.push(s->name, var_t);
            ExprPtr body = check(s->kids[1]);
            scope.pop(1);
            auto e = elab::mk(K::Let, s->span, body->type);
            e->name = s->name;
            e->ann = s->ann;
            e->ann_absent = s->ann == nullptr;
            e->kids = {bound, body};
            return e;
        }
        case surface::K::LetRec: {
            if (s->kids[0]->k != surface::K::Lambda)
                type_error(s->span, "let rec requires a function on the right-hand side");
            TypePtr var_t = ann_or_unknown(s->ann, s->span);
            scope.push(s->name, var_t);
            ExprPtr bound = check(s->kids[0]);
            require_consistent(bound->type, var_t, s->kids[0]->span, "let rec binding");
            ExprPtr body = check(s->kids[1]);
            scope.pop(1);
            auto e = elab::mk(K::LetRec, s->span, body->type);
            e->name = s->name;
            e->ann = s->ann;
            e->ann_absent = s->ann == nullptr;
            e->kids = {bound, body};
            return e;
        }
        case surface::K::MakeRef: {
            ExprPtr v = check(s->kids[0]);
            auto e = elab::mk(K::MakeRef, s->span, types::t_ref(v->type));
            e->kids = {v};
            return e;
        }
        case surface::K::Deref: {
            ExprPtr r = check(s->kids[0]);
            TypePtr elem;
            if (types::is_unknown(r->type)) elem = types::t_unknown();
            else if (r->type->kind == types::TypeKind::Ref) elem = r->type->elem;
            else type_error(s->span, "dereference of non-reference type " +
                                         types::show(r->type));
            auto e = elab::mk(K::Deref, s->span, elem);
            e->kids = {r};
            return e;
        }
        case surface::K::Assign: {
            ExprPtr r = check(s->kids[0]);
            TypePtr elem;
            if (types::is_unknown(r->type)) elem = types::t_unknown();
            else if (r->type->kind == types::TypeKind::Ref) elem = r->type->elem;
            else type_error(s->span, "assignment to non-reference type " +
                                         types::show(r->type));
            ExprPtr v = check(s->kids[1]);
            require_consistent(v->type, elem, v->span, "reference assignment");
            auto e = elab::mk(K::Assign, s->span, types::t_unit());
            e->kids = {r, v};
            return e;
        }
        case surface::K::MakeVec: {
            ExprPtr n = check(s->kids[0]);
            require_consistent(n->type, types::t_int(), n->span, "vector size");
            ExprPtr init = check(s->kids[1]);
            auto e = elab::mk(K::MakeVec, s->span, types::t_vec(init->type));
            e->kids = {n, init};
            return e;
        }
        case surface::K::VecGet: {
            ExprPtr v = check(s->kids[0]);
            TypePtr elem;
            if (types::is_unknown(v->type)) elem = types::t_unknown();
            else if (v->type->kind == types::TypeKind::Vec) elem = v->type->elem;
            else type_error(s->span, "vector access on type " + types::show(v->type));
            ExprPtr i = check(s->kids[1]);
            require_consistent(i->type, types::t_int(), i->span, "vector index");
            auto e = elab::mk(K::VecGet, s->span, elem);
            e->kids = {v, i};
            return e;
        }
        case surface::K::VecSet: {
            ExprPtr v = check(s->kids[0]);
            TypePtr elem;
            if (types::is_unknown(v->type)) elem = types::t_unknown();
            else if (v->type->kind == types::TypeKind::Vec) elem = v->type->elem;
            else type_error(s->span, "vector update on type " + types::show(v->type));
            ExprPtr i = check(s->kids[1]);
            require_consistent(i->type, types::t_int(), i->span, "vector index");
            ExprPtr x = check(s->kids[2]);
            require_consistent(x->type, elem, x->span, "vector element");
            auto e = elab::mk(K::VecSet, s->span, types::t_unit());
            e->kids = {v, i, x};
            return e;
        }
        case surface::K::Tuple: {
            std::vector<TypePtr> ts;
            auto e = elab::mk(K::Tuple, s->span, nullptr);
            for (auto& k : s->kids) {
                ExprPtr c = check(k);
                ts.push_back(c->type);
                e->kids.push_back(c);
            }
            e->type = types::t_tuple(ts);
            return e;
        }
        case surface::K::Proj: {
            ExprPtr t = check(s->kids[0]);
            TypePtr comp;
            if (types::is_unknown(t->type)) comp = types::t_unknown();
            else if (t->type->kind == types::TypeKind::Tuple) {
                if (static_cast<size_t>(s->proj_index) >= t->type->parts.size())
                    type_error(s->span, "projection index " +
                                            std::to_string(s->proj_index) +
                                            " out of range for " + types::show(t->type));
                comp = t->type->parts[static_cast<size_t>(s->proj_index)];
            } else {
                type_error(s->span, "projection from non-tuple type " +
                                        types::show(t->type));
            }
            auto e = elab::mk(K::Proj, s->span, comp);
            e->proj_index = s->proj_index;
            e->kids = {t};
            return e;
        }
        case surface::K::Construct: {
            const auto* ctor = venv.find_ctor(s->name);
            if (!ctor) type_error(s->span, "unknown constructor: " + s->name);
            if (s->kids.size() != ctor->fields.size())
                type_error(s->span, "constructor " + s->name + " expects " +
                                        std::to_string(ctor->fields.size()) +
                                        " field(s), got " +
                                        std::to_string(s->kids.size()));
            auto e = elab::mk(K::Construct, s->span,
                              types::t_named(venv.variant(ctor->type_id).name));
            e->name = s->name;
            e->ctor_id = ctor->id;
            for (size_t i = 0; i < s->kids.size(); ++i) {
                ExprPtr f = check(s->kids[i]);
                require_consistent(f->type, ctor->fields[i], f->span,
                                   "constructor field");
                e->kids.push_back(f);
            }
            return e;
        }
        case surface::K::Match: {
            ExprPtr scrut = check(s->kids[0]);
            if (s->arms.empty()) type_error(s->span, "match with no arms");
            const auto* first = venv.find_ctor(s->arms[0].ctor);
            if (!first) type_error(s->arms[0].span, "unknown constructor: " + s->arms[0].ctor);
            const auto& variant = venv.variant(first->type_id);
            TypePtr named = types::t_named(variant.name);
            if (!types::is_unknown(scrut->type))
                require_consistent(scrut->type, named, scrut->span, "match scrutinee");

            std::set<int32_t> seen;
            auto e = elab::mk(K::Match, s->span, nullptr);
            TypePtr result;
            for (auto& a : s->arms) {
                const auto* c = venv.find_ctor(a.ctor);
                if (!c) type_error(a.span, "unknown constructor: " + a.ctor);
                if (c->type_id != variant.id)
                    type_error(a.span, "constructor " + a.ctor + " does not belong to " +
                                           variant.name);
                if (!seen.insert(c->id).second)
                    type_error(a.span, "duplicate arm for constructor " + a.ctor);
                if (a.binders.size() != c->fields.size())
                    type_error(a.span, "constructor " + a.ctor + " has " +
                                           std::to_string(c->fields.size()) +
                                           " field(s), pattern binds " +
                                           std::to_string(a.binders.size()));
                elab::Arm arm;
                arm.ctor_id = c->id;
                arm.span = a.span;
                for (size_t i = 0; i < a.binders.size(); ++i) {
                    elab::Param b;
                    b.name = a.binders[i];
                    b.type = c->fields[i];
                    b.span = a.span;
                    arm.binders.push_back(b);
                    scope.push(b.name, b.type);
                }
                arm.body = check(a.body);
                scope.pop(a.binders.size());
                if (!result) {
                    result = arm.body->type;
                } else {
                    TypePtr m = types::meet(result, arm.body->type);
                    if (!m) inconsistent(a.span, result, arm.body->type, "match arms");
                    result = m;
                }
                e->arms.push_back(std::move(arm));
            }
            if (seen.size() != variant.ctors.size())
                type_error(s->span, "match does not cover every constructor of " +
                                        variant.name);
            e->type = result;
            e->kids = {scrut};
            return e;
        }
        case surface::K::Ascribe: {
            ExprPtr sub = check(s->kids[0]);
            validate_type(s->ann, s->span);
            require_consistent(sub->type, s->ann, s->span, "ascription");
            auto e = elab::mk(K::Ascribe, s->span, s->ann);
            e->kids = {sub};
            e->target = s->ann;
            e->from_source = true;
            return e;
        }
        case surface::K::Seq: {
            ExprPtr a = check(s->kids[0]);
            ExprPtr b = check(s->kids[1]);
            auto e = elab::mk(K::Seq, s->span, b->type);
            e->kids = {a, b};
            return e;
        }
        }
        type_error(s->span, "unreachable expression kind");
    }
};

} // namespace

elab::Program typecheck(const surface::Program& p, Typing typing) {
    surface::Program work = p;
    if (typing == Typing::Static) {
        check_static_annotations(p.main);
        for (auto& d : p.variants)
            for (auto& c : d.ctors)
                for (auto& f : c.fields)
                    if (!ann_fully_static(f))
                        type_error(d.span, "static typing mode: imprecise constructor field");
    }
    if (typing == Typing::Dynamic) {
        work.main = erase_annotations(p.main);
        work.variants = p.variants;
        for (auto& d : work.variants)
            for (auto& c : d.ctors)
                for (auto& f : c.fields) f = types::t_unknown();
    }

    elab::Program out;
    for (auto& d : work.variants) {
        std::vector<std::pair<std::string, std::vector<TypePtr>>> ctors;
        for (auto& c : d.ctors) ctors.emplace_back(c.name, c.fields);
        try {
            out.venv.declare(d.name, ctors);
        } catch (const std::invalid_argument& ex) {
            type_error(d.span, ex.what());
        }
    }
    // constructor fields may mention any declared variant (iso-recursion)
    Checker ck{out.venv, {}};
    for (auto& d : work.variants)
        for (auto& c : d.ctors)
            for (auto& f : c.fields) ck.validate_type(f, d.span);
    out.main = ck.check(work.main);
    return out;
}

// ---- static elaboration ----

namespace {

struct Elaborator {
    const types::VariantEnv& venv;
    bool dfo;

    ExprPtr wrap_to(ExprPtr e, const TypePtr& expected) {
        auto evd = ev::initial(e->type, expected, dfo);
        if (!evd)
            throw std::logic_error("elaboration: missing initial evidence for " +
                                   types::show(e->type) + " ~ " + types::show(expected));
        auto a = elab::mk(K::Ascribe, e->span, expected);
        a->evd = *evd;
        a->target = expected;
        if (types::is_unknown(e->type)) {
            if (auto g = types::as_germ(expected)) a->germ = *g;
        }
        a->kids = {std::move(e)};
        return a;
    }

    // Construction evidence: the value's own type.
    ExprPtr value_wrap(ExprPtr e) {
        TypePtr t = e->type;
        auto a = wrap_to(std::move(e), t);
        a->value_wrap = true;
        return a;
    }

    TypePtr germ_view(const TypePtr& t, const types::Elim& elim) {
        return types::is_unknown(t) ? types::germ_of(elim) : t;
    }

    ExprPtr elab(ExprPtr e) {
        switch (e->k) {
        case K::Int:
        case K::Float:
        case K::Bool:
            return value_wrap(e);
        case K::Unit:
        case K::Var:
            return e;
        case K::Lambda:
            e->kids[0] = elab(e->kids[0]);
            return value_wrap(e);
        case K::Call: {
            ExprPtr callee = elab(e->kids[0]);
            TypePtr view = germ_view(callee->type,
                                     {types::ElimKind::Apply,
                                      static_cast<int>(e->kids.size()) - 1, ""});
            e->kids[0] = wrap_to(std::move(callee), view);
            for (size_t i = 1; i < e->kids.size(); ++i)
                e->kids[i] = wrap_to(elab(e->kids[i]), view->parts[i - 1]);
            return e;
        }
        case K::BinOp: {
            TypePtr operand = surface::is_float_bin(e->bop) ? types::t_float()
                                                            : types::t_int();
            e->kids[0] = wrap_to(elab(e->kids[0]), operand);
            e->kids[1] = wrap_to(elab(e->kids[1]), operand);
            return e;
        }
        case K::PrimOp: {
            TypePtr in;
            switch (e->prim) {
            case PrimTag::PrintInt: in = types::t_int(); break;
            case PrimTag::PrintBool: in = types::t_bool(); break;
            case PrimTag::PrintFloat: in = types::t_float(); break;
            case PrimTag::Not: in = types::t_bool(); break;
            case PrimTag::Sqrt: in = types::t_float(); break;
            case PrimTag::IntToFloat: in = types::t_int(); break;
            case PrimTag::FloatToInt: in = types::t_float(); break;
            }
            e->kids[0] = wrap_to(elab(e->kids[0]), in);
            return e;
        }
        case K::If: {
            e->kids[0] = wrap_to(elab(e->kids[0]), types::t_bool());
            e->kids[1] = wrap_to(elab(e->kids[1]), e->type);
            e->kids[2] = wrap_to(elab(e->kids[2]), e->type);
            return e;
        }
        case K::Loop: {
            e->kids[0] = wrap_to(elab(e->kids[0]), types::t_int());
            e->kids[1] = wrap_to(elab(e->kids[1]), types::t_int());
            e->kids[2] = elab(e->kids[2]);
            return e;
        }
        case K::Let: {
            ExprPtr bound = elab(e->kids[0]);
            if (e->ann) bound = wrap_to(std::move(bound), e->ann);
            e->kids[0] = std::move(bound);
            e->kids[1] = elab(e->kids[1]);
            return e;
        }
        case K::LetRec: {
            TypePtr var_t = e->ann ? e->ann : types::t_unknown();
            e->kids[0] = wrap_to(elab(e->kids[0]), var_t);
            e->kids[1] = elab(e->kids[1]);
            return e;
        }
        case K::MakeRef:
            e->kids[0] = elab(e->kids[0]);
            return e;
        case K::Deref: {
            ExprPtr r = elab(e->kids[0]);
            TypePtr view = germ_view(r->type, {types::ElimKind::Deref, 0, ""});
            e->kids[0] = wrap_to(std::move(r), view);
            return e;
        }
        case K::Assign: {
            ExprPtr r = elab(e->kids[0]);
            TypePtr view = germ_view(r->type, {types::ElimKind::Deref, 0, ""});
            e->kids[0] = wrap_to(std::move(r), view);
            e->kids[1] = wrap_to(elab(e->kids[1]), view->elem);
            return e;
        }
        case K::MakeVec: {
            e->kids[0] = wrap_to(elab(e->kids[0]), types::t_int());
            e->kids[1] = elab(e->kids[1]);
            return e;
        }
        case K::VecGet: {
            ExprPtr v = elab(e->kids[0]);
            TypePtr view = germ_view(v->type, {types::ElimKind::VecAccess, 0, ""});
            e->kids[0] = wrap_to(std::move(v), view);
            e->kids[1] = wrap_to(elab(e->kids[1]), types::t_int());
            return e;
        }
        case K::VecSet: {
            ExprPtr v = elab(e->kids[0]);
            TypePtr view = germ_view(v->type, {types::ElimKind::VecAccess, 0, ""});
            e->kids[0] = wrap_to(std::move(v), view);
            e->kids[1] = wrap_to(elab(e->kids[1]), types::t_int());
            e->kids[2] = wrap_to(elab(e->kids[2]), view->elem);
            return e;
        }
        case K::Tuple:
            for (auto& k : e->kids) k = elab(k);
            return e;
        case K::Proj: {
            ExprPtr t = elab(e->kids[0]);
            TypePtr view = germ_view(t->type,
                                     {types::ElimKind::TupleProj, e->proj_index, ""});
            e->kids[0] = wrap_to(std::move(t), view);
            return e;
        }
        case K::Construct: {
            const auto& ctor = venv.ctor(e->ctor_id);
            for (size_t i = 0; i < e->kids.size(); ++i)
                e->kids[i] = wrap_to(elab(e->kids[i]), ctor.fields[i]);
            return value_wrap(e);
        }
        case K::Match: {
            ExprPtr s = elab(e->kids[0]);
            const auto& variant = venv.variant(venv.ctor(e->arms[0].ctor_id).type_id);
            TypePtr view = germ_view(s->type, {types::ElimKind::Match, 0, variant.name});
            e->kids[0] = wrap_to(std::move(s), view);
            for (auto& a : e->arms) a.body = wrap_to(elab(a.body), e->type);
            return e;
        }
        case K::Ascribe: {
            // source ascription: attach its initial evidence
            ExprPtr sub = elab(e->kids[0]);
            auto evd = ev::initial(sub->type, e->target, dfo);
            e->evd = *evd;
            if (types::is_unknown(sub->type)) {
                if (auto g = types::as_germ(e->target)) e->germ = *g;
            }
            e->kids[0] = std::move(sub);
            return e;
        }
        case K::Seq:
            e->kids[0] = elab(e->kids[0]);
            e->kids[1] = elab(e->kids[1]);
            return e;
        case K::CastFail:
            return e;
        }
        return e;
    }
};

} // namespace

void elaborate_static(elab::Program& p, bool dfo) {
    Elaborator el{p.venv, dfo};
    p.main = el.elab(p.main);
}

// ---- ascription simplification ----

namespace {

bool is_value_node(const ExprPtr& e) {
    switch (e->k) {
    case K::Int:
    case K::Float:
    case K::Bool:
    case K::Lambda:
    case K::Construct:
        return true;
    default:
        return false;
    }
}

struct Simplifier {
    bool dfo;

    // Statically known upper bound on the runtime evidence of e.
    TypePtr static_bound(const ExprPtr& e) {
        if (e->k == K::Ascribe) return e->evd.payload;
        return e->type;
    }

    // With DFO, an ascription whose evidence may box or unbox cannot be
    // dropped even when it adds no precision.
    bool rep_safe_to_drop(const ExprPtr& subject, const ev::Evidence& evd) {
        if (!dfo) return true;
        if (evd.payload->kind != types::TypeKind::Float) return true;
        bool subject_imm = subject->type->kind == types::TypeKind::Float;
        bool target_imm = evd.rep == ev::FloatRep::Immediate;
        return subject_imm == target_imm;
    }

    ExprPtr simp(ExprPtr e) {
        for (auto& k : e->kids) k = simp(k);
        for (auto& a : e->arms) a.body = simp(a.body);
        if (e->k != K::Ascribe) return e;

        // collapse a chain through compile-time transitivity
        while (e->kids[0]->k == K::Ascribe) {
            ExprPtr inner = e->kids[0];
            auto combined = ev::trans(inner->evd, e->evd);
            if (!combined) {
                auto fail = elab::mk(K::CastFail, e->span, e->target);
                fail->evd = inner->evd;
                fail->evd2 = e->evd;
                fail->kids = {inner->kids[0]};
                return fail;
            }
            e->evd = *combined;
            e->value_wrap = inner->value_wrap;
            if (e->germ && !types::is_unknown(inner->kids[0]->type)) e->germ.reset();
            e->kids[0] = inner->kids[0];
        }

        const ExprPtr& subject = e->kids[0];
        if (e->value_wrap && is_value_node(subject)) return e;
        if (types::precision_le(static_bound(subject), e->evd.payload) &&
            rep_safe_to_drop(subject, e->evd))
            return subject;
        return e;
    }
};

} // namespace

void simplify_ascriptions(elab::Program& p, bool dfo) {
    Simplifier s{dfo};
    p.main = s.simp(p.main);
}

} // namespace gtlc::checker
