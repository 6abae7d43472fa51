#include "vm.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace gtlc::vm {

using core::Atom;
using core::AtomK;
using core::ExprPtr;
using core::K;

const char* semantics_name(Semantics s) {
    switch (s) {
    case Semantics::G: return "g";
    case Semantics::MC: return "mc";
    case Semantics::MV: return "mv";
    }
    return "?";
}

bool parse_semantics(const std::string& s, Semantics& out) {
    if (s == "g" || s == "G") out = Semantics::G;
    else if (s == "mc" || s == "MC") out = Semantics::MC;
    else if (s == "mv" || s == "MV") out = Semantics::MV;
    else return false;
    return true;
}

std::string Counters::to_json() const {
    std::string s = "{";
    auto field = [&](const char* name, uint64_t v, bool first = false) {
        if (!first) s += ",";
        s += "\"";
        s += name;
        s += "\":";
        s += std::to_string(v);
    };
    field("trans_ops", trans_ops, true);
    field("proxy_allocs", proxy_allocs);
    field("closure_proxy_allocs", closure_proxy_allocs);
    field("heap_allocs", heap_allocs);
    field("float_boxes", float_boxes);
    field("germ_checks", germ_checks);
    field("cast_errors", cast_errors);
    field("heap_precision_gains", heap_precision_gains);
    s += "}";
    return s;
}

EvValue EvValue::of_int(int64_t v) {
    EvValue e;
    e.tag = Tag::Int;
    e.i = v;
    return e;
}
EvValue EvValue::of_bool(bool v) {
    EvValue e;
    e.tag = Tag::Bool;
    e.b = v;
    return e;
}
EvValue EvValue::unit() { return EvValue{}; }
EvValue EvValue::of_float_imm(double v) {
    EvValue e;
    e.tag = Tag::Float;
    e.f = v;
    return e;
}
EvValue EvValue::of_obj(Handle h) {
    EvValue e;
    e.tag = Tag::Obj;
    e.obj = std::move(h);
    return e;
}

const char* outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Value: return "value";
    case Outcome::CastError: return "cast-error";
    case Outcome::GermError: return "germ-error";
    case Outcome::OtherError: return "other-error";
    }
    return "?";
}

int outcome_exit_code(Outcome o) {
    switch (o) {
    case Outcome::Value: return 0;
    case Outcome::CastError:
    case Outcome::GermError: return 3;
    case Outcome::OtherError: return 4;
    }
    return 4;
}

int64_t wrap63(int64_t v) {
    uint64_t u = static_cast<uint64_t>(v) & ((1ULL << 63) - 1);
    if (u & (1ULL << 62)) u |= (1ULL << 63); // sign-extend bit 62
    return static_cast<int64_t>(u);
}

namespace {

std::string show_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find_first_of(".einf") == std::string::npos) s += ".0";
    return s;
}

struct VmError {
    ErrKind kind;
    Span span;
    std::string detail;
};

[[noreturn]] void raise(ErrKind k, Span sp, std::string detail) {
    throw VmError{k, sp, std::move(detail)};
}

const char* elim_label(types::ElimKind k) {
    switch (k) {
    case types::ElimKind::Apply: return "application";
    case types::ElimKind::Deref: return "dereference";
    case types::ElimKind::VecAccess: return "vector access";
    case types::ElimKind::TupleProj: return "tuple projection";
    case types::ElimKind::Match: return "match";
    }
    return "?";
}

struct Machine {
    const core::Program& prog;
    Mode mode;
    Limits limits;
    std::ostream& out;
    Counters ctr;

    struct Frame {
        std::vector<EvValue> locals;
        std::shared_ptr<std::vector<EvValue>> env;
        Handle self;
    };

    // Continuations reference the program tree, which outlives the run.
    struct Kont {
        enum class T : uint8_t { Bind, Loop, Return } t;
        int32_t slot = 0;              // Bind/Loop
        const core::Expr* next = nullptr; // Bind: rest; Loop: body
        int64_t i = 0, hi = 0;         // Loop
        const types::Type* call_rtype = nullptr; // Return
    };

    Frame frame;
    std::vector<Frame> frame_stack;
    std::vector<Kont> konts;
    std::vector<std::vector<EvValue>> locals_pool;

    Machine(const core::Program& p, Mode m, Limits l, std::ostream& o)
        : prog(p), mode(m), limits(l), out(o) {}

    std::vector<EvValue> take_locals(size_t n) {
        if (locals_pool.empty()) return std::vector<EvValue>(n);
        std::vector<EvValue> v = std::move(locals_pool.back());
        locals_pool.pop_back();
        v.clear();
        v.resize(n);
        return v;
    }

    void recycle_locals(std::vector<EvValue>&& v) {
        if (locals_pool.size() < 64) {
            v.clear();
            locals_pool.push_back(std::move(v));
        }
    }

    bool structures_monotonic() const { return mode.sem == Semantics::MV; }
    bool closures_monotonic() const { return mode.sem != Semantics::G; }

    // ---- evidence of a value ----

    ev::Evidence evidence_of(const EvValue& v) const {
        switch (v.tag) {
        case EvValue::Tag::Int: return ev::make(types::t_int());
        case EvValue::Tag::Bool: return ev::make(types::t_bool());
        case EvValue::Tag::Unit: return ev::make(types::t_unit());
        case EvValue::Tag::Float:
            return ev::make(types::t_float(), ev::FloatRep::Immediate);
        case EvValue::Tag::Obj: return v.obj->evd;
        }
        return ev::make(types::t_unknown());
    }

    types::TypePtr payload_of(const EvValue& v) const { return evidence_of(v).payload; }

    // ---- heap construction ----

    Handle alloc(HeapObject obj) {
        ctr.heap_allocs++;
        return std::make_shared<HeapObject>(std::move(obj));
    }

    EvValue box_float(double f) {
        ctr.float_boxes++;
        HeapObject o;
        o.kind = ObjKind::Float;
        o.evd = ev::make(types::t_float(),
                         mode.dfo ? ev::FloatRep::Boxed : ev::FloatRep::None);
        o.fval = f;
        return EvValue::of_obj(alloc(std::move(o)));
    }

    EvValue make_float(double f) {
        return mode.dfo ? EvValue::of_float_imm(f) : box_float(f);
    }

    double float_payload(const EvValue& v, Span sp) const {
        if (v.tag == EvValue::Tag::Float) return v.f;
        if (v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Float)
            return v.obj->fval;
        raise(ErrKind::Internal, sp, "expected a float value");
    }

    // ---- ascription ----

    bool head_matches(const types::TypePtr& p, const HeapObject& o) const {
        switch (o.kind) {
        case ObjKind::Ref: return p->kind == types::TypeKind::Ref;
        case ObjKind::Vec: return p->kind == types::TypeKind::Vec;
        case ObjKind::Tuple:
            return p->kind == types::TypeKind::Tuple &&
                   p->parts.size() == o.evd.payload->parts.size();
        case ObjKind::Closure:
            return p->kind == types::TypeKind::Fun &&
                   p->parts.size() == o.evd.payload->parts.size();
        default: return false;
        }
    }

    [[noreturn]] void cast_error(Span sp, const ev::Evidence& a, const ev::Evidence& b,
                                 const char* what) {
        ctr.cast_errors++;
        raise(ErrKind::Cast, sp,
              std::string(what) + ": " + ev::show(a) + " is inconsistent with " +
                  ev::show(b));
    }

    // Core of the runtime semantics: combine a value with ascription
    // evidence. Immediates fold their implicit evidence; monotonic heap
    // objects update evidence in place; guarded heap objects get a fresh
    // proxy sharing the underlying block.
    EvValue ascribe_value(EvValue v, const ev::Evidence& e, Span sp,
                          const std::optional<types::Elim>& germ = std::nullopt) {
        switch (v.tag) {
        case EvValue::Tag::Int:
        case EvValue::Tag::Bool:
        case EvValue::Tag::Unit: {
            ctr.trans_ops++;
            auto t = ev::trans(evidence_of(v), e);
            if (!t) cast_error(sp, evidence_of(v), e, "ascription");
            return v;
        }
        case EvValue::Tag::Float: {
            ctr.trans_ops++;
            auto r = ev::dfo_trans(evidence_of(v), e);
            if (!r) cast_error(sp, evidence_of(v), e, "ascription");
            if (r->action == ev::BoxAction::BoxFloat) return box_float(v.f);
            return v;
        }
        case EvValue::Tag::Obj:
            return ascribe_obj(std::move(v), e, sp, germ);
        }
        raise(ErrKind::Internal, sp, "ascription on malformed value");
    }

    EvValue ascribe_obj(EvValue v, const ev::Evidence& e, Span sp,
                        const std::optional<types::Elim>& germ) {
        HeapObject& o = *v.obj;
        switch (o.kind) {
        case ObjKind::Float: {
            ctr.trans_ops++;
            if (mode.dfo) {
                auto r = ev::dfo_trans(o.evd, e);
                if (!r) cast_error(sp, o.evd, e, "ascription");
                if (r->action == ev::BoxAction::UnboxFloat)
                    return EvValue::of_float_imm(o.fval);
                return v;
            }
            auto t = ev::trans(o.evd, e);
            if (!t) cast_error(sp, o.evd, e, "ascription");
            return v;
        }
        case ObjKind::Variant: {
            // variant evidence is fully precise and never changes
            ctr.trans_ops++;
            auto t = ev::trans(o.evd, e);
            if (!t) cast_error(sp, o.evd, e, "ascription");
            return v;
        }
        case ObjKind::Ref:
        case ObjKind::Vec:
        case ObjKind::Tuple:
        case ObjKind::Closure: {
            bool monotonic =
                o.kind == ObjKind::Closure ? closures_monotonic() : structures_monotonic();
            if (!types::precision_le(o.evd.payload, e.payload))
                ctr.heap_precision_gains++;

            // a tuple germ admits any arity above the projected index and
            // leaves the evidence untouched
            if (germ && germ->kind == types::ElimKind::TupleProj) {
                if (o.kind != ObjKind::Tuple ||
                    static_cast<int>(o.evd.payload->parts.size()) <= germ->detail)
                    cast_error(sp, o.evd, e, elim_label(germ->kind));
                ctr.trans_ops++;
                return v;
            }

            if (monotonic) {
                ctr.trans_ops++;
                auto t = ev::trans(o.evd, e);
                if (!t) cast_error(sp, o.evd, e, "ascription");
                assert(types::precision_le(t->payload, o.evd.payload));
                o.evd = *t;
                return v;
            }

            // guarded: obligations are per alias; an unknown-rooted
            // ascription imposes nothing
            if (types::is_unknown(e.payload)) {
                ctr.trans_ops++;
                return v;
            }
            if (!head_matches(e.payload, o)) cast_error(sp, o.evd, e, "ascription");
            HeapObject proxy = o; // shallow copy, shares the block
            proxy.evd = e;
            ctr.proxy_allocs++;
            if (o.kind == ObjKind::Closure) ctr.closure_proxy_allocs++;
            return EvValue::of_obj(alloc(std::move(proxy)));
        }
        }
        raise(ErrKind::Internal, sp, "ascription on malformed object");
    }

    EvValue check_germ(EvValue v, const types::Elim& elim, Span sp) {
        ctr.germ_checks++;
        const types::TypePtr p = payload_of(v);
        bool ok = false;
        switch (elim.kind) {
        case types::ElimKind::Apply:
            ok = v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Closure &&
                 p->kind == types::TypeKind::Fun &&
                 static_cast<int>(p->parts.size()) == elim.detail;
            break;
        case types::ElimKind::Deref:
            ok = v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Ref;
            break;
        case types::ElimKind::VecAccess:
            ok = v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Vec;
            break;
        case types::ElimKind::TupleProj:
            ok = v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Tuple &&
                 static_cast<int>(p->parts.size()) > elim.detail;
            break;
        case types::ElimKind::Match:
            ok = v.tag == EvValue::Tag::Obj && v.obj->kind == ObjKind::Variant &&
                 p->kind == types::TypeKind::Named && p->name == elim.variant;
            break;
        }
        if (!ok) {
            raise(ErrKind::Germ, sp,
                  std::string(elim_label(elim.kind)) + " requires " +
                      types::show(types::germ_of(elim)) + ", value carries " +
                      ev::show(evidence_of(v)));
        }
        return v;
    }

    // ---- atoms ----

    EvValue value_of(const Atom& a) {
        switch (a.k) {
        case AtomK::Local: return frame.locals[static_cast<size_t>(a.id)];
        case AtomK::Env: return (*frame.env)[static_cast<size_t>(a.id)];
        case AtomK::Int: return EvValue::of_int(a.i);
        case AtomK::Bool: return EvValue::of_bool(a.b);
        case AtomK::Unit: return EvValue::unit();
        case AtomK::Float: return make_float(a.f);
        case AtomK::VarId:
            raise(ErrKind::Internal, Span{}, "unresolved variable in lowered code");
        }
        raise(ErrKind::Internal, Span{}, "malformed atom");
    }

    // ---- DFO representation expected by a position type ----

    ev::FloatRep rep_of_hint(core::RepHint h, const types::TypePtr& payload) const {
        if (!mode.dfo || payload->kind != types::TypeKind::Float)
            return ev::FloatRep::None;
        switch (h) {
        case core::RepHint::Imm: return ev::FloatRep::Immediate;
        case core::RepHint::Boxed: return ev::FloatRep::Boxed;
        default: return ev::FloatRep::Boxed;
        }
    }

    // ---- operations ----

    EvValue eval_binop(const core::Expr& e) {
        using surface::BinTag;
        EvValue l = value_of(e.atoms[0]);
        EvValue r = value_of(e.atoms[1]);
        if (surface::is_float_bin(e.bop)) {
            double a = float_payload(l, e.span);
            double b = float_payload(r, e.span);
            switch (e.bop) {
            case BinTag::AddF: return make_float(a + b);
            case BinTag::SubF: return make_float(a - b);
            case BinTag::MulF: return make_float(a * b);
            case BinTag::DivF: return make_float(a / b);
            case BinTag::LtF: return EvValue::of_bool(a < b);
            case BinTag::LeF: return EvValue::of_bool(a <= b);
            case BinTag::GtF: return EvValue::of_bool(a > b);
            case BinTag::GeF: return EvValue::of_bool(a >= b);
            case BinTag::EqF: return EvValue::of_bool(a == b);
            case BinTag::NeF: return EvValue::of_bool(a != b);
            default: break;
            }
        }
        if (l.tag != EvValue::Tag::Int || r.tag != EvValue::Tag::Int)
            raise(ErrKind::Internal, e.span, "integer operation on non-integers");
        int64_t a = l.i, b = r.i;
        switch (e.bop) {
        case BinTag::AddI:
            return EvValue::of_int(wrap63(static_cast<int64_t>(
                static_cast<uint64_t>(a) + static_cast<uint64_t>(b))));
        case BinTag::SubI:
            return EvValue::of_int(wrap63(static_cast<int64_t>(
                static_cast<uint64_t>(a) - static_cast<uint64_t>(b))));
        case BinTag::MulI:
            return EvValue::of_int(wrap63(static_cast<int64_t>(
                static_cast<uint64_t>(a) * static_cast<uint64_t>(b))));
        case BinTag::DivI:
            if (b == 0) raise(ErrKind::DivZero, e.span, "division by zero");
            if (a == kMinInt63 && b == -1) return EvValue::of_int(kMinInt63);
            return EvValue::of_int(wrap63(a / b));
        case BinTag::ModI:
            if (b == 0) raise(ErrKind::DivZero, e.span, "modulo by zero");
            if (a == kMinInt63 && b == -1) return EvValue::of_int(0);
            return EvValue::of_int(wrap63(a % b));
        case BinTag::LtI: return EvValue::of_bool(a < b);
        case BinTag::LeI: return EvValue::of_bool(a <= b);
        case BinTag::GtI: return EvValue::of_bool(a > b);
        case BinTag::GeI: return EvValue::of_bool(a >= b);
        case BinTag::EqI: return EvValue::of_bool(a == b);
        case BinTag::NeI: return EvValue::of_bool(a != b);
        default: break;
        }
        raise(ErrKind::Internal, e.span, "malformed binary operation");
    }

    EvValue eval_prim(const core::Expr& e) {
        using surface::PrimTag;
        EvValue v = value_of(e.atoms[0]);
        switch (e.prim) {
        case PrimTag::PrintInt:
            out << v.i << "\n";
            return EvValue::unit();
        case PrimTag::PrintBool:
            out << (v.b ? "true" : "false") << "\n";
            return EvValue::unit();
        case PrimTag::PrintFloat:
            out << show_double(float_payload(v, e.span)) << "\n";
            return EvValue::unit();
        case PrimTag::Not:
            return EvValue::of_bool(!v.b);
        case PrimTag::Sqrt:
            return make_float(std::sqrt(float_payload(v, e.span)));
        case PrimTag::IntToFloat:
            return make_float(static_cast<double>(v.i));
        case PrimTag::FloatToInt: {
            double d = float_payload(v, e.span);
            if (!(d >= static_cast<double>(kMinInt63) &&
                  d <= static_cast<double>(kMaxInt63)))
                return EvValue::of_int(d < 0 ? kMinInt63 : kMaxInt63);
            return EvValue::of_int(static_cast<int64_t>(d));
        }
        }
        raise(ErrKind::Internal, e.span, "malformed primitive");
    }

    // ---- the machine ----

    EvValue run(const core::Expr* control) {
        while (true) {
            switch (control->k) {
            case K::Let: {
                Kont k;
                k.t = Kont::T::Bind;
                k.slot = control->var;
                k.next = control->e2.get();
                konts.push_back(k);
                control = control->e1.get();
                continue;
            }
            case K::If: {
                EvValue c = value_of(control->atoms[0]);
                control = c.b ? control->e1.get() : control->e2.get();
                continue;
            }
            case K::Match: {
                EvValue s = value_of(control->atoms[0]);
                if (s.tag != EvValue::Tag::Obj || s.obj->kind != ObjKind::Variant)
                    raise(ErrKind::Internal, control->span, "match on non-variant");
                const core::Arm* hit = nullptr;
                for (auto& a : control->arms)
                    if (a.ctor_id == s.obj->ctor_id) {
                        hit = &a;
                        break;
                    }
                if (!hit)
                    raise(ErrKind::Internal, control->span, "no arm for constructor");
                for (size_t i = 0; i < hit->binders.size(); ++i)
                    frame.locals[static_cast<size_t>(hit->binders[i])] =
                        s.obj->fields[i];
                control = hit->body.get();
                continue;
            }
            case K::Loop: {
                EvValue lo = value_of(control->atoms[0]);
                EvValue hi = value_of(control->atoms[1]);
                if (lo.i > hi.i) {
                    if (auto next = continue_with(EvValue::unit())) control = next;
                    else
                        return std::move(result_);
                    continue;
                }
                frame.locals[static_cast<size_t>(control->var)] = lo;
                Kont k;
                k.t = Kont::T::Loop;
                k.slot = control->var;
                k.i = lo.i;
                k.hi = hi.i;
                k.next = control->e1.get();
                konts.push_back(k);
                control = control->e1.get();
                continue;
            }
            case K::Call: {
                EvValue callee = value_of(control->atoms[0]);
                if (callee.tag != EvValue::Tag::Obj ||
                    callee.obj->kind != ObjKind::Closure)
                    raise(ErrKind::Internal, control->span, "call of non-closure");
                const core::CodeEntry& entry =
                    prog.code[static_cast<size_t>(callee.obj->code)];
                if (static_cast<size_t>(entry.n_params) != control->atoms.size() - 1)
                    raise(ErrKind::Internal, control->span, "call arity mismatch");
                enter_call(entry, callee.obj, *control, 1);
                control = entry.body.get();
                continue;
            }
            case K::DirectCall: {
                const core::CodeEntry& entry =
                    prog.code[static_cast<size_t>(control->label)];
                enter_call(entry, nullptr, *control, 0);
                control = entry.body.get();
                continue;
            }
            default: {
                EvValue v = eval_rhs(*control);
                if (auto next = continue_with(std::move(v))) control = next;
                else
                    return std::move(result_);
                continue;
            }
            }
        }
    }

    void enter_call(const core::CodeEntry& entry, Handle self, const core::Expr& call,
                    size_t first_arg) {
        if (frame_stack.size() >= limits.max_frames)
            raise(ErrKind::StackOverflow, call.span, "call depth limit exceeded");
        Frame f;
        f.locals = take_locals(static_cast<size_t>(entry.n_locals));
        for (size_t i = first_arg; i < call.atoms.size(); ++i)
            f.locals[i - first_arg] = value_of(call.atoms[i]);
        f.env = self ? self->block : nullptr;
        f.self = std::move(self);
        Kont k;
        k.t = Kont::T::Return;
        k.call_rtype = call.call_rtype.get();
        konts.push_back(k);
        frame_stack.push_back(std::move(frame));
        frame = std::move(f);
    }

    EvValue result_;

    // Feeds a value to the continuation stack; returns the next control
    // expression, or null when the machine is done (value left in result_).
    const core::Expr* continue_with(EvValue v) {
        while (!konts.empty()) {
            Kont& top = konts.back();
            switch (top.t) {
            case Kont::T::Bind: {
                frame.locals[static_cast<size_t>(top.slot)] = std::move(v);
                const core::Expr* next = top.next;
                konts.pop_back();
                return next;
            }
            case Kont::T::Loop: {
                if (top.i < top.hi) {
                    top.i++;
                    frame.locals[static_cast<size_t>(top.slot)] =
                        EvValue::of_int(top.i);
                    return top.next;
                }
                v = EvValue::unit();
                konts.pop_back();
                continue;
            }
            case Kont::T::Return: {
                recycle_locals(std::move(frame.locals));
                frame = std::move(frame_stack.back());
                frame_stack.pop_back();
                if (mode.dfo && top.call_rtype) {
                    bool expect_imm =
                        top.call_rtype->kind == types::TypeKind::Float;
                    if (expect_imm && v.tag == EvValue::Tag::Obj &&
                        v.obj->kind == ObjKind::Float)
                        v = EvValue::of_float_imm(v.obj->fval);
                    else if (!expect_imm && v.tag == EvValue::Tag::Float)
                        v = box_float(v.f);
                }
                konts.pop_back();
                continue;
            }
            }
        }
        result_ = std::move(v);
        return nullptr;
    }

    EvValue eval_rhs(const core::Expr& e) {
        switch (e.k) {
        case K::Atom:
            return value_of(e.atoms[0]);
        case K::Ascribe:
            return ascribe_value(value_of(e.atoms[0]), e.evd, e.span, e.germ);
        case K::CheckGerm:
            return check_germ(value_of(e.atoms[0]), *e.germ, e.span);
        case K::CastFail: {
            value_of(e.atoms[0]);
            ctr.cast_errors++;
            raise(ErrKind::Cast, e.span,
                  "ascription: " + ev::show(e.evd) + " is inconsistent with " +
                      ev::show(e.evd2));
        }
        case K::DynAscribe: {
            EvValue subject = value_of(e.atoms[0]);
            ev::Evidence evd = resolve_dyn(e);
            return ascribe_value(std::move(subject), evd, e.span);
        }
        case K::BinOp:
            return eval_binop(e);
        case K::PrimOp:
            return eval_prim(e);
        case K::MakeRef: {
            EvValue v = value_of(e.atoms[0]);
            HeapObject o;
            o.kind = ObjKind::Ref;
            o.evd = ev::make(types::t_ref(payload_of(v)));
            o.block = std::make_shared<std::vector<EvValue>>(1, std::move(v));
            return EvValue::of_obj(alloc(std::move(o)));
        }
        case K::Deref: {
            EvValue r = value_of(e.atoms[0]);
            require_obj(r, ObjKind::Ref, e.span, "dereference");
            return (*r.obj->block)[0];
        }
        case K::Assign: {
            EvValue r = value_of(e.atoms[0]);
            require_obj(r, ObjKind::Ref, e.span, "assignment");
            (*r.obj->block)[0] = value_of(e.atoms[1]);
            return EvValue::unit();
        }
        case K::MakeVec: {
            EvValue n = value_of(e.atoms[0]);
            if (n.i < 0) raise(ErrKind::OutOfBounds, e.span, "negative vector size");
            EvValue init = value_of(e.atoms[1]);
            HeapObject o;
            o.kind = ObjKind::Vec;
            o.evd = ev::make(types::t_vec(payload_of(init)));
            o.block = std::make_shared<std::vector<EvValue>>(
                static_cast<size_t>(n.i), init);
            return EvValue::of_obj(alloc(std::move(o)));
        }
        case K::VecGet: {
            EvValue v = value_of(e.atoms[0]);
            require_obj(v, ObjKind::Vec, e.span, "vector access");
            EvValue i = value_of(e.atoms[1]);
            if (i.i < 0 || static_cast<size_t>(i.i) >= v.obj->block->size())
                raise(ErrKind::OutOfBounds, e.span,
                      "index " + std::to_string(i.i) + " out of bounds for length " +
                          std::to_string(v.obj->block->size()));
            return (*v.obj->block)[static_cast<size_t>(i.i)];
        }
        case K::VecSet: {
            EvValue v = value_of(e.atoms[0]);
            require_obj(v, ObjKind::Vec, e.span, "vector update");
            EvValue i = value_of(e.atoms[1]);
            if (i.i < 0 || static_cast<size_t>(i.i) >= v.obj->block->size())
                raise(ErrKind::OutOfBounds, e.span,
                      "index " + std::to_string(i.i) + " out of bounds for length " +
                          std::to_string(v.obj->block->size()));
            (*v.obj->block)[static_cast<size_t>(i.i)] = value_of(e.atoms[2]);
            return EvValue::unit();
        }
        case K::MakeTuple: {
            HeapObject o;
            o.kind = ObjKind::Tuple;
            auto block = std::make_shared<std::vector<EvValue>>();
            std::vector<types::TypePtr> parts;
            for (auto& a : e.atoms) {
                block->push_back(value_of(a));
                parts.push_back(payload_of(block->back()));
            }
            o.evd = ev::make(types::t_tuple(std::move(parts)));
            o.block = std::move(block);
            return EvValue::of_obj(alloc(std::move(o)));
        }
        case K::TupleProj: {
            EvValue v = value_of(e.atoms[0]);
            require_obj(v, ObjKind::Tuple, e.span, "tuple projection");
            if (static_cast<size_t>(e.proj_index) >= v.obj->block->size())
                raise(ErrKind::OutOfBounds, e.span, "tuple projection out of range");
            return (*v.obj->block)[static_cast<size_t>(e.proj_index)];
        }
        case K::Construct: {
            HeapObject o;
            o.kind = ObjKind::Variant;
            o.ctor_id = e.ctor_id;
            const auto& ctor = prog.venv.ctor(e.ctor_id);
            o.evd = ev::make(types::t_named(prog.venv.variant(ctor.type_id).name));
            for (auto& a : e.atoms) o.fields.push_back(value_of(a));
            return EvValue::of_obj(alloc(std::move(o)));
        }
        case K::MakeClosure: {
            HeapObject o;
            o.kind = ObjKind::Closure;
            o.evd = e.evd;
            o.code = e.label;
            o.block = std::make_shared<std::vector<EvValue>>();
            for (auto& a : e.atoms) o.block->push_back(value_of(a));
            Handle h = alloc(std::move(o));
            if (e.self_capture >= 0)
                (*h->block)[static_cast<size_t>(e.self_capture)] = EvValue::of_obj(h);
            return EvValue::of_obj(h);
        }
        default:
            raise(ErrKind::Internal, e.span, "unexpected node in evaluation");
        }
    }

    void require_obj(const EvValue& v, ObjKind k, Span sp, const char* what) const {
        if (v.tag != EvValue::Tag::Obj || v.obj->kind != k)
            raise(ErrKind::Internal, sp, std::string(what) + " on malformed value");
    }

    ev::Evidence resolve_dyn(const core::Expr& e) {
        switch (e.dsrc) {
        case core::DynSrcK::Dom: {
            EvValue c = value_of(e.dsrc_atom);
            require_obj(c, ObjKind::Closure, e.span, "domain evidence");
            const core::CodeEntry& entry = prog.code[static_cast<size_t>(c.obj->code)];
            ev::FloatRep slot = core::slot_rep(
                entry.fun_type->parts[static_cast<size_t>(e.dsrc_idx)], mode.dfo);
            return ev::dom(c.obj->evd, e.dsrc_idx, slot);
        }
        case core::DynSrcK::CodSelf: {
            if (!frame.self)
                raise(ErrKind::Internal, e.span, "cod(self) outside a closure");
            const core::CodeEntry& entry =
                prog.code[static_cast<size_t>(frame.self->code)];
            ev::FloatRep slot = core::slot_rep(entry.fun_type->ret, mode.dfo);
            return ev::cod(frame.self->evd, slot);
        }
        case core::DynSrcK::RefContent: {
            EvValue r = value_of(e.dsrc_atom);
            require_obj(r, ObjKind::Ref, e.span, "content evidence");
            ev::Evidence c = ev::content(r.obj->evd, ev::ContentKind::Ref);
            c.rep = rep_of_hint(e.rep, c.payload);
            return c;
        }
        case core::DynSrcK::VecElem: {
            EvValue r = value_of(e.dsrc_atom);
            require_obj(r, ObjKind::Vec, e.span, "content evidence");
            ev::Evidence c = ev::content(r.obj->evd, ev::ContentKind::Vec);
            c.rep = rep_of_hint(e.rep, c.payload);
            return c;
        }
        case core::DynSrcK::TupleComp: {
            EvValue r = value_of(e.dsrc_atom);
            require_obj(r, ObjKind::Tuple, e.span, "content evidence");
            ev::Evidence c =
                ev::content(r.obj->evd, ev::ContentKind::TupleProj, e.dsrc_idx);
            c.rep = rep_of_hint(e.rep, c.payload);
            return c;
        }
        }
        raise(ErrKind::Internal, e.span, "malformed dynamic ascription");
    }
};

} // namespace

std::string show_value(const EvValue& v) {
    switch (v.tag) {
    case EvValue::Tag::Int: return std::to_string(v.i);
    case EvValue::Tag::Bool: return v.b ? "true" : "false";
    case EvValue::Tag::Unit: return "()";
    case EvValue::Tag::Float: return show_double(v.f);
    case EvValue::Tag::Obj:
        switch (v.obj->kind) {
        case ObjKind::Float: return show_double(v.obj->fval);
        case ObjKind::Ref: return "<ref>";
        case ObjKind::Vec: return "<vector:" + std::to_string(v.obj->block->size()) + ">";
        case ObjKind::Tuple: {
            std::string s = "(";
            for (size_t i = 0; i < v.obj->block->size(); ++i) {
                if (i) s += ", ";
                s += show_value((*v.obj->block)[i]);
            }
            return s + ")";
        }
        case ObjKind::Variant: return "<variant:" + std::to_string(v.obj->ctor_id) + ">";
        case ObjKind::Closure: return "<closure>";
        }
    }
    return "?";
}

RunResult run_program(const core::Program& p, Mode mode, Limits limits,
                      std::ostream& out) {
    Machine m(p, mode, limits, out);
    m.frame.locals.resize(static_cast<size_t>(p.main_locals));
    RunResult res;
    try {
        EvValue v = m.run(p.main.get());
        res.outcome = Outcome::Value;
        res.value = std::move(v);
    } catch (const VmError& e) {
        res.error = RunError{e.kind, e.span, e.detail};
        switch (e.kind) {
        case ErrKind::Cast: res.outcome = Outcome::CastError; break;
        case ErrKind::Germ: res.outcome = Outcome::GermError; break;
        default: res.outcome = Outcome::OtherError; break;
        }
    }
    res.counters = m.ctr;
    if (mode.typing == checker::Typing::Static && res.outcome == Outcome::Value) {
        // a fully static program performs no runtime gradual-typing work
        assert(res.counters.trans_ops == 0 && res.counters.germ_checks == 0 &&
               res.counters.proxy_allocs == 0);
    }
    return res;
}

} // namespace gtlc::vm
