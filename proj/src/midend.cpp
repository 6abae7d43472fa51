#include "midend.hpp"

#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace gtlc::midend {

using core::Atom;
using core::AtomK;
using core::ExprPtr;
using core::K;
using types::TypePtr;

// ---- alpha renaming ----

namespace {

struct Renamer {
    int32_t next = 0;
    std::vector<std::pair<std::string, int32_t>> scope;

    int32_t bind(const std::string& name) {
        int32_t id = next++;
        scope.emplace_back(name, id);
        return id;
    }
    void pop(size_t n) { scope.resize(scope.size() - n); }
    int32_t resolve(const std::string& name, Span sp) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name) return it->second;
        throw CompileError(CompileError::Kind::Type, sp, "unbound variable: " + name);
    }

    void run(const elab::ExprPtr& e) {
        switch (e->k) {
        case elab::K::Var:
            e->var_id = resolve(e->name, e->span);
            return;
        case elab::K::Lambda: {
            for (auto& p : e->params) p.id = bind(p.name);
            run(e->kids[0]);
            pop(e->params.size());
            return;
        }
        case elab::K::Let: {
            run(e->kids[0]);
            e->var_id = bind(e->name);
            run(e->kids[1]);
            pop(1);
            return;
        }
        case elab::K::LetRec: {
            e->var_id = bind(e->name);
            run(e->kids[0]);
            run(e->kids[1]);
            pop(1);
            return;
        }
        case elab::K::Loop: {
            run(e->kids[0]);
            run(e->kids[1]);
            e->var_id = bind(e->name);
            run(e->kids[2]);
            pop(1);
            return;
        }
        case elab::K::Match: {
            run(e->kids[0]);
            for (auto& a : e->arms) {
                for (auto& b : a.binders) b.id = bind(b.name);
                run(a.body);
                pop(a.binders.size());
            }
            return;
        }
        default:
            for (auto& k : e->kids) run(k);
            return;
        }
    }
};

} // namespace

void alpha_rename(elab::Program& p) {
    Renamer r;
    r.run(p.main);
}

// ---- ANF conversion ----

namespace {

struct AnfCtx {
    int32_t next_var;
    bool dfo;

    int32_t fresh() { return next_var++; }

    using Bind = std::pair<int32_t, ExprPtr>;

    ExprPtr fold(std::vector<Bind> binds, ExprPtr tail) {
        for (auto it = binds.rbegin(); it != binds.rend(); ++it) {
            auto let = core::mk(K::Let, tail->span);
            let->var = it->first;
            let->rec = it->second->rec;
            it->second->rec = false;
            let->e1 = it->second;
            let->e2 = tail;
            let->stype = tail->stype;
            tail = let;
        }
        return tail;
    }

    ExprPtr tail_of(const elab::ExprPtr& e) {
        std::vector<Bind> binds;
        ExprPtr last = rhs_of(e, binds);
        return fold(std::move(binds), std::move(last));
    }

    Atom atom_of(const elab::ExprPtr& e, std::vector<Bind>& binds) {
        ExprPtr r = rhs_of(e, binds);
        if (r->k == K::Atom) return r->atoms[0];
        int32_t v = fresh();
        r->rec = false;
        binds.emplace_back(v, r);
        return core::atom_var(v, r->stype);
    }

    // Construction evidence on a base literal is the literal itself unless a
    // representation change is implied (a boxed float position under DFO).
    bool foldable_literal_wrap(const elab::ExprPtr& asc) {
        const elab::ExprPtr& sub = asc->kids[0];
        if (sub->k != elab::K::Int && sub->k != elab::K::Float &&
            sub->k != elab::K::Bool)
            return false;
        if (!types::type_equal(asc->evd.payload, sub->type)) return false;
        if (dfo && sub->k == elab::K::Float &&
            asc->evd.rep == ev::FloatRep::Boxed)
            return false;
        return true;
    }

    ExprPtr rhs_of(const elab::ExprPtr& e, std::vector<Bind>& binds) {
        switch (e->k) {
        case elab::K::Int: {
            auto r = core::mk(K::Atom, e->span);
            r->atoms = {core::atom_int(e->ival)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Float: {
            auto r = core::mk(K::Atom, e->span);
            r->atoms = {core::atom_float(e->fval)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Bool: {
            auto r = core::mk(K::Atom, e->span);
            r->atoms = {core::atom_bool(e->bval)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Unit: {
            auto r = core::mk(K::Atom, e->span);
            r->atoms = {core::atom_unit()};
            r->stype = e->type;
            return r;
        }
        case elab::K::Var: {
            auto r = core::mk(K::Atom, e->span);
            r->atoms = {core::atom_var(e->var_id, e->type)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Lambda: {
            // unwrapped lambda: construction evidence is its own type
            auto r = lambda_rhs(e, ev::make(e->type, ev::FloatRep::None), binds);
            return r;
        }
        case elab::K::Ascribe: {
            const elab::ExprPtr& sub = e->kids[0];
            if (e->value_wrap) {
                if (foldable_literal_wrap(e)) return rhs_of(sub, binds);
                if (sub->k == elab::K::Lambda) return lambda_rhs(sub, e->evd, binds);
                if (sub->k == elab::K::Construct) return rhs_of(sub, binds);
            }
            Atom a = atom_of(sub, binds);
            auto r = core::mk(K::Ascribe, e->span);
            r->atoms = {a};
            r->evd = e->evd;
            r->target = e->target;
            r->germ = e->germ;
            r->stype = e->type;
            return r;
        }
        case elab::K::CastFail: {
            Atom a = atom_of(e->kids[0], binds);
            auto r = core::mk(K::CastFail, e->span);
            r->atoms = {a};
            r->evd = e->evd;
            r->evd2 = e->evd2;
            r->stype = e->type;
            return r;
        }
        case elab::K::Call: {
            auto r = core::mk(K::Call, e->span);
            for (auto& k : e->kids) r->atoms.push_back(atom_of(k, binds));
            r->stype = e->type;
            r->call_rtype = e->type;
            return r;
        }
        case elab::K::BinOp: {
            auto r = core::mk(K::BinOp, e->span);
            r->bop = e->bop;
            r->atoms = {atom_of(e->kids[0], binds), atom_of(e->kids[1], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::PrimOp: {
            auto r = core::mk(K::PrimOp, e->span);
            r->prim = e->prim;
            r->atoms = {atom_of(e->kids[0], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::If: {
            Atom c = atom_of(e->kids[0], binds);
            auto r = core::mk(K::If, e->span);
            r->atoms = {c};
            r->e1 = tail_of(e->kids[1]);
            r->e2 = tail_of(e->kids[2]);
            r->stype = e->type;
            return r;
        }
        case elab::K::Loop: {
            Atom lo = atom_of(e->kids[0], binds);
            Atom hi = atom_of(e->kids[1], binds);
            auto r = core::mk(K::Loop, e->span);
            r->var = e->var_id;
            r->atoms = {lo, hi};
            r->e1 = tail_of(e->kids[2]);
            r->stype = e->type;
            return r;
        }
        case elab::K::Let: {
            ExprPtr rhs = rhs_of(e->kids[0], binds);
            rhs->rec = false;
            binds.emplace_back(e->var_id, rhs);
            return rhs_of(e->kids[1], binds);
        }
        case elab::K::LetRec: {
            std::vector<Bind> inner;
            ExprPtr rhs = rhs_of(e->kids[0], inner);
            // bindings hoisted out of a recursive rhs stay in order
            for (auto& b : inner) binds.push_back(b);
            rhs->rec = true;
            binds.emplace_back(e->var_id, rhs);
            return rhs_of(e->kids[1], binds);
        }
        case elab::K::Seq: {
            ExprPtr first = rhs_of(e->kids[0], binds);
            first->rec = false;
            binds.emplace_back(fresh(), first);
            return rhs_of(e->kids[1], binds);
        }
        case elab::K::MakeRef: {
            auto r = core::mk(K::MakeRef, e->span);
            r->atoms = {atom_of(e->kids[0], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Deref: {
            auto r = core::mk(K::Deref, e->span);
            r->atoms = {atom_of(e->kids[0], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Assign: {
            auto r = core::mk(K::Assign, e->span);
            r->atoms = {atom_of(e->kids[0], binds), atom_of(e->kids[1], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::MakeVec: {
            auto r = core::mk(K::MakeVec, e->span);
            r->atoms = {atom_of(e->kids[0], binds), atom_of(e->kids[1], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::VecGet: {
            auto r = core::mk(K::VecGet, e->span);
            r->atoms = {atom_of(e->kids[0], binds), atom_of(e->kids[1], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::VecSet: {
            auto r = core::mk(K::VecSet, e->span);
            r->atoms = {atom_of(e->kids[0], binds), atom_of(e->kids[1], binds),
                        atom_of(e->kids[2], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Tuple: {
            auto r = core::mk(K::MakeTuple, e->span);
            for (auto& k : e->kids) r->atoms.push_back(atom_of(k, binds));
            r->stype = e->type;
            return r;
        }
        case elab::K::Proj: {
            auto r = core::mk(K::TupleProj, e->span);
            r->proj_index = e->proj_index;
            r->atoms = {atom_of(e->kids[0], binds)};
            r->stype = e->type;
            return r;
        }
        case elab::K::Construct: {
            auto r = core::mk(K::Construct, e->span);
            r->ctor_id = e->ctor_id;
            for (auto& k : e->kids) r->atoms.push_back(atom_of(k, binds));
            r->stype = e->type;
            return r;
        }
        case elab::K::Match: {
            Atom s = atom_of(e->kids[0], binds);
            auto r = core::mk(K::Match, e->span);
            r->atoms = {s};
            for (auto& a : e->arms) {
                core::Arm arm;
                arm.ctor_id = a.ctor_id;
                for (auto& b : a.binders) arm.binders.push_back(b.id);
                arm.body = tail_of(a.body);
                r->arms.push_back(std::move(arm));
            }
            r->stype = e->type;
            return r;
        }
        }
        throw std::logic_error("anf: unhandled node");
    }

    ExprPtr lambda_rhs(const elab::ExprPtr& lam, const ev::Evidence& birth,
                       std::vector<Bind>&) {
        auto r = core::mk(K::Lambda, lam->span);
        for (auto& p : lam->params) r->lam_params.push_back({p.id, p.type});
        r->e1 = tail_of(lam->kids[0]);
        r->fun_type = lam->type;
        r->evd = birth;
        r->stype = lam->type;
        return r;
    }
};

int32_t max_var_id(const elab::ExprPtr& e) {
    int32_t m = e->var_id;
    for (auto& p : e->params) m = std::max(m, p.id);
    for (auto& k : e->kids) m = std::max(m, max_var_id(k));
    for (auto& a : e->arms) {
        for (auto& b : a.binders) m = std::max(m, b.id);
        m = std::max(m, max_var_id(a.body));
    }
    return m;
}

} // namespace

CoreStage to_anf(const elab::Program& p, bool dfo) {
    CoreStage s;
    s.venv = p.venv;
    s.dfo = dfo;
    AnfCtx ctx{max_var_id(p.main) + 1, dfo};
    s.main = ctx.tail_of(p.main);
    s.next_var = ctx.next_var;
    return s;
}

// ---- dynamic elaboration ----

namespace {

struct DynCtx {
    int32_t& next_var;
    bool dfo;

    int32_t fresh() { return next_var++; }

    // static type of the value stored at a structure position, given the
    // structure atom's static type
    TypePtr content_pos_type(const TypePtr& s, core::DynSrcK k, int idx) {
        if (types::is_unknown(s)) return types::t_unknown();
        switch (k) {
        case core::DynSrcK::RefContent:
        case core::DynSrcK::VecElem:
            return s->elem;
        case core::DynSrcK::TupleComp:
            return s->parts[static_cast<size_t>(idx)];
        default:
            return types::t_unknown();
        }
    }

    ExprPtr dyn(Atom subject, core::DynSrcK k, Atom src, int idx, TypePtr pos,
                core::RepHint rep, Span sp) {
        auto d = core::mk(K::DynAscribe, sp);
        d->atoms = {subject};
        d->dsrc = k;
        d->dsrc_atom = src;
        d->dsrc_idx = idx;
        d->pos_stype = std::move(pos);
        d->rep = rep;
        d->stype = subject.stype;
        return d;
    }

    core::RepHint read_rep(const TypePtr& pos) {
        if (!dfo) return core::RepHint::None;
        return pos->kind == types::TypeKind::Float ? core::RepHint::Imm
                                                   : core::RepHint::Boxed;
    }
    core::RepHint write_rep() { return dfo ? core::RepHint::Boxed : core::RepHint::None; }

    // rewrites one rhs, emitting extra bindings before/after
    ExprPtr rewrite_rhs(ExprPtr r, std::vector<AnfCtx::Bind>& pre,
                        std::vector<AnfCtx::Bind>& post, const TypePtr& ret_type) {
        switch (r->k) {
        case K::Call: {
            Atom callee = r->atoms[0];
            TypePtr ctype = callee.stype;
            for (size_t i = 1; i < r->atoms.size(); ++i) {
                TypePtr pos = types::t_unknown();
                if (ctype->kind == types::TypeKind::Fun) pos = ctype->parts[i - 1];
                int32_t v = fresh();
                pre.emplace_back(v, dyn(r->atoms[i], core::DynSrcK::Dom, callee,
                                        static_cast<int>(i - 1), pos,
                                        core::RepHint::FromSlot, r->span));
                r->atoms[i] = core::atom_var(v, r->atoms[i].stype);
            }
            return r;
        }
        case K::Deref: {
            TypePtr pos = content_pos_type(r->atoms[0].stype, core::DynSrcK::RefContent, 0);
            int32_t v = fresh();
            Atom ra = r->atoms[0];
            TypePtr st = r->stype;
            post.emplace_back(v, r);
            return dyn(core::atom_var(v, st), core::DynSrcK::RefContent, ra, 0, pos,
                       read_rep(pos), r->span);
        }
        case K::Assign: {
            TypePtr pos = content_pos_type(r->atoms[0].stype, core::DynSrcK::RefContent, 0);
            int32_t v = fresh();
            pre.emplace_back(v, dyn(r->atoms[1], core::DynSrcK::RefContent, r->atoms[0],
                                    0, pos, write_rep(), r->span));
            r->atoms[1] = core::atom_var(v, r->atoms[1].stype);
            return r;
        }
        case K::VecGet: {
            TypePtr pos = content_pos_type(r->atoms[0].stype, core::DynSrcK::VecElem, 0);
            int32_t v = fresh();
            Atom va = r->atoms[0];
            TypePtr st = r->stype;
            post.emplace_back(v, r);
            return dyn(core::atom_var(v, st), core::DynSrcK::VecElem, va, 0, pos,
                       read_rep(pos), r->span);
        }
        case K::VecSet: {
            TypePtr pos = content_pos_type(r->atoms[0].stype, core::DynSrcK::VecElem, 0);
            int32_t v = fresh();
            pre.emplace_back(v, dyn(r->atoms[2], core::DynSrcK::VecElem, r->atoms[0], 0,
                                    pos, write_rep(), r->span));
            r->atoms[2] = core::atom_var(v, r->atoms[2].stype);
            return r;
        }
        case K::TupleProj: {
            TypePtr pos = types::t_unknown();
            const TypePtr& st = r->atoms[0].stype;
            if (st->kind == types::TypeKind::Tuple &&
                static_cast<size_t>(r->proj_index) < st->parts.size())
                pos = st->parts[static_cast<size_t>(r->proj_index)];
            int32_t v = fresh();
            Atom ta = r->atoms[0];
            TypePtr rt = r->stype;
            int idx = r->proj_index;
            post.emplace_back(v, r);
            return dyn(core::atom_var(v, rt), core::DynSrcK::TupleComp, ta, idx, pos,
                       read_rep(pos), r->span);
        }
        case K::If:
            r->e1 = rewrite_tail(r->e1, ret_type, false);
            r->e2 = rewrite_tail(r->e2, ret_type, false);
            return r;
        case K::Loop:
            r->e1 = rewrite_tail(r->e1, nullptr, false);
            return r;
        case K::Match:
            for (auto& a : r->arms) a.body = rewrite_tail(a.body, ret_type, false);
            return r;
        case K::Lambda:
            r->e1 = rewrite_tail(r->e1, r->fun_type->ret, true);
            return r;
        default:
            return r;
        }
    }

    ExprPtr with_binds(std::vector<AnfCtx::Bind>& pre, std::vector<AnfCtx::Bind>& post,
                       ExprPtr tail) {
        ExprPtr out = std::move(tail);
        for (auto it = post.rbegin(); it != post.rend(); ++it) {
            auto l2 = core::mk(K::Let, out->span);
            l2->var = it->first;
            l2->e1 = it->second;
            l2->e2 = out;
            l2->stype = out->stype;
            out = l2;
        }
        for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
            auto l2 = core::mk(K::Let, out->span);
            l2->var = it->first;
            l2->e1 = it->second;
            l2->e2 = out;
            l2->stype = out->stype;
            out = l2;
        }
        return out;
    }

    // Rewrites a tail expression; when `wrap_result` is set the tail value is
    // ascribed to cod(self) before returning.
    ExprPtr rewrite_tail(ExprPtr e, const TypePtr& ret_type, bool wrap_result) {
        if (e->k == K::Let) {
            std::vector<AnfCtx::Bind> pre, post;
            ExprPtr rhs = rewrite_rhs(e->e1, pre, post, ret_type);
            ExprPtr body = rewrite_tail(e->e2, ret_type, wrap_result);
            auto let = core::mk(K::Let, e->span);
            let->var = e->var;
            let->rec = e->rec;
            let->e1 = rhs;
            let->e2 = body;
            let->stype = body->stype;
            return with_binds(pre, post, let);
        }
        // control in tail position: push the result ascription into branches
        if (wrap_result && e->k == K::If) {
            e->e1 = rewrite_tail(e->e1, ret_type, true);
            e->e2 = rewrite_tail(e->e2, ret_type, true);
            return e;
        }
        if (wrap_result && e->k == K::Match) {
            for (auto& a : e->arms) a.body = rewrite_tail(a.body, ret_type, true);
            return e;
        }

        std::vector<AnfCtx::Bind> pre, post;
        ExprPtr rhs = rewrite_rhs(e, pre, post, ret_type);
        ExprPtr tail = rhs;
        if (wrap_result) {
            int32_t v = fresh();
            TypePtr st = rhs->stype;
            post.emplace_back(v, rhs);
            tail = dyn(core::atom_var(v, st), core::DynSrcK::CodSelf, Atom{}, 0,
                       ret_type ? ret_type : types::t_unknown(),
                       core::RepHint::FromSlot, e->span);
        }
        return with_binds(pre, post, tail);
    }
};

} // namespace

void elaborate_dynamic(CoreStage& s) {
    DynCtx ctx{s.next_var, s.dfo};
    s.main = ctx.rewrite_tail(s.main, nullptr, false);
}

// ---- germ specialization ----

namespace {

template <typename F>
void walk_exprs(const ExprPtr& e, F&& f) {
    if (!e) return;
    f(e);
    walk_exprs(e->e1, f);
    walk_exprs(e->e2, f);
    for (auto& a : e->arms) walk_exprs(a.body, f);
}

} // namespace

void specialize_germs(CoreStage& s) {
    walk_exprs(s.main, [&](const ExprPtr& e) {
        if (e->k != K::Ascribe) return;
        const TypePtr& t = e->target ? e->target : e->evd.payload;
        if (!types::is_unknown(e->atoms[0].stype)) return;
        auto g = types::as_germ(t);
        if (!g) return;
        e->k = K::CheckGerm;
        e->germ = *g;
    });
}

// ---- pruning unnecessary dynamic ascriptions ----

namespace {

bool prunable(const ExprPtr& d, bool dfo) {
    if (!d->pos_stype || !types::fully_precise(d->pos_stype)) return false;
    if (dfo && d->pos_stype->kind == types::TypeKind::Float) return false;
    return true;
}

ExprPtr prune_expr(ExprPtr e, bool dfo);

void prune_children(const ExprPtr& e, bool dfo) {
    if (e->e1) e->e1 = prune_expr(e->e1, dfo);
    if (e->e2) e->e2 = prune_expr(e->e2, dfo);
    for (auto& a : e->arms) a.body = prune_expr(a.body, dfo);
}

ExprPtr prune_expr(ExprPtr e, bool dfo) {
    if (e->k == K::Let && e->e1->k == K::DynAscribe && prunable(e->e1, dfo)) {
        // replace the binding with a plain alias of the subject atom
        auto alias = core::mk(K::Atom, e->e1->span);
        alias->atoms = {e->e1->atoms[0]};
        alias->stype = e->e1->stype;
        e->e1 = alias;
        prune_children(e, dfo);
        return e;
    }
    if (e->k == K::DynAscribe && prunable(e, dfo)) {
        auto alias = core::mk(K::Atom, e->span);
        alias->atoms = {e->atoms[0]};
        alias->stype = e->stype;
        return alias;
    }
    prune_children(e, dfo);
    return e;
}

} // namespace

void prune_dynamic_ascriptions(CoreStage& s) {
    s.main = prune_expr(s.main, s.dfo);
}

} // namespace gtlc::midend
