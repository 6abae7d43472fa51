#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

#include "midend.hpp"

namespace gtlc::midend {

using core::Atom;
using core::AtomK;
using core::ExprPtr;
using core::K;
using types::TypePtr;

namespace {

template <typename F>
void walk(const ExprPtr& e, F&& f) {
    if (!e) return;
    f(e);
    walk(e->e1, f);
    walk(e->e2, f);
    for (auto& a : e->arms) walk(a.body, f);
}

struct Candidate {
    ExprPtr lambda;
    bool escapes = false;
};

// Free variables of an expression, treating calls (and evidence reads) of
// functions in `direct` as label references rather than uses.
void free_vars(const ExprPtr& e, const std::set<int32_t>& direct,
               std::set<int32_t>& bound, std::set<int32_t>& out) {
    if (!e) return;
    auto use = [&](const Atom& a) {
        if (a.k == AtomK::VarId && !bound.count(a.id) && !direct.count(a.id))
            out.insert(a.id);
    };
    switch (e->k) {
    case K::Call: {
        const Atom& callee = e->atoms[0];
        bool direct_callee = callee.k == AtomK::VarId && direct.count(callee.id);
        if (!direct_callee) use(callee);
        for (size_t i = 1; i < e->atoms.size(); ++i) use(e->atoms[i]);
        break;
    }
    case K::DynAscribe:
        use(e->atoms[0]);
        if (e->dsrc_atom.k == AtomK::VarId && !direct.count(e->dsrc_atom.id))
            use(e->dsrc_atom);
        break;
    case K::Lambda: {
        std::set<int32_t> inner = bound;
        for (auto& p : e->lam_params) inner.insert(p.id);
        free_vars(e->e1, direct, inner, out);
        return;
    }
    case K::Let: {
        std::set<int32_t> inner = bound;
        inner.insert(e->var);
        free_vars(e->e1, direct, e->rec ? inner : bound, out);
        free_vars(e->e2, direct, inner, out);
        return;
    }
    case K::Loop: {
        for (auto& a : e->atoms) use(a);
        std::set<int32_t> inner = bound;
        inner.insert(e->var);
        free_vars(e->e1, direct, inner, out);
        return;
    }
    case K::Match: {
        use(e->atoms[0]);
        for (auto& a : e->arms) {
            std::set<int32_t> inner = bound;
            for (auto b : a.binders) inner.insert(b);
            free_vars(a.body, direct, inner, out);
        }
        return;
    }
    default:
        for (auto& a : e->atoms) use(a);
        break;
    }
    free_vars(e->e1, direct, bound, out);
    free_vars(e->e2, direct, bound, out);
    for (auto& a : e->arms) free_vars(a.body, direct, bound, out);
}

struct Converter {
    CoreStage& stage;
    core::Program prog;
    std::map<int32_t, Candidate> candidates; // letrec var -> lambda
    std::set<int32_t> direct;                // letrec vars converted to labels
    std::map<int32_t, int32_t> direct_label;
    int32_t anon_counter = 0;

    // ---- direct-call analysis ----

    void analyze(bool allow_direct) {
        walk(stage.main, [&](const ExprPtr& e) {
            if (e->k == K::Let && e->rec && e->e1->k == K::Lambda)
                candidates[e->var] = Candidate{e->e1, false};
        });
        if (!allow_direct || candidates.empty()) return;

        // any use outside a call position (or evidence read) is an escape
        walk(stage.main, [&](const ExprPtr& e) {
            auto escape = [&](const Atom& a) {
                if (a.k == AtomK::VarId) {
                    auto it = candidates.find(a.id);
                    if (it != candidates.end()) it->second.escapes = true;
                }
            };
            switch (e->k) {
            case K::Call: {
                const Atom& callee = e->atoms[0];
                if (callee.k == AtomK::VarId) {
                    auto it = candidates.find(callee.id);
                    if (it != candidates.end() &&
                        e->atoms.size() - 1 != it->second.lambda->lam_params.size())
                        it->second.escapes = true;
                }
                for (size_t i = 1; i < e->atoms.size(); ++i) escape(e->atoms[i]);
                break;
            }
            case K::DynAscribe:
                escape(e->atoms[0]);
                break;
            default:
                for (auto& a : e->atoms) escape(a);
                break;
            }
        });

        for (auto& [var, c] : candidates)
            if (!c.escapes) direct.insert(var);

        // keep only functions that are closed apart from self and other
        // direct functions
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = direct.begin(); it != direct.end();) {
                const Candidate& c = candidates[*it];
                std::set<int32_t> bound{*it};
                for (auto& p : c.lambda->lam_params) bound.insert(p.id);
                std::set<int32_t> fv;
                free_vars(c.lambda->e1, direct, bound, fv);
                if (!fv.empty()) {
                    it = direct.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
    }

    // ---- per-function frames ----

    struct Frame {
        std::map<int32_t, int32_t> local;    // var id -> local slot
        std::vector<int32_t> captures;       // var ids, env order
        std::map<int32_t, int32_t> cap_slot; // var id -> env slot
        int32_t next_local = 0;
        bool in_direct = false;
        ev::Evidence birth;     // the enclosing lambda's construction evidence
        TypePtr written_type;   // the enclosing lambda's own type
        bool saw_codself = false;

        int32_t bind_local(int32_t var) {
            auto [it, fresh] = local.emplace(var, next_local);
            if (fresh) next_local++;
            return it->second;
        }
    };

    Atom resolve(const Atom& a, Frame& f) {
        if (a.k != AtomK::VarId) return a;
        auto it = f.local.find(a.id);
        Atom r = a;
        if (it != f.local.end()) {
            r.k = AtomK::Local;
            r.id = it->second;
            return r;
        }
        auto [cit, fresh] = f.cap_slot.emplace(a.id, static_cast<int32_t>(f.captures.size()));
        if (fresh) f.captures.push_back(a.id);
        r.k = AtomK::Env;
        r.id = cit->second;
        return r;
    }

    ExprPtr convert(ExprPtr e, Frame& f) {
        switch (e->k) {
        case K::Let: {
            int32_t slot = f.bind_local(e->var);
            if (e->rec && e->e1->k == K::Lambda && direct.count(e->var)) {
                // the function lives in the code table; the binding is dead
                lambda_entry(e->e1, e->var, true);
                auto unit = core::mk(K::Atom, e->e1->span);
                unit->atoms = {core::atom_unit()};
                unit->stype = types::t_unit();
                e->e1 = unit;
            } else if (e->rec && e->e1->k == K::Lambda) {
                int32_t label = lambda_entry(e->e1, e->var, false);
                e->e1 = make_closure_node(e->e1, label, f, e->var);
            } else {
                e->e1 = convert(e->e1, f);
            }
            e->var = slot;
            e->e2 = convert(e->e2, f);
            return e;
        }
        case K::Lambda: {
            int32_t label = lambda_entry(e, -1, false);
            return make_closure_node(e, label, f, -1);
        }
        case K::Call: {
            const Atom& callee = e->atoms[0];
            if (callee.k == AtomK::VarId && direct.count(callee.id)) {
                auto d = core::mk(K::DirectCall, e->span);
                d->label = direct_label.at(callee.id);
                for (size_t i = 1; i < e->atoms.size(); ++i)
                    d->atoms.push_back(resolve(e->atoms[i], f));
                d->stype = e->stype;
                d->call_rtype = e->call_rtype;
                return d;
            }
            for (auto& a : e->atoms) a = resolve(a, f);
            return e;
        }
        case K::DynAscribe: {
            if (e->dsrc == core::DynSrcK::Dom && e->dsrc_atom.k == AtomK::VarId &&
                direct.count(e->dsrc_atom.id)) {
                const Candidate& c = candidates[e->dsrc_atom.id];
                auto asc = core::mk(K::Ascribe, e->span);
                asc->atoms = {resolve(e->atoms[0], f)};
                size_t i = static_cast<size_t>(e->dsrc_idx);
                asc->evd = ev::make(c.lambda->evd.payload->parts[i],
                                    core::slot_rep(c.lambda->fun_type->parts[i], stage.dfo));
                asc->target = c.lambda->fun_type->parts[i];
                asc->stype = e->stype;
                return asc;
            }
            if (e->dsrc == core::DynSrcK::CodSelf && f.in_direct) {
                auto asc = core::mk(K::Ascribe, e->span);
                asc->atoms = {resolve(e->atoms[0], f)};
                asc->evd = ev::make(f.birth.payload->ret,
                                    core::slot_rep(f.written_type->ret, stage.dfo));
                asc->target = f.written_type->ret;
                asc->stype = e->stype;
                return asc;
            }
            if (e->dsrc == core::DynSrcK::CodSelf) f.saw_codself = true;
            e->atoms[0] = resolve(e->atoms[0], f);
            e->dsrc_atom = resolve(e->dsrc_atom, f);
            return e;
        }
        case K::If:
            e->atoms[0] = resolve(e->atoms[0], f);
            e->e1 = convert(e->e1, f);
            e->e2 = convert(e->e2, f);
            return e;
        case K::Loop: {
            for (auto& a : e->atoms) a = resolve(a, f);
            e->var = f.bind_local(e->var);
            e->e1 = convert(e->e1, f);
            return e;
        }
        case K::Match: {
            e->atoms[0] = resolve(e->atoms[0], f);
            for (auto& a : e->arms) {
                for (auto& b : a.binders) b = f.bind_local(b);
                a.body = convert(a.body, f);
            }
            return e;
        }
        default:
            for (auto& a : e->atoms) a = resolve(a, f);
            return e;
        }
    }

    ExprPtr make_closure_node(const ExprPtr& lam, int32_t label, Frame& parent,
                              int32_t self_var) {
        auto mc = core::mk(K::MakeClosure, lam->span);
        mc->label = label;
        mc->evd = lam->evd;
        mc->fun_type = lam->fun_type;
        mc->stype = lam->stype;
        const std::vector<int32_t>& caps = entry_captures[label];
        for (size_t i = 0; i < caps.size(); ++i) {
            if (caps[i] == self_var) {
                mc->self_capture = static_cast<int32_t>(i);
                mc->atoms.push_back(core::atom_unit());
            } else {
                mc->atoms.push_back(
                    resolve(core::atom_var(caps[i], types::t_unknown()), parent));
            }
        }
        return mc;
    }

    std::map<int32_t, std::vector<int32_t>> entry_captures;

    int32_t lambda_entry(const ExprPtr& lam, int32_t self_var, bool is_direct) {
        Frame f;
        f.in_direct = is_direct;
        f.birth = lam->evd;
        f.written_type = lam->fun_type;
        for (auto& p : lam->lam_params) f.bind_local(p.id);

        core::CodeEntry entry;
        entry.n_params = static_cast<int32_t>(lam->lam_params.size());
        entry.fun_type = lam->fun_type;
        entry.direct = is_direct;
        entry.name = self_var >= 0 ? "fn_" + std::to_string(self_var)
                                   : "lambda_" + std::to_string(anon_counter++);
        int32_t label = static_cast<int32_t>(prog.code.size());
        if (is_direct) direct_label[self_var] = label;
        prog.code.push_back(entry); // reserve slot; patched below

        ExprPtr body = convert(lam->e1, f);
        if (is_direct && !f.captures.empty())
            throw std::logic_error("direct function has captures");

        prog.code[label].body = body;
        prog.code[label].n_locals = f.next_local;
        prog.code[label].n_env = static_cast<int32_t>(f.captures.size());
        prog.code[label].needs_self = f.saw_codself;
        entry_captures[label] = f.captures;
        return label;
    }
};

} // namespace

core::Program closure_convert(CoreStage& s, bool allow_direct) {
    Converter cv{s};
    cv.prog.venv = s.venv;
    cv.prog.dfo = s.dfo;
    cv.analyze(allow_direct);

    Converter::Frame main_frame;
    cv.prog.main = cv.convert(s.main, main_frame);
    if (!main_frame.captures.empty())
        throw std::logic_error("main expression has free variables");
    cv.prog.main_locals = main_frame.next_local;
    return cv.prog;
}

} // namespace gtlc::midend
