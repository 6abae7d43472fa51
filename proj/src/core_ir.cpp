#include "core_ir.hpp"

namespace gtlc::core {

Atom atom_int(int64_t v) {
    Atom a;
    a.k = AtomK::Int;
    a.i = v;
    a.stype = types::t_int();
    return a;
}
Atom atom_float(double v) {
    Atom a;
    a.k = AtomK::Float;
    a.f = v;
    a.stype = types::t_float();
    return a;
}
Atom atom_bool(bool v) {
    Atom a;
    a.k = AtomK::Bool;
    a.b = v;
    a.stype = types::t_bool();
    return a;
}
Atom atom_unit() {
    Atom a;
    a.k = AtomK::Unit;
    a.stype = types::t_unit();
    return a;
}
Atom atom_var(int32_t id, types::TypePtr stype) {
    Atom a;
    a.k = AtomK::VarId;
    a.id = id;
    a.stype = std::move(stype);
    return a;
}

ExprPtr mk(K k, Span sp) {
    auto e = std::make_shared<Expr>();
    e->k = k;
    e->span = sp;
    return e;
}

ev::FloatRep slot_rep(const types::TypePtr& t, bool dfo) {
    if (!dfo) return ev::FloatRep::None;
    return t->kind == types::TypeKind::Float ? ev::FloatRep::Immediate
                                             : ev::FloatRep::Boxed;
}

namespace {

void show_atom(const Atom& a, std::string& out) {
    switch (a.k) {
    case AtomK::VarId: out += "v" + std::to_string(a.id); return;
    case AtomK::Local: out += "l" + std::to_string(a.id); return;
    case AtomK::Env: out += "e" + std::to_string(a.id); return;
    case AtomK::Int: out += std::to_string(a.i); return;
    case AtomK::Float: out += std::to_string(a.f); return;
    case AtomK::Bool: out += a.b ? "true" : "false"; return;
    case AtomK::Unit: out += "()"; return;
    }
}

const char* dsrc_name(DynSrcK k) {
    switch (k) {
    case DynSrcK::Dom: return "dom";
    case DynSrcK::CodSelf: return "cod(self)";
    case DynSrcK::RefContent: return "ref-content";
    case DynSrcK::VecElem: return "vec-elem";
    case DynSrcK::TupleComp: return "tuple-proj";
    }
    return "?";
}

const char* elim_name(types::ElimKind k) {
    switch (k) {
    case types::ElimKind::Apply: return "fun";
    case types::ElimKind::Deref: return "ref";
    case types::ElimKind::VecAccess: return "vec";
    case types::ElimKind::TupleProj: return "tuple";
    case types::ElimKind::Match: return "variant";
    }
    return "?";
}

struct Shower {
    const Program* prog;
    std::string out;
    int indent = 0;

    void nl() {
        out += '\n';
        for (int i = 0; i < indent; ++i) out += "  ";
    }

    void atoms_list(const Expr& e, size_t from = 0) {
        for (size_t i = from; i < e.atoms.size(); ++i) {
            if (i > from) out += ", ";
            show_atom(e.atoms[i], out);
        }
    }

    void node(const ExprPtr& e) {
        switch (e->k) {
        case K::Atom:
            show_atom(e->atoms[0], out);
            return;
        case K::Ascribe:
            out += ev::show(e->evd);
            show_atom(e->atoms[0], out);
            if (e->germ) out += " [germ]";
            return;
        case K::DynAscribe:
            out += "ascribe(";
            show_atom(e->atoms[0], out);
            out += ", ";
            out += dsrc_name(e->dsrc);
            if (e->dsrc == DynSrcK::Dom || e->dsrc == DynSrcK::TupleComp) {
                out += "(" + std::to_string(e->dsrc_idx) + ", ";
                show_atom(e->dsrc_atom, out);
                out += ")";
            } else if (e->dsrc != DynSrcK::CodSelf) {
                out += "(";
                show_atom(e->dsrc_atom, out);
                out += ")";
            }
            out += ")";
            return;
        case K::CheckGerm:
            out += "check";
            out += elim_name(e->germ->kind);
            out += " ";
            show_atom(e->atoms[0], out);
            return;
        case K::CastFail:
            out += "castfail(" + ev::show(e->evd) + ", " + ev::show(e->evd2) + ", ";
            show_atom(e->atoms[0], out);
            out += ")";
            return;
        case K::BinOp:
            show_atom(e->atoms[0], out);
            out += std::string(" ") + surface::bin_lexeme(e->bop) + " ";
            show_atom(e->atoms[1], out);
            return;
        case K::PrimOp:
            out += surface::prim_name(e->prim);
            out += " ";
            show_atom(e->atoms[0], out);
            return;
        case K::Call:
            out += "call ";
            atoms_list(*e);
            return;
        case K::DirectCall:
            out += "dcall ";
            out += prog && e->label < static_cast<int32_t>(prog->code.size())
                       ? prog->code[e->label].name
                       : ("f" + std::to_string(e->label));
            out += " (";
            atoms_list(*e);
            out += ")";
            return;
        case K::MakeClosure:
            out += "closure ";
            out += prog && e->label >= 0 && e->label < static_cast<int32_t>(prog->code.size())
                       ? prog->code[e->label].name
                       : ("f" + std::to_string(e->label));
            out += " " + ev::show(e->evd) + " [";
            atoms_list(*e);
            out += "]";
            return;
        case K::Lambda:
            out += "lambda" + ev::show(e->evd) + " (";
            for (size_t i = 0; i < e->lam_params.size(); ++i) {
                if (i) out += ", ";
                out += "v" + std::to_string(e->lam_params[i].id) + ":" +
                       types::show(e->lam_params[i].type);
            }
            out += ") ->";
            indent++;
            nl();
            node(e->e1);
            indent--;
            return;
        case K::MakeRef:
            out += "ref ";
            show_atom(e->atoms[0], out);
            return;
        case K::Deref:
            out += "!";
            show_atom(e->atoms[0], out);
            return;
        case K::Assign:
            show_atom(e->atoms[0], out);
            out += " := ";
            show_atom(e->atoms[1], out);
            return;
        case K::MakeVec:
            out += "vector ";
            atoms_list(*e);
            return;
        case K::VecGet:
            show_atom(e->atoms[0], out);
            out += ".[";
            show_atom(e->atoms[1], out);
            out += "]";
            return;
        case K::VecSet:
            show_atom(e->atoms[0], out);
            out += ".[";
            show_atom(e->atoms[1], out);
            out += "] <- ";
            show_atom(e->atoms[2], out);
            return;
        case K::MakeTuple:
            out += "tuple (";
            atoms_list(*e);
            out += ")";
            return;
        case K::TupleProj:
            out += "#" + std::to_string(e->proj_index) + " ";
            show_atom(e->atoms[0], out);
            return;
        case K::Construct:
            out += "construct #" + std::to_string(e->ctor_id) + " (";
            atoms_list(*e);
            out += ")";
            return;
        case K::Match:
            out += "match ";
            show_atom(e->atoms[0], out);
            indent++;
            for (auto& a : e->arms) {
                nl();
                out += "| #" + std::to_string(a.ctor_id) + " (";
                for (size_t i = 0; i < a.binders.size(); ++i) {
                    if (i) out += ", ";
                    out += "b" + std::to_string(a.binders[i]);
                }
                out += ") -> ";
                node(a.body);
            }
            indent--;
            return;
        case K::If:
            out += "if ";
            show_atom(e->atoms[0], out);
            indent++;
            nl();
            out += "then ";
            node(e->e1);
            nl();
            out += "else ";
            node(e->e2);
            indent--;
            return;
        case K::Loop:
            out += "loop v" + std::to_string(e->var) + " = ";
            show_atom(e->atoms[0], out);
            out += " to ";
            show_atom(e->atoms[1], out);
            out += " do";
            indent++;
            nl();
            node(e->e1);
            indent--;
            nl();
            out += "done";
            return;
        case K::Let:
            out += e->rec ? "letrec " : "let ";
            out += "v" + std::to_string(e->var) + " = ";
            node(e->e1);
            out += " in";
            nl();
            node(e->e2);
            return;
        }
    }
};

template <typename F>
void visit(const ExprPtr& e, F&& f) {
    if (!e) return;
    f(e);
    visit(e->e1, f);
    visit(e->e2, f);
    for (auto& a : e->arms) visit(a.body, f);
}

} // namespace

std::string show(const ExprPtr& e, const Program* prog) {
    Shower s{prog};
    s.node(e);
    return s.out;
}

std::string show(const Program& p) {
    std::string out;
    for (size_t i = 0; i < p.code.size(); ++i) {
        out += "fun " + p.code[i].name + " (params " +
               std::to_string(p.code[i].n_params) + ", locals " +
               std::to_string(p.code[i].n_locals) + ", env " +
               std::to_string(p.code[i].n_env) + "):\n  ";
        Shower s{&p};
        s.indent = 1;
        s.node(p.code[i].body);
        out += s.out;
        out += "\n";
    }
    out += "main:\n  ";
    Shower s{&p};
    s.indent = 1;
    s.node(p.main);
    out += s.out;
    out += "\n";
    return out;
}

int count_nodes(const ExprPtr& e, K kind) {
    int n = 0;
    visit(e, [&](const ExprPtr& x) {
        if (x->k == kind) n++;
    });
    return n;
}

int count_dyn_ascriptions(const Program& p) {
    int n = count_nodes(p.main, K::DynAscribe);
    for (auto& c : p.code) n += count_nodes(c.body, K::DynAscribe);
    return n;
}

int count_germ_ascriptions(const Program& p) {
    int n = 0;
    auto count = [&](const ExprPtr& root) {
        visit(root, [&](const ExprPtr& x) {
            if (x->k != K::Ascribe) return;
            const types::TypePtr& t = x->target ? x->target : x->evd.payload;
            if (types::as_germ(t) && types::is_unknown(x->atoms[0].stype)) n++;
        });
    };
    count(p.main);
    for (auto& c : p.code) count(c.body);
    return n;
}

} // namespace gtlc::core
