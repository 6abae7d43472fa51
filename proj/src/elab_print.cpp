#include "elab_ast.hpp"

namespace gtlc::elab {

ExprPtr mk(K k, Span sp, types::TypePtr type) {
    auto e = std::make_shared<Expr>();
    e->k = k;
    e->span = sp;
    e->type = std::move(type);
    return e;
}

namespace {

bool simple(const ExprPtr& e) {
    switch (e->k) {
    case K::Var:
    case K::Int:
    case K::Float:
    case K::Bool:
    case K::Unit:
        return true;
    default:
        return false;
    }
}

struct Shower {
    std::string out;

    void atom(const ExprPtr& e) {
        // evidence prefixes bind tightly, so an ascription needs no parens of
        // its own; everything else compound is parenthesized
        if (simple(e) || (e->k == K::Ascribe && !e->from_source)) {
            node(e);
        } else {
            out += '(';
            node(e);
            out += ')';
        }
    }

    void ascribed_subject(const ExprPtr& e) {
        // chains render with explicit parens: <bool>(<bool>false)
        if (simple(e)) {
            node(e);
        } else {
            out += '(';
            node(e);
            out += ')';
        }
    }

    void node(const ExprPtr& e) {
        switch (e->k) {
        case K::Var: out += e->name; return;
        case K::Int: out += std::to_string(e->ival); return;
        case K::Float: {
            out += std::to_string(e->fval);
            return;
        }
        case K::Bool: out += e->bval ? "true" : "false"; return;
        case K::Unit: out += "()"; return;
        case K::Ascribe:
            out += ev::show(e->evd);
            ascribed_subject(e->kids[0]);
            if (e->from_source) {
                out += "::";
                out += types::show(e->target);
            }
            return;
        case K::CastFail:
            out += "castfail(";
            out += ev::show(e->evd);
            out += ",";
            out += ev::show(e->evd2);
            out += ")";
            atom(e->kids[0]);
            return;
        case K::Lambda: {
            out += "fun (";
            for (size_t i = 0; i < e->params.size(); ++i) {
                if (i) out += ", ";
                out += e->params[i].name;
                out += ":";
                out += types::show(e->params[i].type);
            }
            out += ") -> ";
            node(e->kids[0]);
            return;
        }
        case K::Call: {
            atom(e->kids[0]);
            for (size_t i = 1; i < e->kids.size(); ++i) {
                out += ' ';
                atom(e->kids[i]);
            }
            return;
        }
        case K::BinOp:
            atom(e->kids[0]);
            out += ' ';
            out += surface::bin_lexeme(e->bop);
            out += ' ';
            atom(e->kids[1]);
            return;
        case K::PrimOp:
            out += surface::prim_name(e->prim);
            out += ' ';
            atom(e->kids[0]);
            return;
        case K::If:
            out += "if ";
            node(e->kids[0]);
            out += " then ";
            node(e->kids[1]);
            out += " else ";
            node(e->kids[2]);
            return;
        case K::Loop:
            out += "loop ";
            out += e->name;
            out += " = ";
            node(e->kids[0]);
            out += " to ";
            node(e->kids[1]);
            out += " do ";
            node(e->kids[2]);
            out += " done";
            return;
        case K::Let:
        case K::LetRec:
            out += e->k == K::LetRec ? "let rec " : "let ";
            out += e->name;
            out += " = ";
            node(e->kids[0]);
            out += " in ";
            node(e->kids[1]);
            return;
        case K::MakeRef:
            out += "ref ";
            atom(e->kids[0]);
            return;
        case K::Deref:
            out += '!';
            atom(e->kids[0]);
            return;
        case K::Assign:
            atom(e->kids[0]);
            out += " := ";
            node(e->kids[1]);
            return;
        case K::MakeVec:
            out += "vector ";
            atom(e->kids[0]);
            out += ' ';
            atom(e->kids[1]);
            return;
        case K::VecGet:
            atom(e->kids[0]);
            out += ".[";
            node(e->kids[1]);
            out += ']';
            return;
        case K::VecSet:
            atom(e->kids[0]);
            out += ".[";
            node(e->kids[1]);
            out += "] <- ";
            node(e->kids[2]);
            return;
        case K::Tuple: {
            out += '(';
            for (size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += ", ";
                node(e->kids[i]);
            }
            out += ')';
            return;
        }
        case K::Proj:
            out += '#';
            out += std::to_string(e->proj_index);
            out += ' ';
            atom(e->kids[0]);
            return;
        case K::Construct: {
            out += e->name;
            if (!e->kids.empty()) {
                out += " (";
                for (size_t i = 0; i < e->kids.size(); ++i) {
                    if (i) out += ", ";
                    node(e->kids[i]);
                }
                out += ')';
            }
            return;
        }
        case K::Match: {
            out += "match ";
            node(e->kids[0]);
            out += " with";
            for (auto& a : e->arms) {
                out += " | #";
                out += std::to_string(a.ctor_id);
                if (!a.binders.empty()) {
                    out += " (";
                    for (size_t i = 0; i < a.binders.size(); ++i) {
                        if (i) out += ", ";
                        out += a.binders[i].name;
                    }
                    out += ')';
                }
                out += " -> ";
                node(a.body);
            }
            return;
        }
        case K::Seq:
            node(e->kids[0]);
            out += "; ";
            node(e->kids[1]);
            return;
        }
    }
};

} // namespace

std::string show(const ExprPtr& e) {
    Shower s;
    s.node(e);
    return s.out;
}

std::string show(const Program& p) { return show(p.main); }

} // namespace gtlc::elab
