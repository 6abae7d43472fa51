#include "pretty.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace gtlc::surface {

namespace {

// Context levels, loosest to tightest. A child whose natural form is looser
// than the context gets parenthesized.
enum Level {
    LSeq = 0,
    LAssign = 1,
    LAsc = 2,
    LCmp = 3,
    LAdd = 4,
    LMul = 5,
    LUnary = 6,
    LApp = 7,
    LAtom = 8,
};

bool is_open_form(const ExprPtr& e) {
    switch (e->k) {
    case K::Lambda:
    case K::Let:
    case K::LetRec:
    case K::If:
    case K::Match:
    case K::Loop:
        return true;
    default:
        return false;
    }
}

// True when the rightmost unparenthesized tail of e is a match; such a body
// would capture a following '|' on reparse.
bool tail_is_match(const ExprPtr& e) {
    switch (e->k) {
    case K::Match:
        return true;
    case K::Seq:
        return tail_is_match(e->kids[1]);
    case K::Let:
    case K::LetRec:
        return tail_is_match(e->kids[1]);
    case K::Lambda:
        return tail_is_match(e->kids[0]);
    case K::If:
        return tail_is_match(e->kids[2]);
    default:
        return false;
    }
}

std::string show_float(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) {
        // the lexer has no exponent form; fall back to plain decimal
        for (int prec = 1; prec <= 340; ++prec) {
            std::snprintf(buf, sizeof buf, "%.*f", prec, v);
            if (std::strtod(buf, nullptr) == v) {
                s = buf;
                break;
            }
        }
    }
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

std::string show_field_type(const types::TypePtr& t) {
    if (t->kind == types::TypeKind::Fun || t->kind == types::TypeKind::Tuple)
        return "(" + types::show(t) + ")";
    return types::show(t);
}

struct Printer {
    std::string out;

    void emit(const ExprPtr& e, int level) {
        if (is_open_form(e) && level > LSeq) {
            out += '(';
            emit_node(e, LSeq);
            out += ')';
            return;
        }
        emit_node(e, level);
    }

    void paren_if(bool cond, const ExprPtr& e, int sub_level) {
        if (cond) {
            out += '(';
            emit_node(e, LSeq);
            out += ')';
        } else {
            emit_node(e, sub_level);
        }
    }

    void emit_node(const ExprPtr& e, int level) {
        switch (e->k) {
        case K::Int:
            out += std::to_string(e->ival);
            return;
        case K::Float:
            out += show_float(e->fval);
            return;
        case K::Bool:
            out += e->bval ? "true" : "false";
            return;
        case K::Unit:
            out += "()";
            return;
        case K::Var:
            out += e->name;
            return;
        case K::Seq:
            if (level > LSeq) {
                out += '(';
                emit_node(e, LSeq);
                out += ')';
                return;
            }
            emit(e->kids[0], LAssign);
            out += "; ";
            emit(e->kids[1], LSeq);
            return;
        case K::Assign:
            if (level > LAssign) {
                out += '(';
                emit_node(e, LAssign);
                out += ')';
                return;
            }
            emit(e->kids[0], LAsc);
            out += " := ";
            emit(e->kids[1], LAssign);
            return;
        case K::VecSet:
            if (level > LAssign) {
                out += '(';
                emit_node(e, LAssign);
                out += ')';
                return;
            }
            emit(e->kids[0], LAtom);
            out += ".[";
            emit(e->kids[1], LSeq);
            out += "] <- ";
            emit(e->kids[2], LAssign);
            return;
        case K::Ascribe:
            if (level > LAsc) {
                out += '(';
                emit_node(e, LAsc);
                out += ')';
                return;
            }
            emit(e->kids[0], LAsc);
            out += " :: ";
            out += types::show(e->ann);
            return;
        case K::BinOp: {
            int op_level = bin_returns_bool(e->bop) ? LCmp
                           : (e->bop == BinTag::AddI || e->bop == BinTag::SubI ||
                              e->bop == BinTag::AddF || e->bop == BinTag::SubF)
                               ? LAdd
                               : LMul;
            if (level > op_level) {
                out += '(';
                emit_node(e, op_level);
                out += ')';
                return;
            }
            // comparisons are non-associative; arithmetic is left-associative
            emit(e->kids[0], op_level == LCmp ? LAdd : op_level);
            out += ' ';
            out += bin_lexeme(e->bop);
            out += ' ';
            emit(e->kids[1], op_level + 1);
            return;
        }
        case K::Deref:
            if (level > LUnary) {
                out += '(';
                emit_node(e, LUnary);
                out += ')';
                return;
            }
            out += '!';
            emit(e->kids[0], LUnary);
            return;
        case K::MakeRef:
            if (level > LApp) {
                out += '(';
                emit_node(e, LApp);
                out += ')';
                return;
            }
            out += "ref ";
            emit(e->kids[0], LAtom);
            return;
        case K::MakeVec:
            if (level > LApp) {
                out += '(';
                emit_node(e, LApp);
                out += ')';
                return;
            }
            out += "vector ";
            emit(e->kids[0], LAtom);
            out += ' ';
            emit(e->kids[1], LAtom);
            return;
        case K::Proj:
            if (level > LApp) {
                out += '(';
                emit_node(e, LApp);
                out += ')';
                return;
            }
            out += '#';
            out += std::to_string(e->proj_index);
            out += ' ';
            emit(e->kids[0], LAtom);
            return;
        case K::Call:
        case K::PrimOp:
        case K::Construct: {
            if (level > LApp) {
                out += '(';
                emit_node(e, LApp);
                out += ')';
                return;
            }
            size_t first_arg = 0;
            if (e->k == K::Call) {
                emit(e->kids[0], LAtom);
                first_arg = 1;
            } else if (e->k == K::PrimOp) {
                out += prim_name(e->prim);
            } else {
                out += e->name;
            }
            size_t n_args = e->kids.size() - first_arg;
            if (n_args == 0) return;
            if (n_args == 1) {
                out += ' ';
                emit(e->kids[first_arg], LAtom);
                return;
            }
            out += " (";
            for (size_t i = first_arg; i < e->kids.size(); ++i) {
                if (i > first_arg) out += ", ";
                emit(e->kids[i], LSeq);
            }
            out += ')';
            return;
        }
        case K::VecGet:
            if (level > LAtom) {
                out += '(';
                emit_node(e, LAtom);
                out += ')';
                return;
            }
            emit(e->kids[0], LAtom);
            out += ".[";
            emit(e->kids[1], LSeq);
            out += ']';
            return;
        case K::Tuple: {
            if (e->paren_tuple) out += '(';
            out += '(';
            for (size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += ", ";
                emit(e->kids[i], LSeq);
            }
            out += ')';
            if (e->paren_tuple) out += ')';
            return;
        }
        case K::Lambda: {
            out += "fun ";
            out += '(';
            for (size_t i = 0; i < e->params.size(); ++i) {
                if (i) out += ", ";
                out += e->params[i].name;
                if (e->params[i].ann) {
                    out += ": ";
                    out += types::show(e->params[i].ann);
                }
            }
            out += ") -> ";
            emit(e->kids[0], LSeq);
            return;
        }
        case K::Let:
        case K::LetRec: {
            out += e->k == K::LetRec ? "let rec " : "let ";
            out += e->name;
            if (e->ann) {
                out += ": ";
                out += types::show(e->ann);
            }
            out += " = ";
            emit(e->kids[0], LSeq);
            out += " in\n";
            emit(e->kids[1], LSeq);
            return;
        }
        case K::If:
            out += "if ";
            emit(e->kids[0], LSeq);
            out += " then ";
            emit(e->kids[1], LSeq);
            out += " else ";
            emit(e->kids[2], LSeq);
            return;
        case K::Loop:
            out += "loop ";
            out += e->name;
            out += " = ";
            emit(e->kids[0], LAssign);
            out += " to ";
            emit(e->kids[1], LAssign);
            out += " do ";
            emit(e->kids[2], LSeq);
            out += " done";
            return;
        case K::Match: {
            out += "match ";
            emit(e->kids[0], LSeq);
            out += " with";
            for (size_t i = 0; i < e->arms.size(); ++i) {
                const Arm& arm = e->arms[i];
                out += "\n| ";
                out += arm.ctor;
                if (arm.binders.size() == 1) {
                    out += ' ';
                    out += arm.binders[0];
                } else if (arm.binders.size() > 1) {
                    out += " (";
                    for (size_t j = 0; j < arm.binders.size(); ++j) {
                        if (j) out += ", ";
                        out += arm.binders[j];
                    }
                    out += ')';
                }
                out += " -> ";
                bool last = i + 1 == e->arms.size();
                paren_if(!last && tail_is_match(arm.body), arm.body, LSeq);
            }
            return;
        }
        }
    }
};

} // namespace

std::string pretty(const ExprPtr& e) {
    Printer p;
    p.emit(e, LSeq);
    return p.out;
}

std::string pretty(const Program& prog) {
    std::string out;
    for (auto& d : prog.variants) {
        out += "type ";
        out += d.name;
        out += " = ";
        for (size_t i = 0; i < d.ctors.size(); ++i) {
            if (i) out += " | ";
            out += d.ctors[i].name;
            if (!d.ctors[i].fields.empty()) {
                out += " of ";
                for (size_t j = 0; j < d.ctors[i].fields.size(); ++j) {
                    if (j) out += " * ";
                    out += show_field_type(d.ctors[i].fields[j]);
                }
            }
        }
        out += "\n\n";
    }
    out += pretty(prog.main);
    out += "\n";
    return out;
}

} // namespace gtlc::surface
