#include "surface_ast.hpp"

namespace gtlc::surface {

bool is_float_bin(BinTag t) {
    switch (t) {
    case BinTag::AddF: case BinTag::SubF: case BinTag::MulF: case BinTag::DivF:
    case BinTag::LtF: case BinTag::LeF: case BinTag::GtF: case BinTag::GeF:
    case BinTag::EqF: case BinTag::NeF:
        return true;
    default:
        return false;
    }
}

bool bin_returns_bool(BinTag t) {
    switch (t) {
    case BinTag::LtI: case BinTag::LeI: case BinTag::GtI: case BinTag::GeI:
    case BinTag::EqI: case BinTag::NeI:
    case BinTag::LtF: case BinTag::LeF: case BinTag::GtF: case BinTag::GeF:
    case BinTag::EqF: case BinTag::NeF:
        return true;
    default:
        return false;
    }
}

const char* bin_lexeme(BinTag t) {
    switch (t) {
    case BinTag::AddI: return "+";
    case BinTag::SubI: return "-";
    case BinTag::MulI: return "*";
    case BinTag::DivI: return "/";
    case BinTag::ModI: return "%";
    case BinTag::AddF: return "+.";
    case BinTag::SubF: return "-.";
    case BinTag::MulF: return "*.";
    case BinTag::DivF: return "/.";
    case BinTag::LtI: return "<";
    case BinTag::LeI: return "<=";
    case BinTag::GtI: return ">";
    case BinTag::GeI: return ">=";
    case BinTag::EqI: return "=";
    case BinTag::NeI: return "<>";
    case BinTag::LtF: return "<.";
    case BinTag::LeF: return "<=.";
    case BinTag::GtF: return ">.";
    case BinTag::GeF: return ">=.";
    case BinTag::EqF: return "=.";
    case BinTag::NeF: return "<>.";
    }
    return "?";
}

const char* prim_name(PrimTag t) {
    switch (t) {
    case PrimTag::PrintInt: return "print_int";
    case PrimTag::PrintBool: return "print_bool";
    case PrimTag::PrintFloat: return "print_float";
    case PrimTag::Not: return "not";
    case PrimTag::Sqrt: return "sqrt";
    case PrimTag::IntToFloat: return "int_to_float";
    case PrimTag::FloatToInt: return "float_to_int";
    }
    return "?";
}

bool lookup_prim(const std::string& name, PrimTag& out) {
    static const std::pair<const char*, PrimTag> table[] = {
        {"print_int", PrimTag::PrintInt},   {"print_bool", PrimTag::PrintBool},
        {"print_float", PrimTag::PrintFloat}, {"not", PrimTag::Not},
        {"sqrt", PrimTag::Sqrt},            {"int_to_float", PrimTag::IntToFloat},
        {"float_to_int", PrimTag::FloatToInt},
    };
    for (auto& [n, t] : table) {
        if (name == n) {
            out = t;
            return true;
        }
    }
    return false;
}

int prim_arity(PrimTag) { return 1; }

ExprPtr mk(K k, Span sp) {
    auto e = std::make_shared<Expr>();
    e->k = k;
    e->span = sp;
    return e;
}

namespace {

bool ann_equal(const types::TypePtr& a, const types::TypePtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return types::type_equal(a, b);
}

} // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    if (a->k != b->k) return false;
    if (a->name != b->name) return false;
    if (a->ival != b->ival || a->fval != b->fval || a->bval != b->bval) return false;
    if (a->bop != b->bop || a->prim != b->prim || a->proj_index != b->proj_index)
        return false;
    if (a->paren_tuple != b->paren_tuple) return false;
    if (!ann_equal(a->ann, b->ann)) return false;
    if (a->kids.size() != b->kids.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    if (a->params.size() != b->params.size()) return false;
    for (size_t i = 0; i < a->params.size(); ++i) {
        if (a->params[i].name != b->params[i].name) return false;
        if (!ann_equal(a->params[i].ann, b->params[i].ann)) return false;
    }
    if (a->arms.size() != b->arms.size()) return false;
    for (size_t i = 0; i < a->arms.size(); ++i) {
        if (a->arms[i].ctor != b->arms[i].ctor) return false;
        if (a->arms[i].binders != b->arms[i].binders) return false;
        if (!expr_equal(a->arms[i].body, b->arms[i].body)) return false;
    }
    return true;
}

bool program_equal(const Program& a, const Program& b) {
    if (a.variants.size() != b.variants.size()) return false;
    for (size_t i = 0; i < a.variants.size(); ++i) {
        if (a.variants[i].name != b.variants[i].name) return false;
        if (a.variants[i].ctors.size() != b.variants[i].ctors.size()) return false;
        for (size_t j = 0; j < a.variants[i].ctors.size(); ++j) {
            auto& ca = a.variants[i].ctors[j];
            auto& cb = b.variants[i].ctors[j];
            if (ca.name != cb.name) return false;
            if (ca.fields.size() != cb.fields.size()) return false;
            for (size_t f = 0; f < ca.fields.size(); ++f)
                if (!types::type_equal(ca.fields[f], cb.fields[f])) return false;
        }
    }
    return expr_equal(a.main, b.main);
}

} // namespace gtlc::surface
