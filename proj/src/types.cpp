#include "types.hpp"

#include <stdexcept>

namespace gtlc::types {

namespace {

TypePtr make_leaf(TypeKind k) {
    auto t = std::make_shared<Type>();
    t->kind = k;
    return t;
}

} // namespace

TypePtr t_int() {
    static TypePtr t = make_leaf(TypeKind::Int);
    return t;
}
TypePtr t_bool() {
    static TypePtr t = make_leaf(TypeKind::Bool);
    return t;
}
TypePtr t_float() {
    static TypePtr t = make_leaf(TypeKind::Float);
    return t;
}
TypePtr t_unit() {
    static TypePtr t = make_leaf(TypeKind::Unit);
    return t;
}
TypePtr t_unknown() {
    static TypePtr t = make_leaf(TypeKind::Unknown);
    return t;
}

TypePtr t_ref(TypePtr elem) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Ref;
    t->elem = std::move(elem);
    return t;
}

TypePtr t_vec(TypePtr elem) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Vec;
    t->elem = std::move(elem);
    return t;
}

TypePtr t_tuple(std::vector<TypePtr> parts) {
    if (parts.size() < 2) throw std::invalid_argument("tuple arity must be >= 2");
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Tuple;
    t->parts = std::move(parts);
    return t;
}

TypePtr t_fun(std::vector<TypePtr> params, TypePtr ret) {
    if (params.empty()) throw std::invalid_argument("function arity must be >= 1");
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Fun;
    t->parts = std::move(params);
    t->ret = std::move(ret);
    return t;
}

TypePtr t_named(std::string name) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Named;
    t->name = std::move(name);
    return t;
}

bool is_unknown(const TypePtr& t) { return t && t->kind == TypeKind::Unknown; }

bool type_equal(const TypePtr& a, const TypePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case TypeKind::Int:
    case TypeKind::Bool:
    case TypeKind::Float:
    case TypeKind::Unit:
    case TypeKind::Unknown:
        return true;
    case TypeKind::Ref:
    case TypeKind::Vec:
        return type_equal(a->elem, b->elem);
    case TypeKind::Tuple: {
        if (a->parts.size() != b->parts.size()) return false;
        for (size_t i = 0; i < a->parts.size(); ++i)
            if (!type_equal(a->parts[i], b->parts[i])) return false;
        return true;
    }
    case TypeKind::Fun: {
        if (a->parts.size() != b->parts.size()) return false;
        for (size_t i = 0; i < a->parts.size(); ++i)
            if (!type_equal(a->parts[i], b->parts[i])) return false;
        return type_equal(a->ret, b->ret);
    }
    case TypeKind::Named:
        return a->name == b->name;
    }
    return false;
}

TypePtr meet(const TypePtr& a, const TypePtr& b) {
    if (a->kind == TypeKind::Unknown) return b;
    if (b->kind == TypeKind::Unknown) return a;
    if (a->kind != b->kind) return nullptr;
    switch (a->kind) {
    case TypeKind::Int:
    case TypeKind::Bool:
    case TypeKind::Float:
    case TypeKind::Unit:
        return a;
    case TypeKind::Ref:
    case TypeKind::Vec: {
        TypePtr e = meet(a->elem, b->elem);
        if (!e) return nullptr;
        if (e == a->elem) return a;
        if (e == b->elem) return b;
        return a->kind == TypeKind::Ref ? t_ref(e) : t_vec(e);
    }
    case TypeKind::Tuple: {
        if (a->parts.size() != b->parts.size()) return nullptr;
        std::vector<TypePtr> parts;
        parts.reserve(a->parts.size());
        for (size_t i = 0; i < a->parts.size(); ++i) {
            TypePtr m = meet(a->parts[i], b->parts[i]);
            if (!m) return nullptr;
            parts.push_back(m);
        }
        return t_tuple(std::move(parts));
    }
    case TypeKind::Fun: {
        if (a->parts.size() != b->parts.size()) return nullptr;
        std::vector<TypePtr> params;
        params.reserve(a->parts.size());
        for (size_t i = 0; i < a->parts.size(); ++i) {
            TypePtr m = meet(a->parts[i], b->parts[i]);
            if (!m) return nullptr;
            params.push_back(m);
        }
        TypePtr r = meet(a->ret, b->ret);
        if (!r) return nullptr;
        return t_fun(std::move(params), r);
    }
    case TypeKind::Named:
        return a->name == b->name ? a : nullptr;
    case TypeKind::Unknown:
        break;
    }
    return nullptr;
}

bool consistent(const TypePtr& a, const TypePtr& b) { return meet(a, b) != nullptr; }

bool precision_le(const TypePtr& a, const TypePtr& b) {
    TypePtr m = meet(a, b);
    return m && type_equal(m, a);
}

bool fully_precise(const TypePtr& t) {
    switch (t->kind) {
    case TypeKind::Unknown:
        return false;
    case TypeKind::Int:
    case TypeKind::Bool:
    case TypeKind::Float:
    case TypeKind::Unit:
    case TypeKind::Named:
        return true;
    case TypeKind::Ref:
    case TypeKind::Vec:
        return fully_precise(t->elem);
    case TypeKind::Tuple: {
        for (auto& p : t->parts)
            if (!fully_precise(p)) return false;
        return true;
    }
    case TypeKind::Fun: {
        for (auto& p : t->parts)
            if (!fully_precise(p)) return false;
        return fully_precise(t->ret);
    }
    }
    return false;
}

int type_node_count(const TypePtr& t) {
    switch (t->kind) {
    case TypeKind::Unknown:
        return 0;
    case TypeKind::Int:
    case TypeKind::Bool:
    case TypeKind::Float:
    case TypeKind::Unit:
    case TypeKind::Named:
        return 1;
    case TypeKind::Ref:
    case TypeKind::Vec:
        return 1 + type_node_count(t->elem);
    case TypeKind::Tuple: {
        int n = 1;
        for (auto& p : t->parts) n += type_node_count(p);
        return n;
    }
    case TypeKind::Fun: {
        int n = 1;
        for (auto& p : t->parts) n += type_node_count(p);
        return n + type_node_count(t->ret);
    }
    }
    return 0;
}

TypePtr germ_of(const Elim& e) {
    switch (e.kind) {
    case ElimKind::Apply: {
        std::vector<TypePtr> params(static_cast<size_t>(e.detail), t_unknown());
        return t_fun(std::move(params), t_unknown());
    }
    case ElimKind::Deref:
        return t_ref(t_unknown());
    case ElimKind::VecAccess:
        return t_vec(t_unknown());
    case ElimKind::TupleProj: {
        std::vector<TypePtr> parts(static_cast<size_t>(e.detail) + 1, t_unknown());
        if (parts.size() < 2) parts.resize(2, t_unknown());
        return t_tuple(std::move(parts));
    }
    case ElimKind::Match:
        return t_named(e.variant);
    }
    return t_unknown();
}

std::optional<Elim> as_germ(const TypePtr& t) {
    switch (t->kind) {
    case TypeKind::Fun: {
        for (auto& p : t->parts)
            if (!is_unknown(p)) return std::nullopt;
        if (!is_unknown(t->ret)) return std::nullopt;
        return Elim{ElimKind::Apply, static_cast<int>(t->parts.size()), ""};
    }
    case TypeKind::Ref:
        if (is_unknown(t->elem)) return Elim{ElimKind::Deref, 0, ""};
        return std::nullopt;
    case TypeKind::Vec:
        if (is_unknown(t->elem)) return Elim{ElimKind::VecAccess, 0, ""};
        return std::nullopt;
    case TypeKind::Tuple: {
        for (auto& p : t->parts)
            if (!is_unknown(p)) return std::nullopt;
        return Elim{ElimKind::TupleProj, static_cast<int>(t->parts.size()) - 1, ""};
    }
    case TypeKind::Named:
        return Elim{ElimKind::Match, 0, t->name};
    default:
        return std::nullopt;
    }
}

namespace {

// Precedence: arrow binds loosest, then tuple `*`, then atoms.
void show_rec(const TypePtr& t, std::string& out, int level);

void show_parts(const TypePtr& t, std::string& out, int level) {
    (void)level;
    show_rec(t, out, 0);
}

void show_rec(const TypePtr& t, std::string& out, int level) {
    // level 0: any; 1: no top-level arrow; 2: atoms only
    auto paren = [&](int need, auto&& body) {
        if (level >= need) out += '(';
        body();
        if (level >= need) out += ')';
    };
    switch (t->kind) {
    case TypeKind::Int: out += "int"; return;
    case TypeKind::Bool: out += "bool"; return;
    case TypeKind::Float: out += "float"; return;
    case TypeKind::Unit: out += "unit"; return;
    case TypeKind::Unknown: out += "?"; return;
    case TypeKind::Named: out += t->name; return;
    case TypeKind::Ref:
        out += "ref[";
        show_rec(t->elem, out, 0);
        out += ']';
        return;
    case TypeKind::Vec:
        out += "vec[";
        show_rec(t->elem, out, 0);
        out += ']';
        return;
    case TypeKind::Tuple:
        paren(2, [&] {
            for (size_t i = 0; i < t->parts.size(); ++i) {
                if (i) out += " * ";
                show_rec(t->parts[i], out, 2);
            }
        });
        return;
    case TypeKind::Fun:
        paren(1, [&] {
            if (t->parts.size() == 1) {
                show_rec(t->parts[0], out, 1);
            } else {
                out += '(';
                for (size_t i = 0; i < t->parts.size(); ++i) {
                    if (i) out += ", ";
                    show_parts(t->parts[i], out, 0);
                }
                out += ')';
            }
            out += "->";
            show_rec(t->ret, out, 0);
        });
        return;
    }
}

} // namespace

std::string show(const TypePtr& t) {
    std::string out;
    show_rec(t, out, 0);
    return out;
}

int32_t VariantEnv::declare(
    const std::string& name,
    const std::vector<std::pair<std::string, std::vector<TypePtr>>>& ctor_list) {
    if (variant_by_name.count(name))
        throw std::invalid_argument("duplicate variant type name: " + name);
    Variant v;
    v.name = name;
    v.id = static_cast<int32_t>(variants.size());
    for (auto& [cname, fields] : ctor_list) {
        if (ctor_by_name.count(cname))
            throw std::invalid_argument("duplicate constructor name: " + cname);
        Ctor c;
        c.name = cname;
        c.id = static_cast<int32_t>(ctors.size());
        c.type_id = v.id;
        c.fields = fields;
        ctor_by_name[cname] = c.id;
        v.ctors.push_back(c.id);
        ctors.push_back(std::move(c));
    }
    variant_by_name[name] = v.id;
    variants.push_back(std::move(v));
    return static_cast<int32_t>(variants.size()) - 1;
}

const VariantEnv::Variant* VariantEnv::find_variant(const std::string& name) const {
    auto it = variant_by_name.find(name);
    return it == variant_by_name.end() ? nullptr : &variants[it->second];
}

const VariantEnv::Ctor* VariantEnv::find_ctor(const std::string& name) const {
    auto it = ctor_by_name.find(name);
    return it == ctor_by_name.end() ? nullptr : &ctors[it->second];
}

} // namespace gtlc::types
