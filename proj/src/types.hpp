#ifndef GTLC_TYPES_HPP
#define GTLC_TYPES_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gtlc::types {

enum class TypeKind : uint8_t {
    Int,
    Bool,
    Float,
    Unit,
    Unknown, // ?
    Ref,
    Vec,
    Tuple, // arity >= 2
    Fun,   // arity >= 1
    Named, // declared variant type
};

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Immutable structural type tree. `?` is the top of the precision lattice.
struct Type {
    TypeKind kind;
    TypePtr elem;                // Ref / Vec
    std::vector<TypePtr> parts;  // Tuple components, Fun parameters
    TypePtr ret;                 // Fun
    std::string name;            // Named
};

TypePtr t_int();
TypePtr t_bool();
TypePtr t_float();
TypePtr t_unit();
TypePtr t_unknown();
TypePtr t_ref(TypePtr elem);
TypePtr t_vec(TypePtr elem);
TypePtr t_tuple(std::vector<TypePtr> parts);
TypePtr t_fun(std::vector<TypePtr> params, TypePtr ret);
TypePtr t_named(std::string name);

bool type_equal(const TypePtr& a, const TypePtr& b);
bool is_unknown(const TypePtr& t);

// Precision meet (greatest lower bound); nullptr when undefined.
// `?` is the identity. Structural constructors meet component-wise; Fun and
// Tuple meets across different arities are undefined; Named meets only with
// an identical Named or `?`.
TypePtr meet(const TypePtr& a, const TypePtr& b);

// a ~ b, i.e. meet(a, b) is defined.
bool consistent(const TypePtr& a, const TypePtr& b);

// a is at least as precise as b: meet(a, b) defined and equal to a.
bool precision_le(const TypePtr& a, const TypePtr& b);

// No `?` anywhere in the tree.
bool fully_precise(const TypePtr& t);

// Number of non-`?` constructor/leaf nodes; each `?` counts zero.
int type_node_count(const TypePtr& t);

// Elimination forms that require a germ ascription on a `?`-typed subject.
enum class ElimKind : uint8_t { Apply, Deref, VecAccess, TupleProj, Match };

struct Elim {
    ElimKind kind;
    int detail = 0;          // Apply: arity; TupleProj: index
    std::string variant;     // Match: variant type name
};

// The least-precise type admitting the elimination form.
TypePtr germ_of(const Elim& e);

// Recognize a type that is exactly some germ, recovering the elimination it
// admits. Used to decide which static ascriptions the germ-specialization
// pass may rewrite.
std::optional<Elim> as_germ(const TypePtr& t);

// Paper-style rendering: "?->int", "ref[bool]", "int * bool".
std::string show(const TypePtr& t);

// Declared variant types. Constructor names are globally unique; ids are
// dense per program.
struct VariantEnv {
    struct Ctor {
        std::string name;
        int32_t id = -1;
        int32_t type_id = -1;
        std::vector<TypePtr> fields;
    };
    struct Variant {
        std::string name;
        int32_t id = -1;
        std::vector<int32_t> ctors; // ctor ids, declaration order
    };

    std::vector<Variant> variants;
    std::vector<Ctor> ctors;
    std::map<std::string, int32_t> variant_by_name;
    std::map<std::string, int32_t> ctor_by_name;

    // Returns the new variant id; throws std::invalid_argument on duplicate
    // type or constructor names.
    int32_t declare(const std::string& name,
                    const std::vector<std::pair<std::string, std::vector<TypePtr>>>& ctor_list);

    const Variant* find_variant(const std::string& name) const;
    const Ctor* find_ctor(const std::string& name) const;
    const Variant& variant(int32_t id) const { return variants.at(id); }
    const Ctor& ctor(int32_t id) const { return ctors.at(id); }
};

} // namespace gtlc::types

#endif
