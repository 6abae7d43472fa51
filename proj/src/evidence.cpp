#include "evidence.hpp"

#include <stdexcept>

namespace gtlc::ev {

using types::TypeKind;
using types::TypePtr;

bool equal(const Evidence& a, const Evidence& b) {
    return types::type_equal(a.payload, b.payload) && a.rep == b.rep;
}

namespace {

bool root_is_float(const TypePtr& t) { return t->kind == TypeKind::Float; }

// The representation a value justified by this evidence lives in. A value
// under `?` holding a float is necessarily boxed; an untagged Float payload
// defaults to boxed as well (the no-DFO regime).
FloatRep effective_rep(const Evidence& e) {
    if (root_is_float(e.payload))
        return e.rep == FloatRep::None ? FloatRep::Boxed : e.rep;
    return FloatRep::Boxed;
}

FloatRep rep_for_target(const TypePtr& payload, const TypePtr& target, bool dfo) {
    if (!dfo || !root_is_float(payload)) return FloatRep::None;
    return root_is_float(target) ? FloatRep::Immediate : FloatRep::Boxed;
}

} // namespace

std::optional<Evidence> initial(const TypePtr& a, const TypePtr& b, bool dfo) {
    TypePtr m = types::meet(a, b);
    if (!m) return std::nullopt;
    return Evidence{m, rep_for_target(m, b, dfo)};
}

std::optional<Evidence> trans(const Evidence& e1, const Evidence& e2) {
    TypePtr m = types::meet(e1.payload, e2.payload);
    if (!m) return std::nullopt;
    FloatRep rep = FloatRep::None;
    if (root_is_float(m) && (e1.rep != FloatRep::None || e2.rep != FloatRep::None))
        rep = e2.rep != FloatRep::None ? e2.rep : effective_rep(e2);
    return Evidence{m, rep};
}

std::optional<DfoResult> dfo_trans(const Evidence& e1, const Evidence& e2) {
    auto t = trans(e1, e2);
    if (!t) return std::nullopt;
    DfoResult r{*t, BoxAction::None};
    if (root_is_float(t->payload)) {
        FloatRep from = effective_rep(e1);
        FloatRep to = effective_rep(e2);
        if (from == FloatRep::Immediate && to == FloatRep::Boxed)
            r.action = BoxAction::BoxFloat;
        else if (from == FloatRep::Boxed && to == FloatRep::Immediate)
            r.action = BoxAction::UnboxFloat;
        r.evd.rep = to;
    }
    return r;
}

Evidence dom(const Evidence& e, int i, FloatRep slot_rep) {
    if (e.payload->kind != TypeKind::Fun ||
        i < 0 || static_cast<size_t>(i) >= e.payload->parts.size())
        throw std::logic_error("dom: evidence payload is not a function of arity > " +
                               std::to_string(i));
    const TypePtr& p = e.payload->parts[static_cast<size_t>(i)];
    FloatRep rep = root_is_float(p) && slot_rep != FloatRep::None ? slot_rep : FloatRep::None;
    return Evidence{p, rep};
}

Evidence cod(const Evidence& e, FloatRep slot_rep) {
    if (e.payload->kind != TypeKind::Fun)
        throw std::logic_error("cod: evidence payload is not a function");
    FloatRep rep = root_is_float(e.payload->ret) && slot_rep != FloatRep::None
                       ? slot_rep
                       : FloatRep::None;
    return Evidence{e.payload->ret, rep};
}

Evidence content(const Evidence& e, ContentKind kind, int index, FloatRep pos_rep) {
    TypePtr p;
    switch (kind) {
    case ContentKind::Ref:
        if (e.payload->kind != TypeKind::Ref)
            throw std::logic_error("content: evidence payload is not a ref");
        p = e.payload->elem;
        break;
    case ContentKind::Vec:
        if (e.payload->kind != TypeKind::Vec)
            throw std::logic_error("content: evidence payload is not a vector");
        p = e.payload->elem;
        break;
    case ContentKind::TupleProj:
        if (e.payload->kind != TypeKind::Tuple ||
            index < 0 || static_cast<size_t>(index) >= e.payload->parts.size())
            throw std::logic_error("content: evidence payload is not a tuple of arity > " +
                                   std::to_string(index));
        p = e.payload->parts[static_cast<size_t>(index)];
        break;
    }
    FloatRep rep = root_is_float(p) && pos_rep != FloatRep::None ? pos_rep : FloatRep::None;
    return Evidence{p, rep};
}

bool is_fully_precise(const Evidence& e) { return types::fully_precise(e.payload); }

std::string show(const Evidence& e) {
    std::string s = "<" + types::show(e.payload);
    if (e.rep == FloatRep::Immediate) s += ":imm";
    if (e.rep == FloatRep::Boxed) s += ":boxed";
    s += ">";
    return s;
}

} // namespace gtlc::ev
