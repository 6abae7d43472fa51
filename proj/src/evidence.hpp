#ifndef GTLC_EVIDENCE_HPP
#define GTLC_EVIDENCE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "types.hpp"

namespace gtlc::ev {

// Float representation refinement for the dual float optimization. Tags are
// meaningful only at the root of a Float payload; nested floats stay boxed.
enum class FloatRep : uint8_t { None, Immediate, Boxed };

// Evidence for a consistency judgment: a single gradual type. The rest of
// the pipeline treats it through this interface only, so the payload
// discipline can be swapped out.
struct Evidence {
    types::TypePtr payload;
    FloatRep rep = FloatRep::None;
};

inline Evidence make(types::TypePtr t, FloatRep r = FloatRep::None) {
    return Evidence{std::move(t), r};
}

bool equal(const Evidence& a, const Evidence& b);

// Most precise evidence justifying a ~ b: the meet of both types. Empty iff
// the types are inconsistent. When `dfo` is set and the meet is a root
// Float, the result carries the representation expected by the target side
// (immediate when b is Float, boxed otherwise).
std::optional<Evidence> initial(const types::TypePtr& a, const types::TypePtr& b,
                                bool dfo = false);

// Consistent transitivity: the precision meet of both payloads. Empty iff
// undefined. The representation tag of the result follows e2 (the side the
// value moves to).
std::optional<Evidence> trans(const Evidence& e1, const Evidence& e2);

enum class BoxAction : uint8_t { None, BoxFloat, UnboxFloat };

struct DfoResult {
    Evidence evd;
    BoxAction action = BoxAction::None;
};

// trans plus the coercion action implied by disagreeing root Float
// representations: e1 describes the value's current representation, e2 the
// representation of the position it moves to.
std::optional<DfoResult> dfo_trans(const Evidence& e1, const Evidence& e2);

// Projections. Preconditions are pipeline invariants (a germ ascription or
// static typing guarantees the payload head); violations throw
// std::logic_error.
Evidence dom(const Evidence& e, int i, FloatRep slot_rep = FloatRep::None);
Evidence cod(const Evidence& e, FloatRep slot_rep = FloatRep::None);

enum class ContentKind : uint8_t { Ref, Vec, TupleProj };
Evidence content(const Evidence& e, ContentKind kind, int index = 0,
                 FloatRep pos_rep = FloatRep::None);

bool is_fully_precise(const Evidence& e);

// Debug rendering in the paper's angle-bracket notation, e.g. "<?->int>".
std::string show(const Evidence& e);

} // namespace gtlc::ev

#endif
