#ifndef GTLC_VM_HPP
#define GTLC_VM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "checker.hpp"
#include "core_ir.hpp"

namespace gtlc::vm {

enum class Semantics : uint8_t { G, MC, MV };

struct Mode {
    Semantics sem = Semantics::G;
    bool dfo = false;
    checker::Typing typing = checker::Typing::Gradual;
};

const char* semantics_name(Semantics s);
bool parse_semantics(const std::string& s, Semantics& out);

// Instrumentation totals for one program run.
struct Counters {
    uint64_t trans_ops = 0;
    uint64_t proxy_allocs = 0;
    uint64_t closure_proxy_allocs = 0; // subset of proxy_allocs
    uint64_t heap_allocs = 0;
    uint64_t float_boxes = 0;
    uint64_t germ_checks = 0;
    uint64_t cast_errors = 0;
    // number of heap ascriptions that carried strictly more precise evidence
    // than the object already had; zero means the run was insensitive to the
    // guarded/monotonic distinction
    uint64_t heap_precision_gains = 0;

    std::string to_json() const;
};

struct HeapObject;
using Handle = std::shared_ptr<HeapObject>;

// A runtime value: immediate (63-bit int, bool, unit, and with DFO a bare
// float) or a handle to a heap object carrying its evidence.
struct EvValue {
    enum class Tag : uint8_t { Int, Bool, Unit, Float, Obj };
    Tag tag = Tag::Unit;
    int64_t i = 0;
    double f = 0;
    bool b = false;
    Handle obj;

    static EvValue of_int(int64_t v);
    static EvValue of_bool(bool v);
    static EvValue unit();
    static EvValue of_float_imm(double v);
    static EvValue of_obj(Handle h);
};

enum class ObjKind : uint8_t { Float, Ref, Vec, Tuple, Variant, Closure };

// Heap object layout: the first slot is always the evidence. Refs, vectors,
// tuples and closure environments address their storage through a shared
// block so guarded proxies alias the same cells.
struct HeapObject {
    ObjKind kind;
    ev::Evidence evd;
    double fval = 0;                                // Float
    std::shared_ptr<std::vector<EvValue>> block;    // Ref/Vec/Tuple/Closure env
    int32_t ctor_id = -1;                           // Variant
    std::vector<EvValue> fields;                    // Variant (inline)
    int32_t code = -1;                              // Closure
};

enum class ErrKind : uint8_t { Cast, Germ, DivZero, OutOfBounds, StackOverflow, Internal };

struct RunError {
    ErrKind kind;
    Span span;
    std::string detail;
};

enum class Outcome : uint8_t { Value, CastError, GermError, OtherError };

const char* outcome_name(Outcome o);
int outcome_exit_code(Outcome o);

struct RunResult {
    Outcome outcome = Outcome::Value;
    std::optional<EvValue> value;
    std::optional<RunError> error;
    Counters counters;
};

struct Limits {
    uint64_t max_frames = 1'000'000;
};

// Integers wrap at 63-bit two's complement.
constexpr int64_t kMaxInt63 = 4611686018427387903LL;
constexpr int64_t kMinInt63 = -4611686018427387904LL;
int64_t wrap63(int64_t v);

// Renders a value for the print primitives and for test comparisons.
std::string show_value(const EvValue& v);

// Evaluates the program's main expression. Deterministic for deterministic
// programs; counters reflect exactly the events executed. Program output is
// written to `out`.
RunResult run_program(const core::Program& p, Mode mode, Limits limits,
                      std::ostream& out);

} // namespace gtlc::vm

#endif
