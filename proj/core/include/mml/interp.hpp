#ifndef MML_INTERP_HPP
#define MML_INTERP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mml/ast.hpp"

namespace mml {

/// Category of a dynamic error. Kept coarse so the reference interpreter and
/// the VM can be compared on failing programs as well as succeeding ones.
enum class TrapKind {
    None,
    TypeError,
    DivByZero,
    OutOfBounds,
    Arity,
    StepLimit,
    Deadlock,
};

const char* trap_kind_name(TrapKind k);

/// Result of running a program in the reference interpreter.
struct InterpResult {
    bool ok = false;
    TrapKind trap = TrapKind::None;
    std::string error;
    std::string value;               // canonical printed form of the result
    std::vector<std::string> output; // one entry per print
    uint64_t steps = 0;
};

struct InterpOptions {
    /// Scheduler quantum in evaluation steps; 0 means run without
    /// involuntary switches (yields still rotate the queue).
    uint64_t quantum = 0;
    uint64_t max_steps = 200'000'000;
};

/// Runs a closed, scope-checked expression to a value. First-class
/// continuations capture the whole evaluation context; spawn/yield run
/// under deterministic FIFO round-robin.
InterpResult interpret_reference(const Expr& program, const InterpOptions& opts = {});

} // namespace mml

#endif
