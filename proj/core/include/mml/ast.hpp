#ifndef MML_AST_HPP
#define MML_AST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mml/diag.hpp"

namespace mml {

/// Primitive operators of the source language. Integer and float arithmetic
/// use distinct operator names; comparisons yield the integer 0 or 1.
enum class PrimOp {
    IAdd, ISub, IMul, IDiv,
    ILt, ILe, IGt, IGe, IEq, INe,
    FAdd, FSub, FMul, FDiv,
    FLt, FLe, FGt, FGe, FEq, FNe,
    Print,
};

const char* prim_op_name(PrimOp op);
bool prim_is_float(PrimOp op);
bool prim_is_compare(PrimOp op);

/// Source expression tree. A single tagged struct rather than a class
/// hierarchy: the compiler passes switch on `kind` and the layouts are
/// small enough that a union buys nothing.
struct Expr {
    enum class Kind {
        IntLit,   // int_val
        FloatLit, // float_val
        Var,      // name
        Lambda,   // params, sub[0] = body
        Apply,    // sub[0] = fn, sub[1..] = args
        Tuple,    // sub = elements
        Select,   // index, sub[0] = tuple
        Prim,     // prim, sub = operands
        If,       // sub[0..2] = cond, then, else
        Let,      // params = names, sub[0..n-1] = inits, sub[n] = body
        Letrec,   // params = names, sub[0..n-1] = lambdas, sub[n] = body
        Callcc,   // sub[0] = receiver function
        Throw,    // sub[0] = continuation, sub[1] = value
        Spawn,    // sub[0] = thunk
        Yield,    // no operands
    };

    Kind kind = Kind::IntLit;
    SrcLoc loc;

    int64_t int_val = 0;
    double float_val = 0.0;
    int64_t index = 0;               // Select
    PrimOp prim = PrimOp::IAdd;      // Prim
    std::string name;                // Var
    std::vector<std::string> params; // Lambda / Let / Letrec binders
    std::vector<Expr> sub;

    const Expr& body() const { return sub.back(); }
};

std::string expr_to_string(const Expr& e);

/// 63-bit wraparound as performed by the compiled representation (integers
/// carry a one-bit tag, so source integers are 63-bit two's complement).
inline int64_t wrap63(int64_t v) {
    return static_cast<int64_t>(static_cast<uint64_t>(v) << 1) >> 1;
}

} // namespace mml

#endif
