#ifndef MML_CPS_HPP
#define MML_CPS_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mml/ast.hpp"

namespace mml {

/// A trivial CPS operand: variable, constant, or scheduling builtin.
struct Atom {
    enum class Kind { Var, Int, Float, BuiltinSpawn, BuiltinYield };
    Kind kind = Kind::Int;
    std::string var;
    int64_t i = 0;
    double f = 0.0;

    static Atom make_var(std::string name) {
        Atom a;
        a.kind = Kind::Var;
        a.var = std::move(name);
        return a;
    }
    static Atom make_int(int64_t v) {
        Atom a;
        a.kind = Kind::Int;
        a.i = wrap63(v);
        return a;
    }
    static Atom make_float(double v) {
        Atom a;
        a.kind = Kind::Float;
        a.f = v;
        return a;
    }
    static Atom builtin(bool spawn) {
        Atom a;
        a.kind = spawn ? Kind::BuiltinSpawn : Kind::BuiltinYield;
        return a;
    }
};

struct CpsTerm;
using CpsTermPtr = std::unique_ptr<CpsTerm>;

struct CpsFun {
    std::string name;
    std::vector<std::string> params;
    std::string kparam; // explicit return continuation
    CpsTermPtr body;
};

/// CPS intermediate form. Every function application names its return
/// continuation; control never returns implicitly.
struct CpsTerm {
    enum class Kind {
        LetVal,  // dst = rhs in body
        LetFuns, // mutually recursive function bindings in body
        LetCont, // cont binder (params, cont_body) in body
        AppFun,  // fn(args) with return continuation retk
        AppCont, // head(args); head may be a bound cont or a cont value
        If,      // conditional on an atom
        Halt,    // final value (used by tests and printers)
    };

    enum class RhsKind { Const, Tuple, Select, Prim, ReifyCont };

    Kind kind = Kind::Halt;

    // LetVal
    std::string dst;
    RhsKind rhs = RhsKind::Const;
    PrimOp prim = PrimOp::IAdd;
    int64_t index = 0;        // Select
    std::string reify_cont;   // ReifyCont: name of the captured continuation
    std::vector<Atom> atoms;  // rhs operands / call args / AppCont args

    std::vector<CpsFun> funs; // LetFuns

    std::string cont;                // LetCont binder
    std::vector<std::string> cparams;
    bool administrative = false;     // set by the naive transform in tests
    CpsTermPtr cont_body;

    Atom fn;            // AppFun callee / AppCont head / If cond / Halt value
    std::string retk;   // AppFun return continuation

    CpsTermPtr body;    // LetVal/LetFuns/LetCont continuation; If then-branch
    CpsTermPtr body2;   // If else-branch
};

CpsTermPtr make_term(CpsTerm::Kind kind);
CpsTermPtr clone_term(const CpsTerm& t);
std::string cps_to_string(const CpsTerm& t);
std::string cps_fun_to_string(const CpsFun& f);

/// Free names of a term: value variables plus continuation names used
/// free. Callers that only care about value variables filter afterwards.
void cps_free_vars(const CpsTerm& t, std::set<std::string>& out,
                   std::set<std::string>& bound);

/// Structural equality up to consistent renaming of binders.
bool cps_alpha_equal(const CpsFun& a, const CpsFun& b);

} // namespace mml

#endif
