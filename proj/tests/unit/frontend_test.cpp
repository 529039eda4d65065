#include "doctest.h"

#include "mml/interp.hpp"
#include "mml/parser.hpp"

using namespace mml;

namespace {

InterpResult run_src(const std::string& src, InterpOptions opts = {}) {
    Expr e = parse_source(src);
    return interpret_reference(e, opts);
}

} // namespace

TEST_CASE("parser handles literals, let and arithmetic") {
    InterpResult r = run_src("(let ((x 2)) (+ x 3))");
    REQUIRE(r.ok);
    CHECK(r.value == "5");
}

TEST_CASE("parser rejects unbound variables with a location") {
    CHECK_THROWS_AS(parse_source("(f)"), CompileError);
    try {
        parse_source("(f)");
    } catch (const CompileError& e) {
        CHECK(e.stage() == "scope");
        CHECK(std::string(e.what()).find("unbound") != std::string::npos);
    }
}

TEST_CASE("parser rejects syntax errors") {
    CHECK_THROWS_AS(parse_source("(let ((x 2)) (+ x 3)"), CompileError);
    CHECK_THROWS_AS(parse_source("(select x t)"), CompileError);
    CHECK_THROWS_AS(parse_source(")"), CompileError);
    CHECK_THROWS_AS(parse_source("(lambda (x) (letrec ((f (lambda () 1))) 2))"),
                    CompileError);
}

TEST_CASE("printer round-trips through the parser") {
    const char* src = "(letrec ((f (lambda (n) (if (<= n 1) 1 (* n (f (- n 1)))))))"
                      " (f 5))";
    Expr e = parse_source(src);
    Expr e2 = parse_source(expr_to_string(e));
    CHECK(expr_to_string(e) == expr_to_string(e2));
    InterpResult r = interpret_reference(e2);
    REQUIRE(r.ok);
    CHECK(r.value == "120");
}

TEST_CASE("alpha renaming keeps semantics and uniquifies binders") {
    uint64_t counter = 0;
    Expr e = parse_source("(let ((x 1)) (let ((x (+ x 1))) (let ((x (+ x 1))) x)))");
    Expr r = alpha_rename(e, counter);
    InterpResult a = interpret_reference(e);
    InterpResult b = interpret_reference(r);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(a.value == b.value);
    CHECK(expr_to_string(r).find("x.0") != std::string::npos);
}

TEST_CASE("reference interpreter: callcc examples") {
    SUBCASE("throw discards the pending addition") {
        InterpResult r = run_src("(callcc (lambda (k) (+ 1 (throw k 41))))");
        REQUIRE(r.ok);
        CHECK(r.value == "41");
    }
    SUBCASE("continuation unused") {
        InterpResult r = run_src("(callcc (lambda (k) 7))");
        REQUIRE(r.ok);
        CHECK(r.value == "7");
    }
    SUBCASE("continuation is multi-shot") {
        // Rethrowing to the same continuation re-runs the let body.
        InterpResult r = run_src(
            "(let ((p (callcc (lambda (k) (tuple 0 k)))))"
            "  (if (< (select 0 p) 3)"
            "      (throw (select 1 p) (tuple (+ 1 (select 0 p)) (select 1 p)))"
            "      (select 0 p)))");
        REQUIRE(r.ok);
        CHECK(r.value == "3");
    }
}

TEST_CASE("reference interpreter: fib and takeuchi oracles") {
    const char* fib =
        "(letrec ((fib (lambda (n) (if (< n 2) n (+ (fib (- n 1)) (fib (- n 2)))))))"
        " (fib 20))";
    InterpResult r = run_src(fib);
    REQUIRE(r.ok);
    CHECK(r.value == "6765");

    const char* tak =
        "(letrec ((tak (lambda (x y z)"
        "  (if (< y x)"
        "      (tak (tak (- x 1) y z) (tak (- y 1) z x) (tak (- z 1) x y))"
        "      z))))"
        " (tak 18 12 6))";
    InterpResult t = run_src(tak);
    REQUIRE(t.ok);
    CHECK(t.value == "7");
}

TEST_CASE("reference interpreter: dynamic errors") {
    CHECK(run_src("(/ 1 0)").trap == TrapKind::DivByZero);
    CHECK(run_src("(select 3 (tuple 1 2))").trap == TrapKind::OutOfBounds);
    CHECK(run_src("(+ 1 2.0)").trap == TrapKind::TypeError);
    CHECK(run_src("((lambda (x) x) 1 2)").trap == TrapKind::Arity);
    CHECK(run_src("(1 2)").trap == TrapKind::TypeError);
}

TEST_CASE("reference interpreter: floats, tuples, print") {
    InterpResult r = run_src("(*. 1.5 4.0)");
    REQUIRE(r.ok);
    CHECK(r.value == "6");
    r = run_src("(tuple 1 (tuple 2 3.5))");
    REQUIRE(r.ok);
    CHECK(r.value == "#(1 #(2 3.5))");
    r = run_src("(+ (print 3) (print 4))");
    REQUIRE(r.ok);
    CHECK(r.value == "7");
    REQUIRE(r.output.size() == 2);
    CHECK(r.output[0] == "3");
    CHECK(r.output[1] == "4");
}

TEST_CASE("reference interpreter: threads are deterministic") {
    // Parent and child alternate through yields; quantum 0 means switches
    // happen only at yields, so the print order is fully determined.
    const char* src =
        "(letrec ((chatter (lambda (base i)"
        "   (if (< i 3)"
        "       (let ((d (print (+ base i))) (d2 (yield)))"
        "         (chatter base (+ i 1)))"
        "       0))))"
        " (let ((s (spawn (lambda () (chatter 100 0)))))"
        "   (chatter 200 0)))";
    InterpResult r = run_src(src);
    REQUIRE(r.ok);
    CHECK(r.value == "0");
    std::vector<std::string> want = {"200", "100", "201", "101", "202", "102"};
    CHECK(r.output == want);
}

TEST_CASE("reference interpreter: quantum preemption advances both threads") {
    const char* src =
        "(letrec ((spin (lambda (i) (if (< i 2000) (spin (+ i 1)) i))))"
        " (let ((s (spawn (lambda () (spin 0)))))"
        "   (spin 1000)))";
    InterpResult inf = run_src(src);
    InterpResult q = run_src(src, InterpOptions{.quantum = 50, .max_steps = 200'000'000});
    REQUIRE(inf.ok);
    REQUIRE(q.ok);
    CHECK(inf.value == q.value); // schedule-independent result
}

TEST_CASE("63-bit integer wraparound is the defined semantics") {
    InterpResult r = run_src("(* 4611686018427387903 2)"); // (2^62-1)*2
    REQUIRE(r.ok);
    CHECK(r.value == "-2"); // wraps mod 2^63
}
