#include "mml/interp.hpp"

#include <deque>
#include <sstream>

namespace mml {

const char* trap_kind_name(TrapKind k) {
    switch (k) {
    case TrapKind::None: return "none";
    case TrapKind::TypeError: return "type-error";
    case TrapKind::DivByZero: return "div-by-zero";
    case TrapKind::OutOfBounds: return "out-of-bounds";
    case TrapKind::Arity: return "arity";
    case TrapKind::StepLimit: return "step-limit";
    case TrapKind::Deadlock: return "deadlock";
    }
    return "?";
}

namespace {

struct Val;
struct EnvNode;
struct Kont;

struct Val {
    enum class Kind { Int, Float, Tuple, Closure, Cont } kind;
    int64_t i = 0;
    double f = 0.0;
    std::vector<Val*> elems;   // Tuple
    const Expr* lambda = nullptr;
    EnvNode* env = nullptr;    // Closure
    Kont* kont = nullptr;      // Cont
};

struct EnvNode {
    const std::string* name;
    Val* v;
    EnvNode* next;
};

// One frame of the evaluation context. Frames are immutable once pushed so
// captured continuations can share them freely.
struct Kont {
    enum class Kind {
        Halt,
        IfK,      // branch on the incoming value
        LetK,     // idx = binding being evaluated; env = bindings so far
        AppK,     // done = fn then args evaluated so far
        TupleK,
        SelectK,
        PrimK,
        CallccK,  // incoming value is the receiver function
        ThrowFnK, // incoming value is the continuation
        ThrowValK,
        SpawnK,
    } kind;
    const Expr* e = nullptr;
    size_t idx = 0;
    std::vector<Val*> done;
    Val* extra = nullptr; // ThrowValK: the continuation value
    EnvNode* env = nullptr;
    Kont* next = nullptr;
};

struct DynError {
    TrapKind kind;
    std::string msg;
};

struct Thread {
    // Either evaluating an expression or returning a value to the context.
    bool returning = false;
    const Expr* ctrl = nullptr;
    Val* ret = nullptr;
    EnvNode* env = nullptr;
    Kont* kont = nullptr;
    bool is_main = false;
};

class Machine {
public:
    explicit Machine(const InterpOptions& opts) : opts_(opts) {}

    InterpResult run(const Expr& program) {
        InterpResult res;
        Thread main;
        main.ctrl = &program;
        main.kont = make_kont(Kont::Kind::Halt);
        main.is_main = true;
        cur_ = main;

        try {
            loop();
            if (!have_main_result_) {
                res.trap = TrapKind::Deadlock;
                res.error = "all threads finished but the main thread produced no value";
                return res;
            }
            res.ok = true;
            res.value = display(main_result_);
        } catch (const DynError& err) {
            res.trap = err.kind;
            res.error = err.msg;
        }
        res.output = std::move(output_);
        res.steps = steps_;
        return res;
    }

private:
    // ---- allocation ------------------------------------------------------

    Val* make_int(int64_t v) {
        Val* x = alloc();
        x->kind = Val::Kind::Int;
        x->i = wrap63(v);
        return x;
    }
    Val* make_float(double v) {
        Val* x = alloc();
        x->kind = Val::Kind::Float;
        x->f = v;
        return x;
    }
    Val* alloc() { return &vals_.emplace_back(); }

    EnvNode* extend(EnvNode* env, const std::string& name, Val* v) {
        envs_.push_back(EnvNode{&name, v, env});
        return &envs_.back();
    }

    Kont* make_kont(Kont::Kind kind) {
        konts_.push_back(Kont{});
        konts_.back().kind = kind;
        return &konts_.back();
    }

    Val* lookup(EnvNode* env, const std::string& name) {
        for (; env; env = env->next)
            if (*env->name == name) return env->v;
        throw DynError{TrapKind::TypeError, "unbound variable '" + name + "' at runtime"};
    }

    // ---- scheduler -------------------------------------------------------

    void rotate() {
        if (ready_.empty()) return;
        ready_.push_back(cur_);
        cur_ = ready_.front();
        ready_.pop_front();
        slice_ = 0;
    }

    bool finish_thread() {
        if (ready_.empty()) return false;
        cur_ = ready_.front();
        ready_.pop_front();
        slice_ = 0;
        return true;
    }

    // ---- main loop -------------------------------------------------------

    void loop() {
        for (;;) {
            if (++steps_ > opts_.max_steps)
                throw DynError{TrapKind::StepLimit, "evaluation step limit exceeded"};
            if (opts_.quantum > 0 && ++slice_ >= opts_.quantum && !ready_.empty())
                rotate();

            if (cur_.returning) {
                if (!step_return()) return;
            } else {
                step_eval();
            }
        }
    }

    void ret(Val* v) {
        cur_.returning = true;
        cur_.ret = v;
    }

    void eval(const Expr* e, EnvNode* env) {
        cur_.returning = false;
        cur_.ctrl = e;
        cur_.env = env;
    }

    Kont* push(Kont::Kind kind, const Expr* e) {
        Kont* k = make_kont(kind);
        k->e = e;
        k->env = cur_.env;
        k->next = cur_.kont;
        cur_.kont = k;
        return k;
    }

    void step_eval() {
        const Expr& e = *cur_.ctrl;
        switch (e.kind) {
        case Expr::Kind::IntLit:
            ret(make_int(e.int_val));
            break;
        case Expr::Kind::FloatLit:
            ret(make_float(e.float_val));
            break;
        case Expr::Kind::Var:
            ret(lookup(cur_.env, e.name));
            break;
        case Expr::Kind::Lambda: {
            Val* v = alloc();
            v->kind = Val::Kind::Closure;
            v->lambda = &e;
            v->env = cur_.env;
            ret(v);
            break;
        }
        case Expr::Kind::Apply:
            push(Kont::Kind::AppK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Tuple:
            if (e.sub.empty()) {
                Val* v = alloc();
                v->kind = Val::Kind::Tuple;
                ret(v);
            } else {
                push(Kont::Kind::TupleK, &e);
                eval(&e.sub[0], cur_.env);
            }
            break;
        case Expr::Kind::Select:
            push(Kont::Kind::SelectK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Prim:
            push(Kont::Kind::PrimK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::If:
            push(Kont::Kind::IfK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Let:
            push(Kont::Kind::LetK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Letrec: {
            EnvNode* env = cur_.env;
            std::vector<EnvNode*> nodes;
            for (const std::string& p : e.params) {
                env = extend(env, p, nullptr);
                nodes.push_back(env);
            }
            for (size_t i = 0; i < e.params.size(); ++i) {
                Val* v = alloc();
                v->kind = Val::Kind::Closure;
                v->lambda = &e.sub[i];
                v->env = env;
                nodes[i]->v = v;
            }
            eval(&e.body(), env);
            break;
        }
        case Expr::Kind::Callcc:
            push(Kont::Kind::CallccK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Throw:
            push(Kont::Kind::ThrowFnK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Spawn:
            push(Kont::Kind::SpawnK, &e);
            eval(&e.sub[0], cur_.env);
            break;
        case Expr::Kind::Yield:
            ret(make_int(0));
            rotate();
            break;
        }
    }

    void apply_closure(Val* fn, const std::vector<Val*>& args, Kont* next) {
        if (fn->kind != Val::Kind::Closure)
            throw DynError{TrapKind::TypeError, "apply of a non-function value"};
        const Expr& lam = *fn->lambda;
        if (args.size() != lam.params.size())
            throw DynError{TrapKind::Arity,
                           "function of arity " + std::to_string(lam.params.size()) +
                               " applied to " + std::to_string(args.size()) + " arguments"};
        EnvNode* env = fn->env;
        for (size_t i = 0; i < args.size(); ++i)
            env = extend(env, lam.params[i], args[i]);
        cur_.kont = next;
        eval(&lam.sub[0], env);
    }

    // Returns false when every thread is done.
    bool step_return() {
        Val* v = cur_.ret;
        Kont* k = cur_.kont;
        switch (k->kind) {
        case Kont::Kind::Halt:
            if (cur_.is_main) {
                main_result_ = v;
                have_main_result_ = true;
            }
            return finish_thread();
        case Kont::Kind::IfK: {
            if (v->kind != Val::Kind::Int)
                throw DynError{TrapKind::TypeError, "if condition is not an integer"};
            cur_.kont = k->next;
            eval(v->i != 0 ? &k->e->sub[1] : &k->e->sub[2], k->env);
            break;
        }
        case Kont::Kind::LetK: {
            const Expr& let = *k->e;
            EnvNode* env = extend(k->env, let.params[k->idx], v);
            if (k->idx + 1 < let.params.size()) {
                Kont* nk = make_kont(Kont::Kind::LetK);
                nk->e = k->e;
                nk->idx = k->idx + 1;
                nk->env = env;
                nk->next = k->next;
                cur_.kont = nk;
                eval(&let.sub[k->idx + 1], env);
            } else {
                cur_.kont = k->next;
                eval(&let.body(), env);
            }
            break;
        }
        case Kont::Kind::AppK: {
            const Expr& app = *k->e;
            if (k->done.size() + 1 < app.sub.size()) {
                Kont* nk = make_kont(Kont::Kind::AppK);
                nk->e = k->e;
                nk->env = k->env;
                nk->done = k->done;
                nk->done.push_back(v);
                nk->next = k->next;
                cur_.kont = nk;
                eval(&app.sub[k->done.size() + 1], k->env);
            } else {
                std::vector<Val*> args = k->done;
                args.push_back(v);
                Val* fn = args.front();
                args.erase(args.begin());
                apply_closure(fn, args, k->next);
            }
            break;
        }
        case Kont::Kind::TupleK: {
            const Expr& tup = *k->e;
            if (k->done.size() + 1 < tup.sub.size()) {
                Kont* nk = make_kont(Kont::Kind::TupleK);
                nk->e = k->e;
                nk->env = k->env;
                nk->done = k->done;
                nk->done.push_back(v);
                nk->next = k->next;
                cur_.kont = nk;
                eval(&tup.sub[k->done.size() + 1], k->env);
            } else {
                Val* t = alloc();
                t->kind = Val::Kind::Tuple;
                t->elems = k->done;
                t->elems.push_back(v);
                cur_.kont = k->next;
                ret(t);
            }
            break;
        }
        case Kont::Kind::SelectK: {
            if (v->kind != Val::Kind::Tuple)
                throw DynError{TrapKind::TypeError, "select of a non-tuple value"};
            size_t idx = static_cast<size_t>(k->e->index);
            if (idx >= v->elems.size())
                throw DynError{TrapKind::OutOfBounds,
                               "selection index " + std::to_string(idx) +
                                   " out of bounds for tuple of length " +
                                   std::to_string(v->elems.size())};
            cur_.kont = k->next;
            ret(v->elems[idx]);
            break;
        }
        case Kont::Kind::PrimK: {
            const Expr& prim = *k->e;
            if (k->done.size() + 1 < prim.sub.size()) {
                Kont* nk = make_kont(Kont::Kind::PrimK);
                nk->e = k->e;
                nk->env = k->env;
                nk->done = k->done;
                nk->done.push_back(v);
                nk->next = k->next;
                cur_.kont = nk;
                eval(&prim.sub[k->done.size() + 1], k->env);
            } else {
                std::vector<Val*> args = k->done;
                args.push_back(v);
                cur_.kont = k->next;
                ret(apply_prim(prim.prim, args));
            }
            break;
        }
        case Kont::Kind::CallccK: {
            Val* kv = alloc();
            kv->kind = Val::Kind::Cont;
            kv->kont = k->next;
            apply_closure(v, {kv}, k->next);
            break;
        }
        case Kont::Kind::ThrowFnK: {
            Kont* nk = make_kont(Kont::Kind::ThrowValK);
            nk->e = k->e;
            nk->env = k->env;
            nk->extra = v;
            nk->next = k->next;
            cur_.kont = nk;
            eval(&k->e->sub[1], k->env);
            break;
        }
        case Kont::Kind::ThrowValK: {
            if (k->extra->kind != Val::Kind::Cont)
                throw DynError{TrapKind::TypeError, "throw to a non-continuation value"};
            cur_.kont = k->extra->kont; // discard the current context
            ret(v);
            break;
        }
        case Kont::Kind::SpawnK: {
            if (v->kind != Val::Kind::Closure || !v->lambda->params.empty())
                throw DynError{TrapKind::TypeError, "spawn requires a zero-argument function"};
            Thread t;
            t.ctrl = &v->lambda->sub[0];
            t.env = v->env;
            t.kont = make_kont(Kont::Kind::Halt);
            ready_.push_back(t);
            cur_.kont = k->next;
            ret(make_int(0));
            break;
        }
        }
        return true;
    }

    Val* apply_prim(PrimOp op, const std::vector<Val*>& args) {
        if (op == PrimOp::Print) {
            if (args[0]->kind != Val::Kind::Int)
                throw DynError{TrapKind::TypeError, "print requires an integer"};
            output_.push_back(std::to_string(args[0]->i));
            return args[0];
        }
        Val* a = args[0];
        Val* b = args[1];
        if (prim_is_float(op)) {
            if (a->kind != Val::Kind::Float || b->kind != Val::Kind::Float)
                throw DynError{TrapKind::TypeError,
                               std::string("float operator ") + prim_op_name(op) +
                                   " applied to a non-float"};
            double x = a->f, y = b->f;
            switch (op) {
            case PrimOp::FAdd: return make_float(x + y);
            case PrimOp::FSub: return make_float(x - y);
            case PrimOp::FMul: return make_float(x * y);
            case PrimOp::FDiv: return make_float(x / y);
            case PrimOp::FLt: return make_int(x < y);
            case PrimOp::FLe: return make_int(x <= y);
            case PrimOp::FGt: return make_int(x > y);
            case PrimOp::FGe: return make_int(x >= y);
            case PrimOp::FEq: return make_int(x == y);
            case PrimOp::FNe: return make_int(x != y);
            default: break;
            }
        }
        if (a->kind != Val::Kind::Int || b->kind != Val::Kind::Int)
            throw DynError{TrapKind::TypeError,
                           std::string("integer operator ") + prim_op_name(op) +
                               " applied to a non-integer"};
        int64_t x = a->i, y = b->i;
        switch (op) {
        case PrimOp::IAdd:
            return make_int(static_cast<int64_t>(static_cast<uint64_t>(x) +
                                                 static_cast<uint64_t>(y)));
        case PrimOp::ISub:
            return make_int(static_cast<int64_t>(static_cast<uint64_t>(x) -
                                                 static_cast<uint64_t>(y)));
        case PrimOp::IMul:
            return make_int(static_cast<int64_t>(static_cast<uint64_t>(x) *
                                                 static_cast<uint64_t>(y)));
        case PrimOp::IDiv:
            if (y == 0) throw DynError{TrapKind::DivByZero, "division by zero"};
            return make_int(x / y); // operands are 63-bit, so INT64_MIN/-1 cannot occur
        case PrimOp::ILt: return make_int(x < y);
        case PrimOp::ILe: return make_int(x <= y);
        case PrimOp::IGt: return make_int(x > y);
        case PrimOp::IGe: return make_int(x >= y);
        case PrimOp::IEq: return make_int(x == y);
        case PrimOp::INe: return make_int(x != y);
        default: break;
        }
        throw DynError{TrapKind::TypeError, "bad primitive"};
    }

    std::string display(Val* v) {
        std::ostringstream os;
        display_rec(os, v);
        return os.str();
    }

    void display_rec(std::ostringstream& os, Val* v) {
        switch (v->kind) {
        case Val::Kind::Int:
            os << v->i;
            break;
        case Val::Kind::Float: {
            char buf[40];
            snprintf(buf, sizeof buf, "%.17g", v->f);
            os << buf;
            break;
        }
        case Val::Kind::Tuple:
            os << "#(";
            for (size_t i = 0; i < v->elems.size(); ++i) {
                if (i) os << " ";
                display_rec(os, v->elems[i]);
            }
            os << ")";
            break;
        case Val::Kind::Closure:
            os << "#<fun>";
            break;
        case Val::Kind::Cont:
            os << "#<cont>";
            break;
        }
    }

    InterpOptions opts_;
    std::deque<Val> vals_;
    std::deque<EnvNode> envs_;
    std::deque<Kont> konts_;
    std::deque<Thread> ready_;
    Thread cur_;
    std::vector<std::string> output_;
    Val* main_result_ = nullptr;
    bool have_main_result_ = false;
    uint64_t steps_ = 0;
    uint64_t slice_ = 0;
};

} // namespace

InterpResult interpret_reference(const Expr& program, const InterpOptions& opts) {
    return Machine(opts).run(program);
}

} // namespace mml
