#include "mml/cps_interp.hpp"

#include <deque>
#include <sstream>

namespace mml {

namespace {

struct CVal;
struct CEnv;

struct CVal {
    enum class Kind { Int, Float, Tuple, Fun, Cont, Halt } kind;
    int64_t i = 0;
    double f = 0.0;
    std::vector<CVal*> elems;
    const CpsFun* fun = nullptr;
    const CpsTerm* cont = nullptr; // LetCont owner (params/cont_body)
    CEnv* env = nullptr;
};

struct CEnv {
    const std::string* name;
    CVal* v;
    CEnv* next;
};

struct DynError {
    TrapKind kind;
    std::string msg;
};

struct CThread {
    const CpsTerm* term;
    CEnv* env;
    bool is_main = false;
};

class CpsMachine {
public:
    explicit CpsMachine(const InterpOptions& opts) : opts_(opts) {}

    InterpResult run(const CpsFun& entry) {
        InterpResult res;
        CVal* halt = alloc();
        halt->kind = CVal::Kind::Halt;
        CEnv* env = extend(nullptr, entry.kparam, halt);
        cur_ = CThread{entry.body.get(), env, true};

        try {
            loop();
            if (!have_main_) {
                res.trap = TrapKind::Deadlock;
                res.error = "all threads finished but the main thread produced no value";
                return res;
            }
            res.ok = true;
            res.value = display(main_result_);
        } catch (const DynError& e) {
            res.trap = e.kind;
            res.error = e.msg;
        }
        res.output = std::move(output_);
        res.steps = steps_;
        return res;
    }

private:
    CVal* alloc() { return &vals_.emplace_back(); }

    CVal* make_int(int64_t v) {
        CVal* x = alloc();
        x->kind = CVal::Kind::Int;
        x->i = wrap63(v);
        return x;
    }
    CVal* make_float(double v) {
        CVal* x = alloc();
        x->kind = CVal::Kind::Float;
        x->f = v;
        return x;
    }

    CEnv* extend(CEnv* env, const std::string& name, CVal* v) {
        envs_.push_back(CEnv{&name, v, env});
        return &envs_.back();
    }

    CVal* lookup(CEnv* env, const std::string& name) {
        for (; env; env = env->next)
            if (*env->name == name) return env->v;
        throw DynError{TrapKind::TypeError, "unbound CPS name '" + name + "'"};
    }

    CVal* eval_atom(const Atom& a, CEnv* env) {
        switch (a.kind) {
        case Atom::Kind::Var: return lookup(env, a.var);
        case Atom::Kind::Int: return make_int(a.i);
        case Atom::Kind::Float: return make_float(a.f);
        case Atom::Kind::BuiltinSpawn:
        case Atom::Kind::BuiltinYield: {
            CVal* v = alloc();
            v->kind = CVal::Kind::Fun;
            v->fun = nullptr; // builtins are recognized at application sites
            v->i = a.kind == Atom::Kind::BuiltinSpawn ? 1 : 2;
            return v;
        }
        }
        throw DynError{TrapKind::TypeError, "bad atom"};
    }

    void rotate() {
        if (ready_.empty()) return;
        ready_.push_back(cur_);
        cur_ = ready_.front();
        ready_.pop_front();
        slice_ = 0;
    }

    bool finish_thread(CVal* v) {
        if (cur_.is_main) {
            main_result_ = v;
            have_main_ = true;
        }
        if (ready_.empty()) return false;
        cur_ = ready_.front();
        ready_.pop_front();
        slice_ = 0;
        return true;
    }

    void throw_to(CVal* kv, CVal* arg) {
        if (kv->kind == CVal::Kind::Halt) {
            alive_ = finish_thread(arg);
            return;
        }
        if (kv->kind != CVal::Kind::Cont)
            throw DynError{TrapKind::TypeError, "throw to a non-continuation value"};
        const CpsTerm& owner = *kv->cont;
        if (owner.cparams.size() != 1)
            throw DynError{TrapKind::Arity, "continuation arity mismatch"};
        cur_.env = extend(kv->env, owner.cparams[0], arg);
        cur_.term = owner.cont_body.get();
    }

    void loop() {
        alive_ = true;
        while (alive_) {
            if (++steps_ > opts_.max_steps)
                throw DynError{TrapKind::StepLimit, "evaluation step limit exceeded"};
            if (opts_.quantum > 0 && ++slice_ >= opts_.quantum && !ready_.empty())
                rotate();
            step();
        }
    }

    void step() {
        const CpsTerm& t = *cur_.term;
        switch (t.kind) {
        case CpsTerm::Kind::LetVal: {
            CVal* v = eval_rhs(t);
            cur_.env = extend(cur_.env, t.dst, v);
            cur_.term = t.body.get();
            break;
        }
        case CpsTerm::Kind::LetFuns: {
            CEnv* env = cur_.env;
            std::vector<CEnv*> nodes;
            for (const CpsFun& f : t.funs) {
                env = extend(env, f.name, nullptr);
                nodes.push_back(env);
            }
            for (size_t i = 0; i < t.funs.size(); ++i) {
                CVal* v = alloc();
                v->kind = CVal::Kind::Fun;
                v->fun = &t.funs[i];
                v->env = env;
                nodes[i]->v = v;
            }
            cur_.env = env;
            cur_.term = t.body.get();
            break;
        }
        case CpsTerm::Kind::LetCont: {
            CVal* v = alloc();
            v->kind = CVal::Kind::Cont;
            v->cont = &t;
            v->env = cur_.env;
            cur_.env = extend(cur_.env, t.cont, v);
            cur_.term = t.body.get();
            break;
        }
        case CpsTerm::Kind::AppFun: {
            CVal* retk = lookup(cur_.env, t.retk);
            if (t.fn.kind == Atom::Kind::BuiltinSpawn ||
                t.fn.kind == Atom::Kind::BuiltinYield) {
                apply_builtin(t, retk);
                break;
            }
            CVal* fn = eval_atom(t.fn, cur_.env);
            if (fn->kind != CVal::Kind::Fun || fn->fun == nullptr)
                throw DynError{TrapKind::TypeError, "apply of a non-function value"};
            const CpsFun& f = *fn->fun;
            if (f.params.size() != t.atoms.size())
                throw DynError{TrapKind::Arity, "function arity mismatch"};
            CEnv* env = fn->env;
            for (size_t i = 0; i < t.atoms.size(); ++i)
                env = extend(env, f.params[i], eval_atom(t.atoms[i], cur_.env));
            env = extend(env, f.kparam, retk);
            cur_.env = env;
            cur_.term = f.body.get();
            break;
        }
        case CpsTerm::Kind::AppCont: {
            CVal* kv = eval_atom(t.fn, cur_.env);
            if (t.atoms.size() != 1)
                throw DynError{TrapKind::Arity, "continuation takes one value"};
            throw_to(kv, eval_atom(t.atoms[0], cur_.env));
            break;
        }
        case CpsTerm::Kind::If: {
            CVal* c = eval_atom(t.fn, cur_.env);
            if (c->kind != CVal::Kind::Int)
                throw DynError{TrapKind::TypeError, "if condition is not an integer"};
            cur_.term = c->i != 0 ? t.body.get() : t.body2.get();
            break;
        }
        case CpsTerm::Kind::Halt:
            alive_ = finish_thread(eval_atom(t.fn, cur_.env));
            break;
        }
    }

    void apply_builtin(const CpsTerm& t, CVal* retk) {
        if (t.fn.kind == Atom::Kind::BuiltinSpawn) {
            if (t.atoms.size() != 1)
                throw DynError{TrapKind::Arity, "spawn takes one argument"};
            CVal* thunk = eval_atom(t.atoms[0], cur_.env);
            if (thunk->kind != CVal::Kind::Fun || thunk->fun == nullptr ||
                !thunk->fun->params.empty())
                throw DynError{TrapKind::TypeError, "spawn requires a zero-argument function"};
            CVal* halt = alloc();
            halt->kind = CVal::Kind::Halt;
            CThread child;
            child.env = extend(thunk->env, thunk->fun->kparam, halt);
            child.term = thunk->fun->body.get();
            ready_.push_back(child);
            throw_to(retk, make_int(0));
        } else {
            throw_to(retk, make_int(0));
            rotate();
        }
    }

    CVal* eval_rhs(const CpsTerm& t) {
        switch (t.rhs) {
        case CpsTerm::RhsKind::Const:
            return eval_atom(t.atoms[0], cur_.env);
        case CpsTerm::RhsKind::Tuple: {
            CVal* v = alloc();
            v->kind = CVal::Kind::Tuple;
            for (const Atom& a : t.atoms) v->elems.push_back(eval_atom(a, cur_.env));
            return v;
        }
        case CpsTerm::RhsKind::Select: {
            CVal* tup = eval_atom(t.atoms[0], cur_.env);
            if (tup->kind != CVal::Kind::Tuple)
                throw DynError{TrapKind::TypeError, "select of a non-tuple value"};
            if (static_cast<size_t>(t.index) >= tup->elems.size())
                throw DynError{TrapKind::OutOfBounds, "selection index out of bounds"};
            return tup->elems[t.index];
        }
        case CpsTerm::RhsKind::Prim:
            return apply_prim(t);
        case CpsTerm::RhsKind::ReifyCont:
            return lookup(cur_.env, t.reify_cont);
        }
        throw DynError{TrapKind::TypeError, "bad rhs"};
    }

    CVal* apply_prim(const CpsTerm& t) {
        PrimOp op = t.prim;
        if (op == PrimOp::Print) {
            CVal* a = eval_atom(t.atoms[0], cur_.env);
            if (a->kind != CVal::Kind::Int)
                throw DynError{TrapKind::TypeError, "print requires an integer"};
            output_.push_back(std::to_string(a->i));
            return a;
        }
        CVal* a = eval_atom(t.atoms[0], cur_.env);
        CVal* b = eval_atom(t.atoms[1], cur_.env);
        if (prim_is_float(op)) {
            if (a->kind != CVal::Kind::Float || b->kind != CVal::Kind::Float)
                throw DynError{TrapKind::TypeError, "float operator applied to a non-float"};
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
        if (a->kind != CVal::Kind::Int || b->kind != CVal::Kind::Int)
            throw DynError{TrapKind::TypeError, "integer operator applied to a non-integer"};
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
            return make_int(x / y);
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

    std::string display(CVal* v) {
        std::ostringstream os;
        display_rec(os, v);
        return os.str();
    }

    void display_rec(std::ostringstream& os, CVal* v) {
        switch (v->kind) {
        case CVal::Kind::Int:
            os << v->i;
            break;
        case CVal::Kind::Float: {
            char buf[40];
            snprintf(buf, sizeof buf, "%.17g", v->f);
            os << buf;
            break;
        }
        case CVal::Kind::Tuple:
            os << "#(";
            for (size_t i = 0; i < v->elems.size(); ++i) {
                if (i) os << " ";
                display_rec(os, v->elems[i]);
            }
            os << ")";
            break;
        case CVal::Kind::Fun:
            os << "#<fun>";
            break;
        case CVal::Kind::Cont:
        case CVal::Kind::Halt:
            os << "#<cont>";
            break;
        }
    }

    InterpOptions opts_;
    std::deque<CVal> vals_;
    std::deque<CEnv> envs_;
    std::deque<CThread> ready_;
    CThread cur_{};
    std::vector<std::string> output_;
    CVal* main_result_ = nullptr;
    bool have_main_ = false;
    bool alive_ = true;
    uint64_t steps_ = 0;
    uint64_t slice_ = 0;
};

} // namespace

InterpResult interpret_cps(const CpsFun& entry, const InterpOptions& opts) {
    return CpsMachine(opts).run(entry);
}

} // namespace mml
