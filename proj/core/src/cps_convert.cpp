#include "mml/cps_convert.hpp"

#include <functional>
#include <map>

namespace mml {

namespace {

using Env = std::map<std::string, Atom>;
using MetaK = std::function<CpsTermPtr(Atom)>;

class Converter {
public:
    explicit Converter(uint64_t& counter) : counter_(counter) {}

    CpsFun convert_program(const Expr& program) {
        CpsFun main;
        main.name = "main";
        main.kparam = fresh("k");
        main.body = convert_tail(program, {}, main.kparam);
        return main;
    }

private:
    std::string fresh(const char* base) {
        return std::string(base) + "." + std::to_string(counter_++);
    }

    // ---- continuation plumbing -----------------------------------------

    CpsTermPtr finish(const MetaK& k, Atom a) { return k(a); }

    CpsTermPtr throw_to(const std::string& kname, Atom a) {
        CpsTermPtr t = make_term(CpsTerm::Kind::AppCont);
        t->fn = Atom::make_var(kname);
        t->atoms = {a};
        return t;
    }

    /// Runs `body` with an object-level continuation name. When the context
    /// is a meta continuation, a join continuation is materialized exactly
    /// once; when it is already a name, no binder is introduced (this is
    /// what keeps the output free of administrative redexes).
    CpsTermPtr with_object_cont(const MetaK& k,
                                const std::function<CpsTermPtr(const std::string&)>& body) {
        std::string j = fresh("k");
        std::string x = fresh("r");
        CpsTermPtr t = make_term(CpsTerm::Kind::LetCont);
        t->cont = j;
        t->cparams = {x};
        t->cont_body = k(Atom::make_var(x));
        t->body = body(j);
        return t;
    }

    // ---- expression forms ------------------------------------------------

    CpsTermPtr convert(const Expr& e, const Env& env, const MetaK& k) {
        switch (e.kind) {
        case Expr::Kind::IntLit:
            return finish(k, Atom::make_int(e.int_val));
        case Expr::Kind::FloatLit:
            return finish(k, Atom::make_float(e.float_val));
        case Expr::Kind::Var:
            return finish(k, env.at(e.name));
        case Expr::Kind::Lambda: {
            std::string f = fresh("f");
            return bind_funs({&e}, {f}, env,
                             [&](const Env&) { return finish(k, Atom::make_var(f)); });
        }
        case Expr::Kind::Letrec: {
            std::vector<const Expr*> lams;
            std::vector<std::string> names(e.params);
            for (size_t i = 0; i < e.params.size(); ++i) lams.push_back(&e.sub[i]);
            return bind_funs(lams, names, env,
                             [&](const Env& env2) { return convert(e.body(), env2, k); });
        }
        case Expr::Kind::Let:
            return convert_let(e, 0, env, [&](const Env& env2) {
                return convert(e.body(), env2, k);
            });
        case Expr::Kind::If:
            return convert_one(e.sub[0], env, [&](Atom cond) {
                return with_object_cont(k, [&](const std::string& j) {
                    CpsTermPtr t = make_term(CpsTerm::Kind::If);
                    t->fn = cond;
                    t->body = convert_tail(e.sub[1], env, j);
                    t->body2 = convert_tail(e.sub[2], env, j);
                    return t;
                });
            });
        case Expr::Kind::Apply:
            return convert_list(e.sub, env, [&](std::vector<Atom> atoms) {
                Atom fn = atoms.front();
                atoms.erase(atoms.begin());
                return with_object_cont(k, [&](const std::string& j) {
                    return app_fun(fn, j, atoms);
                });
            });
        case Expr::Kind::Tuple:
        case Expr::Kind::Select:
        case Expr::Kind::Prim:
            return convert_value(e, env, k);
        case Expr::Kind::Callcc:
            return convert_one(e.sub[0], env, [&](Atom f) {
                return with_object_cont(k, [&](const std::string& j) {
                    return reify_and_call(f, j);
                });
            });
        case Expr::Kind::Throw:
            return convert_one(e.sub[0], env, [&](Atom kv) {
                return convert_one(e.sub[1], env, [&](Atom v) {
                    // The surrounding context is discarded on purpose.
                    CpsTermPtr t = make_term(CpsTerm::Kind::AppCont);
                    t->fn = kv;
                    t->atoms = {v};
                    return t;
                });
            });
        case Expr::Kind::Spawn:
            return convert_one(e.sub[0], env, [&](Atom thunk) {
                return with_object_cont(k, [&](const std::string& j) {
                    return app_fun(Atom::builtin(true), j, {thunk});
                });
            });
        case Expr::Kind::Yield:
            return with_object_cont(k, [&](const std::string& j) {
                return app_fun(Atom::builtin(false), j, {});
            });
        }
        throw CompileError("cps", "unreachable expression kind");
    }

    CpsTermPtr convert_tail(const Expr& e, const Env& env, const std::string& kname) {
        switch (e.kind) {
        case Expr::Kind::IntLit:
            return throw_to(kname, Atom::make_int(e.int_val));
        case Expr::Kind::FloatLit:
            return throw_to(kname, Atom::make_float(e.float_val));
        case Expr::Kind::Var:
            return throw_to(kname, env.at(e.name));
        case Expr::Kind::Lambda: {
            std::string f = fresh("f");
            return bind_funs({&e}, {f}, env, [&](const Env&) {
                return throw_to(kname, Atom::make_var(f));
            });
        }
        case Expr::Kind::Letrec: {
            std::vector<const Expr*> lams;
            std::vector<std::string> names(e.params);
            for (size_t i = 0; i < e.params.size(); ++i) lams.push_back(&e.sub[i]);
            return bind_funs(lams, names, env, [&](const Env& env2) {
                return convert_tail(e.body(), env2, kname);
            });
        }
        case Expr::Kind::Let:
            return convert_let(e, 0, env, [&](const Env& env2) {
                return convert_tail(e.body(), env2, kname);
            });
        case Expr::Kind::If:
            return convert_one(e.sub[0], env, [&](Atom cond) {
                CpsTermPtr t = make_term(CpsTerm::Kind::If);
                t->fn = cond;
                t->body = convert_tail(e.sub[1], env, kname);
                t->body2 = convert_tail(e.sub[2], env, kname);
                return t;
            });
        case Expr::Kind::Apply:
            return convert_list(e.sub, env, [&](std::vector<Atom> atoms) {
                Atom fn = atoms.front();
                atoms.erase(atoms.begin());
                return app_fun(fn, kname, atoms);
            });
        case Expr::Kind::Callcc:
            return convert_one(e.sub[0], env, [&](Atom f) {
                return reify_and_call(f, kname);
            });
        case Expr::Kind::Spawn:
            return convert_one(e.sub[0], env, [&](Atom thunk) {
                return app_fun(Atom::builtin(true), kname, {thunk});
            });
        case Expr::Kind::Yield:
            return app_fun(Atom::builtin(false), kname, {});
        case Expr::Kind::Tuple:
        case Expr::Kind::Select:
        case Expr::Kind::Prim:
        case Expr::Kind::Throw:
            return convert(e, env, [&](Atom a) { return throw_to(kname, a); });
        }
        throw CompileError("cps", "unreachable expression kind");
    }

    // ---- helpers ---------------------------------------------------------

    CpsTermPtr app_fun(Atom fn, const std::string& retk, std::vector<Atom> args) {
        CpsTermPtr t = make_term(CpsTerm::Kind::AppFun);
        t->fn = fn;
        t->retk = retk;
        t->atoms = std::move(args);
        return t;
    }

    CpsTermPtr reify_and_call(Atom f, const std::string& kname) {
        std::string kv = fresh("cc");
        CpsTermPtr t = make_term(CpsTerm::Kind::LetVal);
        t->dst = kv;
        t->rhs = CpsTerm::RhsKind::ReifyCont;
        t->reify_cont = kname;
        t->body = app_fun(f, kname, {Atom::make_var(kv)});
        return t;
    }

    CpsTermPtr bind_funs(const std::vector<const Expr*>& lambdas,
                         const std::vector<std::string>& names, const Env& env,
                         const std::function<CpsTermPtr(const Env&)>& rest) {
        Env env2 = env;
        for (const std::string& n : names) env2[n] = Atom::make_var(n);
        CpsTermPtr t = make_term(CpsTerm::Kind::LetFuns);
        for (size_t i = 0; i < lambdas.size(); ++i) {
            const Expr& lam = *lambdas[i];
            CpsFun f;
            f.name = names[i];
            f.params = lam.params;
            f.kparam = fresh("k");
            Env inner = env2;
            for (const std::string& p : lam.params) inner[p] = Atom::make_var(p);
            f.body = convert_tail(lam.sub[0], inner, f.kparam);
            t->funs.push_back(std::move(f));
        }
        t->body = rest(env2);
        return t;
    }

    CpsTermPtr convert_let(const Expr& let, size_t idx, const Env& env,
                           const std::function<CpsTermPtr(const Env&)>& rest) {
        if (idx == let.params.size()) return rest(env);
        return convert(let.sub[idx], env, [&](Atom a) {
            Env env2 = env;
            env2[let.params[idx]] = a;
            return convert_let(let, idx + 1, env2, rest);
        });
    }

    CpsTermPtr convert_one(const Expr& e, const Env& env,
                           const std::function<CpsTermPtr(Atom)>& k) {
        return convert(e, env, k);
    }

    CpsTermPtr convert_list(const std::vector<Expr>& exprs, const Env& env,
                            const std::function<CpsTermPtr(std::vector<Atom>)>& k,
                            size_t idx = 0, std::vector<Atom> acc = {}) {
        if (idx == exprs.size()) return k(std::move(acc));
        return convert(exprs[idx], env, [&](Atom a) {
            std::vector<Atom> acc2 = acc;
            acc2.push_back(a);
            return convert_list(exprs, env, k, idx + 1, std::move(acc2));
        });
    }

    CpsTermPtr convert_value(const Expr& e, const Env& env, const MetaK& k) {
        return convert_list(e.sub, env, [&](std::vector<Atom> atoms) {
            std::string t = fresh("t");
            CpsTermPtr lv = make_term(CpsTerm::Kind::LetVal);
            lv->dst = t;
            lv->atoms = std::move(atoms);
            switch (e.kind) {
            case Expr::Kind::Tuple:
                lv->rhs = CpsTerm::RhsKind::Tuple;
                break;
            case Expr::Kind::Select:
                lv->rhs = CpsTerm::RhsKind::Select;
                lv->index = e.index;
                break;
            case Expr::Kind::Prim:
                lv->rhs = CpsTerm::RhsKind::Prim;
                lv->prim = e.prim;
                break;
            default:
                throw CompileError("cps", "not a value form");
            }
            lv->body = finish(k, Atom::make_var(t));
            return lv;
        });
    }

    uint64_t& counter_;
};

} // namespace

CpsFun cps_convert(const Expr& alpha_renamed, uint64_t& counter) {
    return Converter(counter).convert_program(alpha_renamed);
}

} // namespace mml
