#include "mml/cps.hpp"

#include <map>
#include <sstream>

namespace mml {

CpsTermPtr make_term(CpsTerm::Kind kind) {
    auto t = std::make_unique<CpsTerm>();
    t->kind = kind;
    return t;
}

CpsTermPtr clone_term(const CpsTerm& t) {
    auto c = std::make_unique<CpsTerm>();
    c->kind = t.kind;
    c->dst = t.dst;
    c->rhs = t.rhs;
    c->prim = t.prim;
    c->index = t.index;
    c->reify_cont = t.reify_cont;
    c->atoms = t.atoms;
    for (const CpsFun& f : t.funs) {
        CpsFun g;
        g.name = f.name;
        g.params = f.params;
        g.kparam = f.kparam;
        g.body = clone_term(*f.body);
        c->funs.push_back(std::move(g));
    }
    c->cont = t.cont;
    c->cparams = t.cparams;
    c->administrative = t.administrative;
    if (t.cont_body) c->cont_body = clone_term(*t.cont_body);
    c->fn = t.fn;
    c->retk = t.retk;
    if (t.body) c->body = clone_term(*t.body);
    if (t.body2) c->body2 = clone_term(*t.body2);
    return c;
}

namespace {

void print_atom(std::ostream& os, const Atom& a) {
    switch (a.kind) {
    case Atom::Kind::Var: os << a.var; break;
    case Atom::Kind::Int: os << a.i; break;
    case Atom::Kind::Float: {
        char buf[40];
        snprintf(buf, sizeof buf, "%.17g", a.f);
        os << buf;
        break;
    }
    case Atom::Kind::BuiltinSpawn: os << "@spawn"; break;
    case Atom::Kind::BuiltinYield: os << "@yield"; break;
    }
}

void print_atoms(std::ostream& os, const std::vector<Atom>& atoms) {
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << " ";
        print_atom(os, atoms[i]);
    }
}

void indent(std::ostream& os, int n) {
    for (int i = 0; i < n; ++i) os << "  ";
}

void print_term(std::ostream& os, const CpsTerm& t, int depth);

void print_fun(std::ostream& os, const CpsFun& f, int depth) {
    os << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i)
        os << (i ? " " : "") << f.params[i];
    os << "; " << f.kparam << ") =\n";
    indent(os, depth + 1);
    print_term(os, *f.body, depth + 1);
}

void print_term(std::ostream& os, const CpsTerm& t, int depth) {
    switch (t.kind) {
    case CpsTerm::Kind::LetVal:
        os << "letval " << t.dst << " = ";
        switch (t.rhs) {
        case CpsTerm::RhsKind::Const:
            print_atoms(os, t.atoms);
            break;
        case CpsTerm::RhsKind::Tuple:
            os << "(tuple ";
            print_atoms(os, t.atoms);
            os << ")";
            break;
        case CpsTerm::RhsKind::Select:
            os << "(select " << t.index << " ";
            print_atoms(os, t.atoms);
            os << ")";
            break;
        case CpsTerm::RhsKind::Prim:
            os << "(" << prim_op_name(t.prim) << " ";
            print_atoms(os, t.atoms);
            os << ")";
            break;
        case CpsTerm::RhsKind::ReifyCont:
            os << "(reify " << t.reify_cont << ")";
            break;
        }
        os << " in\n";
        indent(os, depth);
        print_term(os, *t.body, depth);
        break;
    case CpsTerm::Kind::LetFuns:
        os << "letfun ";
        for (size_t i = 0; i < t.funs.size(); ++i) {
            if (i) {
                os << "\n";
                indent(os, depth);
                os << "and ";
            }
            print_fun(os, t.funs[i], depth);
        }
        os << "\n";
        indent(os, depth);
        os << "in\n";
        indent(os, depth);
        print_term(os, *t.body, depth);
        break;
    case CpsTerm::Kind::LetCont:
        os << "letcont" << (t.administrative ? "* " : " ") << t.cont << "(";
        for (size_t i = 0; i < t.cparams.size(); ++i)
            os << (i ? " " : "") << t.cparams[i];
        os << ") =\n";
        indent(os, depth + 1);
        print_term(os, *t.cont_body, depth + 1);
        os << "\n";
        indent(os, depth);
        os << "in\n";
        indent(os, depth);
        print_term(os, *t.body, depth);
        break;
    case CpsTerm::Kind::AppFun:
        os << "apply ";
        print_atom(os, t.fn);
        os << "(";
        print_atoms(os, t.atoms);
        os << ") -> " << t.retk;
        break;
    case CpsTerm::Kind::AppCont:
        os << "throw ";
        print_atom(os, t.fn);
        os << "(";
        print_atoms(os, t.atoms);
        os << ")";
        break;
    case CpsTerm::Kind::If:
        os << "if ";
        print_atom(os, t.fn);
        os << " then\n";
        indent(os, depth + 1);
        print_term(os, *t.body, depth + 1);
        os << "\n";
        indent(os, depth);
        os << "else\n";
        indent(os, depth + 1);
        print_term(os, *t.body2, depth + 1);
        break;
    case CpsTerm::Kind::Halt:
        os << "halt ";
        print_atom(os, t.fn);
        break;
    }
}

} // namespace

std::string cps_to_string(const CpsTerm& t) {
    std::ostringstream os;
    print_term(os, t, 0);
    os << "\n";
    return os.str();
}

std::string cps_fun_to_string(const CpsFun& f) {
    std::ostringstream os;
    os << "letfun ";
    print_fun(os, f, 0);
    os << "\n";
    return os.str();
}

namespace {

void atom_free(const Atom& a, std::set<std::string>& out,
               const std::set<std::string>& bound) {
    if (a.kind == Atom::Kind::Var && !bound.count(a.var)) out.insert(a.var);
}

// Names are globally unique after alpha renaming, so scope tracking can use
// plain insert/erase without shadow bookkeeping.
void free_rec(const CpsTerm& t, std::set<std::string>& out,
              std::set<std::string>& bound) {
    switch (t.kind) {
    case CpsTerm::Kind::LetVal: {
        for (const Atom& a : t.atoms) atom_free(a, out, bound);
        if (t.rhs == CpsTerm::RhsKind::ReifyCont && !bound.count(t.reify_cont))
            out.insert(t.reify_cont);
        bound.insert(t.dst);
        free_rec(*t.body, out, bound);
        break;
    }
    case CpsTerm::Kind::LetFuns: {
        for (const CpsFun& f : t.funs) bound.insert(f.name);
        for (const CpsFun& f : t.funs) {
            for (const std::string& p : f.params) bound.insert(p);
            bound.insert(f.kparam);
            free_rec(*f.body, out, bound);
        }
        free_rec(*t.body, out, bound);
        break;
    }
    case CpsTerm::Kind::LetCont: {
        for (const std::string& p : t.cparams) bound.insert(p);
        free_rec(*t.cont_body, out, bound);
        bound.insert(t.cont);
        free_rec(*t.body, out, bound);
        break;
    }
    case CpsTerm::Kind::AppFun:
        atom_free(t.fn, out, bound);
        for (const Atom& a : t.atoms) atom_free(a, out, bound);
        if (!bound.count(t.retk)) out.insert(t.retk);
        break;
    case CpsTerm::Kind::AppCont:
        atom_free(t.fn, out, bound);
        for (const Atom& a : t.atoms) atom_free(a, out, bound);
        break;
    case CpsTerm::Kind::If:
        atom_free(t.fn, out, bound);
        free_rec(*t.body, out, bound);
        free_rec(*t.body2, out, bound);
        break;
    case CpsTerm::Kind::Halt:
        atom_free(t.fn, out, bound);
        break;
    }
}

// ---- alpha equivalence ------------------------------------------------

struct AlphaCtx {
    std::map<std::string, std::string> fwd;

    void bind(const std::string& a, const std::string& b) { fwd[a] = b; }
    bool same(const std::string& a, const std::string& b) const {
        auto it = fwd.find(a);
        if (it != fwd.end()) return it->second == b;
        return a == b; // free names must match exactly
    }
};

bool alpha_atom(const Atom& a, const Atom& b, const AlphaCtx& ctx) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Atom::Kind::Var: return ctx.same(a.var, b.var);
    case Atom::Kind::Int: return a.i == b.i;
    case Atom::Kind::Float: return a.f == b.f;
    default: return true;
    }
}

bool alpha_term(const CpsTerm& a, const CpsTerm& b, AlphaCtx ctx);

bool alpha_fun(const CpsFun& a, const CpsFun& b, AlphaCtx ctx) {
    if (a.params.size() != b.params.size()) return false;
    for (size_t i = 0; i < a.params.size(); ++i) ctx.bind(a.params[i], b.params[i]);
    ctx.bind(a.kparam, b.kparam);
    return alpha_term(*a.body, *b.body, ctx);
}

bool alpha_term(const CpsTerm& a, const CpsTerm& b, AlphaCtx ctx) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case CpsTerm::Kind::LetVal: {
        if (a.rhs != b.rhs || a.prim != b.prim || a.index != b.index) return false;
        if (a.atoms.size() != b.atoms.size()) return false;
        for (size_t i = 0; i < a.atoms.size(); ++i)
            if (!alpha_atom(a.atoms[i], b.atoms[i], ctx)) return false;
        if (a.rhs == CpsTerm::RhsKind::ReifyCont &&
            !ctx.same(a.reify_cont, b.reify_cont))
            return false;
        ctx.bind(a.dst, b.dst);
        return alpha_term(*a.body, *b.body, ctx);
    }
    case CpsTerm::Kind::LetFuns: {
        if (a.funs.size() != b.funs.size()) return false;
        for (size_t i = 0; i < a.funs.size(); ++i)
            ctx.bind(a.funs[i].name, b.funs[i].name);
        for (size_t i = 0; i < a.funs.size(); ++i)
            if (!alpha_fun(a.funs[i], b.funs[i], ctx)) return false;
        return alpha_term(*a.body, *b.body, ctx);
    }
    case CpsTerm::Kind::LetCont: {
        if (a.cparams.size() != b.cparams.size()) return false;
        AlphaCtx inner = ctx;
        for (size_t i = 0; i < a.cparams.size(); ++i)
            inner.bind(a.cparams[i], b.cparams[i]);
        if (!alpha_term(*a.cont_body, *b.cont_body, inner)) return false;
        ctx.bind(a.cont, b.cont);
        return alpha_term(*a.body, *b.body, ctx);
    }
    case CpsTerm::Kind::AppFun: {
        if (!alpha_atom(a.fn, b.fn, ctx)) return false;
        if (!ctx.same(a.retk, b.retk)) return false;
        if (a.atoms.size() != b.atoms.size()) return false;
        for (size_t i = 0; i < a.atoms.size(); ++i)
            if (!alpha_atom(a.atoms[i], b.atoms[i], ctx)) return false;
        return true;
    }
    case CpsTerm::Kind::AppCont: {
        if (!alpha_atom(a.fn, b.fn, ctx)) return false;
        if (a.atoms.size() != b.atoms.size()) return false;
        for (size_t i = 0; i < a.atoms.size(); ++i)
            if (!alpha_atom(a.atoms[i], b.atoms[i], ctx)) return false;
        return true;
    }
    case CpsTerm::Kind::If:
        return alpha_atom(a.fn, b.fn, ctx) && alpha_term(*a.body, *b.body, ctx) &&
               alpha_term(*a.body2, *b.body2, ctx);
    case CpsTerm::Kind::Halt:
        return alpha_atom(a.fn, b.fn, ctx);
    }
    return false;
}

} // namespace

void cps_free_vars(const CpsTerm& t, std::set<std::string>& out,
                   std::set<std::string>& bound) {
    free_rec(t, out, bound);
}

bool cps_alpha_equal(const CpsFun& a, const CpsFun& b) {
    AlphaCtx ctx;
    ctx.bind(a.name, b.name);
    return alpha_fun(a, b, ctx);
}

} // namespace mml
