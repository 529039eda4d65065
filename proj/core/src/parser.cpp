#include "mml/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>

namespace mml {

namespace {

struct Token {
    enum class Kind { LParen, RParen, Int, Float, Symbol, End };
    Kind kind;
    SrcLoc loc;
    std::string text;
    int64_t int_val = 0;
    double float_val = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.loc = loc();
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        char c = text_[pos_];
        if (c == '(') {
            advance();
            t.kind = Token::Kind::LParen;
            return t;
        }
        if (c == ')') {
            advance();
            t.kind = Token::Kind::RParen;
            return t;
        }
        size_t start = pos_;
        while (pos_ < text_.size() && !is_delim(text_[pos_])) advance();
        t.text = std::string(text_.substr(start, pos_ - start));
        classify(t);
        return t;
    }

private:
    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
    }

    void classify(Token& t) {
        const std::string& s = t.text;
        // Numbers: optional sign, digits, optional fraction/exponent.
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            bool is_float = s.find('.') != std::string::npos ||
                            s.find('e') != std::string::npos ||
                            s.find('E') != std::string::npos;
            errno = 0;
            char* end = nullptr;
            if (is_float) {
                t.float_val = std::strtod(s.c_str(), &end);
                if (end == s.c_str() + s.size()) {
                    t.kind = Token::Kind::Float;
                    return;
                }
            } else {
                long long v = std::strtoll(s.c_str(), &end, 10);
                if (end == s.c_str() + s.size() && errno == 0) {
                    t.int_val = static_cast<int64_t>(v);
                    t.kind = Token::Kind::Int;
                    return;
                }
            }
            throw CompileError("parse", "malformed number '" + s + "'", t.loc);
        }
        t.kind = Token::Kind::Symbol;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SrcLoc loc() const { return {line_, col_}; }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::map<std::string, PrimOp>& prim_table() {
    static const std::map<std::string, PrimOp> table = {
        {"+", PrimOp::IAdd},   {"-", PrimOp::ISub},  {"*", PrimOp::IMul},
        {"/", PrimOp::IDiv},   {"<", PrimOp::ILt},   {"<=", PrimOp::ILe},
        {">", PrimOp::IGt},    {">=", PrimOp::IGe},  {"=", PrimOp::IEq},
        {"!=", PrimOp::INe},   {"+.", PrimOp::FAdd}, {"-.", PrimOp::FSub},
        {"*.", PrimOp::FMul},  {"/.", PrimOp::FDiv}, {"<.", PrimOp::FLt},
        {"<=.", PrimOp::FLe},  {">.", PrimOp::FGt},  {">=.", PrimOp::FGe},
        {"=.", PrimOp::FEq},   {"!=.", PrimOp::FNe}, {"print", PrimOp::Print},
    };
    return table;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { bump(); }

    Expr parse_program() {
        Expr e = parse_expr(/*top_level=*/true);
        if (cur_.kind != Token::Kind::End)
            throw CompileError("parse", "trailing input after expression", cur_.loc);
        return e;
    }

private:
    void bump() { cur_ = lexer_.next(); }

    Token expect(Token::Kind k, const char* what) {
        if (cur_.kind != k)
            throw CompileError("parse", std::string("expected ") + what, cur_.loc);
        Token t = cur_;
        bump();
        return t;
    }

    Expr parse_expr(bool top_level = false) {
        Expr e;
        e.loc = cur_.loc;
        switch (cur_.kind) {
        case Token::Kind::Int:
            e.kind = Expr::Kind::IntLit;
            e.int_val = cur_.int_val;
            bump();
            return e;
        case Token::Kind::Float:
            e.kind = Expr::Kind::FloatLit;
            e.float_val = cur_.float_val;
            bump();
            return e;
        case Token::Kind::Symbol:
            e.kind = Expr::Kind::Var;
            e.name = cur_.text;
            bump();
            return e;
        case Token::Kind::LParen:
            bump();
            return parse_form(e.loc, top_level);
        case Token::Kind::RParen:
            throw CompileError("parse", "unexpected ')'", cur_.loc);
        case Token::Kind::End:
            throw CompileError("parse", "unexpected end of input", cur_.loc);
        }
        throw CompileError("parse", "unreachable", cur_.loc);
    }

    Expr parse_form(SrcLoc loc, bool top_level) {
        Expr e;
        e.loc = loc;
        if (cur_.kind == Token::Kind::Symbol) {
            const std::string& head = cur_.text;
            if (head == "lambda") { bump(); return parse_lambda(loc); }
            if (head == "if") { bump(); return parse_fixed(loc, Expr::Kind::If, 3); }
            if (head == "let") { bump(); return parse_let(loc, Expr::Kind::Let); }
            if (head == "letrec") {
                if (!top_level)
                    throw CompileError("scope", "letrec is only permitted at top level", loc);
                bump();
                return parse_let(loc, Expr::Kind::Letrec);
            }
            if (head == "tuple") { bump(); return parse_variadic(loc, Expr::Kind::Tuple, 0); }
            if (head == "select") { bump(); return parse_select(loc); }
            if (head == "callcc") { bump(); return parse_fixed(loc, Expr::Kind::Callcc, 1); }
            if (head == "throw") { bump(); return parse_fixed(loc, Expr::Kind::Throw, 2); }
            if (head == "spawn") { bump(); return parse_fixed(loc, Expr::Kind::Spawn, 1); }
            if (head == "yield") { bump(); return parse_fixed(loc, Expr::Kind::Yield, 0); }
            auto it = prim_table().find(head);
            if (it != prim_table().end()) {
                bump();
                Expr p = parse_variadic(loc, Expr::Kind::Prim,
                                        it->second == PrimOp::Print ? 1 : 2);
                p.prim = it->second;
                size_t want = it->second == PrimOp::Print ? 1 : 2;
                if (p.sub.size() != want)
                    throw CompileError("parse", std::string("operator ") + head +
                                       " takes " + std::to_string(want) + " operands", loc);
                return p;
            }
        }
        // General application: (f arg ...)
        e.kind = Expr::Kind::Apply;
        e.sub.push_back(parse_expr());
        while (cur_.kind != Token::Kind::RParen)
            e.sub.push_back(parse_expr());
        bump();
        return e;
    }

    Expr parse_lambda(SrcLoc loc) {
        Expr e;
        e.loc = loc;
        e.kind = Expr::Kind::Lambda;
        expect(Token::Kind::LParen, "'(' before parameter list");
        while (cur_.kind == Token::Kind::Symbol) {
            e.params.push_back(cur_.text);
            bump();
        }
        expect(Token::Kind::RParen, "')' after parameter list");
        e.sub.push_back(parse_expr());
        expect(Token::Kind::RParen, "')' after lambda body");
        return e;
    }

    Expr parse_fixed(SrcLoc loc, Expr::Kind kind, size_t arity) {
        Expr e;
        e.loc = loc;
        e.kind = kind;
        for (size_t i = 0; i < arity; ++i) e.sub.push_back(parse_expr());
        expect(Token::Kind::RParen, "')'");
        return e;
    }

    Expr parse_variadic(SrcLoc loc, Expr::Kind kind, size_t min_arity) {
        Expr e;
        e.loc = loc;
        e.kind = kind;
        while (cur_.kind != Token::Kind::RParen)
            e.sub.push_back(parse_expr());
        if (e.sub.size() < min_arity)
            throw CompileError("parse", "too few operands", loc);
        bump();
        return e;
    }

    Expr parse_let(SrcLoc loc, Expr::Kind kind) {
        Expr e;
        e.loc = loc;
        e.kind = kind;
        expect(Token::Kind::LParen, "'(' before binding list");
        while (cur_.kind == Token::Kind::LParen) {
            bump();
            Token name = expect(Token::Kind::Symbol, "binding name");
            e.params.push_back(name.text);
            e.sub.push_back(parse_expr());
            expect(Token::Kind::RParen, "')' after binding");
        }
        expect(Token::Kind::RParen, "')' after binding list");
        e.sub.push_back(parse_expr());
        expect(Token::Kind::RParen, "')' after body");
        return e;
    }

    Expr parse_select(SrcLoc loc) {
        Expr e;
        e.loc = loc;
        e.kind = Expr::Kind::Select;
        if (cur_.kind != Token::Kind::Int || cur_.int_val < 0)
            throw CompileError("parse", "select index must be a non-negative integer literal",
                               cur_.loc);
        e.index = cur_.int_val;
        bump();
        e.sub.push_back(parse_expr());
        expect(Token::Kind::RParen, "')'");
        return e;
    }

    Lexer lexer_;
    Token cur_;
};

class ScopeChecker {
public:
    void check(const Expr& e, std::set<std::string>& scope) {
        switch (e.kind) {
        case Expr::Kind::Var:
            if (!scope.count(e.name))
                throw CompileError("scope", "unbound variable '" + e.name + "'", e.loc);
            break;
        case Expr::Kind::Lambda: {
            std::set<std::string> inner = scope;
            for (const std::string& p : e.params) inner.insert(p);
            check(e.sub[0], inner);
            break;
        }
        case Expr::Kind::Let: {
            std::set<std::string> inner = scope;
            for (size_t i = 0; i < e.params.size(); ++i) {
                check(e.sub[i], inner); // sequential (let*) scoping
                inner.insert(e.params[i]);
            }
            check(e.sub.back(), inner);
            break;
        }
        case Expr::Kind::Letrec: {
            std::set<std::string> inner = scope;
            for (const std::string& p : e.params) inner.insert(p);
            for (size_t i = 0; i < e.params.size(); ++i) {
                if (e.sub[i].kind != Expr::Kind::Lambda)
                    throw CompileError("scope", "letrec bindings must be lambdas",
                                       e.sub[i].loc);
                check(e.sub[i], inner);
            }
            check(e.sub.back(), inner);
            break;
        }
        default:
            for (const Expr& s : e.sub) check(s, scope);
            break;
        }
    }
};

} // namespace

Expr parse_source(std::string_view text) {
    Parser p(text);
    Expr e = p.parse_program();
    std::set<std::string> scope;
    ScopeChecker().check(e, scope);
    return e;
}

namespace {

class Renamer {
public:
    explicit Renamer(uint64_t& counter) : counter_(counter) {}

    Expr rename(const Expr& e, const std::map<std::string, std::string>& env) {
        Expr out = e;
        out.sub.clear();
        switch (e.kind) {
        case Expr::Kind::Var: {
            auto it = env.find(e.name);
            out.name = it != env.end() ? it->second : e.name;
            return out;
        }
        case Expr::Kind::Lambda: {
            std::map<std::string, std::string> inner = env;
            out.params.clear();
            for (const std::string& p : e.params) {
                std::string fresh = fresh_name(p);
                inner[p] = fresh;
                out.params.push_back(fresh);
            }
            out.sub.push_back(rename(e.sub[0], inner));
            return out;
        }
        case Expr::Kind::Let: {
            std::map<std::string, std::string> inner = env;
            out.params.clear();
            for (size_t i = 0; i < e.params.size(); ++i) {
                out.sub.push_back(rename(e.sub[i], inner));
                std::string fresh = fresh_name(e.params[i]);
                inner[e.params[i]] = fresh;
                out.params.push_back(fresh);
            }
            out.sub.push_back(rename(e.sub.back(), inner));
            return out;
        }
        case Expr::Kind::Letrec: {
            std::map<std::string, std::string> inner = env;
            out.params.clear();
            for (const std::string& p : e.params) {
                std::string fresh = fresh_name(p);
                inner[p] = fresh;
                out.params.push_back(fresh);
            }
            for (size_t i = 0; i < e.params.size(); ++i)
                out.sub.push_back(rename(e.sub[i], inner));
            out.sub.push_back(rename(e.sub.back(), inner));
            return out;
        }
        default:
            for (const Expr& s : e.sub) out.sub.push_back(rename(s, env));
            return out;
        }
    }

private:
    std::string fresh_name(const std::string& base) {
        // Strip any previous suffix so repeated renaming stays readable.
        std::string stem = base.substr(0, base.find('.'));
        return stem + "." + std::to_string(counter_++);
    }

    uint64_t& counter_;
};

} // namespace

Expr alpha_rename(const Expr& e, uint64_t& counter) {
    return Renamer(counter).rename(e, {});
}

} // namespace mml
