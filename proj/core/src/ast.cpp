#include "mml/ast.hpp"

#include <sstream>

namespace mml {

const char* prim_op_name(PrimOp op) {
    switch (op) {
    case PrimOp::IAdd: return "+";
    case PrimOp::ISub: return "-";
    case PrimOp::IMul: return "*";
    case PrimOp::IDiv: return "/";
    case PrimOp::ILt:  return "<";
    case PrimOp::ILe:  return "<=";
    case PrimOp::IGt:  return ">";
    case PrimOp::IGe:  return ">=";
    case PrimOp::IEq:  return "=";
    case PrimOp::INe:  return "!=";
    case PrimOp::FAdd: return "+.";
    case PrimOp::FSub: return "-.";
    case PrimOp::FMul: return "*.";
    case PrimOp::FDiv: return "/.";
    case PrimOp::FLt:  return "<.";
    case PrimOp::FLe:  return "<=.";
    case PrimOp::FGt:  return ">.";
    case PrimOp::FGe:  return ">=.";
    case PrimOp::FEq:  return "=.";
    case PrimOp::FNe:  return "!=.";
    case PrimOp::Print: return "print";
    }
    return "?";
}

bool prim_is_float(PrimOp op) {
    switch (op) {
    case PrimOp::FAdd: case PrimOp::FSub: case PrimOp::FMul: case PrimOp::FDiv:
    case PrimOp::FLt: case PrimOp::FLe: case PrimOp::FGt: case PrimOp::FGe:
    case PrimOp::FEq: case PrimOp::FNe:
        return true;
    default:
        return false;
    }
}

bool prim_is_compare(PrimOp op) {
    switch (op) {
    case PrimOp::ILt: case PrimOp::ILe: case PrimOp::IGt: case PrimOp::IGe:
    case PrimOp::IEq: case PrimOp::INe:
    case PrimOp::FLt: case PrimOp::FLe: case PrimOp::FGt: case PrimOp::FGe:
    case PrimOp::FEq: case PrimOp::FNe:
        return true;
    default:
        return false;
    }
}

namespace {

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
        os << e.int_val;
        break;
    case Expr::Kind::FloatLit: {
        char buf[40];
        snprintf(buf, sizeof buf, "%.17g", e.float_val);
        os << buf;
        // Keep a float marker so the printer round-trips through the lexer.
        std::string s(buf);
        if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
            s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
            os << ".0";
        break;
    }
    case Expr::Kind::Var:
        os << e.name;
        break;
    case Expr::Kind::Lambda:
        os << "(lambda (";
        for (size_t i = 0; i < e.params.size(); ++i)
            os << (i ? " " : "") << e.params[i];
        os << ") ";
        print_expr(os, e.sub[0]);
        os << ")";
        break;
    case Expr::Kind::Apply:
        os << "(";
        for (size_t i = 0; i < e.sub.size(); ++i) {
            if (i) os << " ";
            print_expr(os, e.sub[i]);
        }
        os << ")";
        break;
    case Expr::Kind::Tuple:
        os << "(tuple";
        for (const Expr& s : e.sub) {
            os << " ";
            print_expr(os, s);
        }
        os << ")";
        break;
    case Expr::Kind::Select:
        os << "(select " << e.index << " ";
        print_expr(os, e.sub[0]);
        os << ")";
        break;
    case Expr::Kind::Prim:
        os << "(" << prim_op_name(e.prim);
        for (const Expr& s : e.sub) {
            os << " ";
            print_expr(os, s);
        }
        os << ")";
        break;
    case Expr::Kind::If:
        os << "(if ";
        print_expr(os, e.sub[0]);
        os << " ";
        print_expr(os, e.sub[1]);
        os << " ";
        print_expr(os, e.sub[2]);
        os << ")";
        break;
    case Expr::Kind::Let:
    case Expr::Kind::Letrec:
        os << (e.kind == Expr::Kind::Let ? "(let (" : "(letrec (");
        for (size_t i = 0; i < e.params.size(); ++i) {
            if (i) os << " ";
            os << "(" << e.params[i] << " ";
            print_expr(os, e.sub[i]);
            os << ")";
        }
        os << ") ";
        print_expr(os, e.sub.back());
        os << ")";
        break;
    case Expr::Kind::Callcc:
        os << "(callcc ";
        print_expr(os, e.sub[0]);
        os << ")";
        break;
    case Expr::Kind::Throw:
        os << "(throw ";
        print_expr(os, e.sub[0]);
        os << " ";
        print_expr(os, e.sub[1]);
        os << ")";
        break;
    case Expr::Kind::Spawn:
        os << "(spawn ";
        print_expr(os, e.sub[0]);
        os << ")";
        break;
    case Expr::Kind::Yield:
        os << "(yield)";
        break;
    }
}

} // namespace

std::string expr_to_string(const Expr& e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

} // namespace mml
