#ifndef MML_PARSER_HPP
#define MML_PARSER_HPP

#include <string>
#include <string_view>

#include "mml/ast.hpp"

namespace mml {

/// Parses a program in the s-expression grammar (docs/grammar.md) and
/// scope-checks it. Throws CompileError (stage "parse" or "scope") on
/// syntax errors, unbound variables, non-literal select indexes, or a
/// letrec below top level.
Expr parse_source(std::string_view text);

/// Renames every binder to a globally fresh integer-suffixed name.
/// Later passes rely on global uniqueness. `counter` advances across
/// calls so separate expressions never share names.
Expr alpha_rename(const Expr& e, uint64_t& counter);

} // namespace mml

#endif
