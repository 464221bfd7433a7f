#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "lepage/expr.hpp"

namespace lepage {

/// Name resolution for the DSL. `symbol_ok` rejects coordinates outside the
/// declared chart; `arities` fixes opaque-function arity (first use declares).
struct ParseContext {
  std::function<bool(const Symbol&)> symbol_ok;
  std::map<std::string, int> arities;
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | factor
///   factor := atom ('^' '-'? int)?
///   atom   := number | ident | ident '(' expr-list ')' | '(' expr ')'
/// `sqrt`, `detN` (N*N entries, row-major) and sin/cos/tan/exp/log/atan are
/// reserved; `F__1_2(...)` is the formal partial of F in arguments 1 and 2.
Expr parse(std::string_view text, ParseContext& ctx);
inline Expr parse(std::string_view text, ParseContext&& ctx) { return parse(text, ctx); }
Expr parse(std::string_view text);

std::string to_string(const Expr& e);
std::string to_latex(const Expr& e);

}  // namespace lepage
