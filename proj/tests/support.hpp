#pragma once

#include <ostream>

#include "lepage/corpus.hpp"
#include "lepage/expr.hpp"
#include "lepage/parser.hpp"

namespace lepage::testing {

using lepage::RandomExpr;

inline Expr P(const char* s) { return parse(s); }

}  // namespace lepage::testing

namespace lepage {
inline void PrintTo(const Expr& e, std::ostream* os) { *os << to_string(e); }
}  // namespace lepage
