#pragma once

#include <map>

#include "lepage/expr.hpp"

namespace lepage {

/// Numeric values for coordinates and for opaque functions (by name and
/// derivative multi-index; arguments are not consulted).
struct PointAssignment {
  std::map<Symbol, double> coords;
  std::map<FuncKey, double> funcs;

  void set(Symbol s, double v) { coords[s] = v; }
  double at(Symbol s) const;
  bool has(Symbol s) const { return coords.count(s) != 0; }
};

struct EvalOptions {
  /// Denominators with |value| <= threshold raise DomainError.
  double singular_threshold = 0.0;
};

double eval(const Expr& e, const PointAssignment& p, const EvalOptions& opts = {});

}  // namespace lepage
