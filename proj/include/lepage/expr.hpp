#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lepage/rational.hpp"
#include "lepage/symbol.hpp"

namespace lepage {

class Expr;
struct AtomNode;
using Atom = std::shared_ptr<const AtomNode>;

/// Atom kinds, in canonical order. `Sum` is a multi-term primitive polynomial
/// that only ever appears with a negative exponent (a formal inverse).
enum class AtomKind : std::uint8_t { Symbol, Func, Sqrt, Sum };

struct Factor {
  Atom atom;
  int exp;
};
using Monomial = std::vector<Factor>;

struct Term {
  Rational coef;
  Monomial mono;
};

/// Identifies an opaque function together with its partial-derivative
/// multi-index (0-based argument positions, sorted).
struct FuncKey {
  std::string name;
  std::vector<int> derivs;
  auto operator<=>(const FuncKey&) const = default;
};

/// Immutable scalar expression kept in canonical form: a sorted sum of
/// rational multiples of monomials over atoms.
class Expr {
 public:
  Expr();
  Expr(Rational c);               // NOLINT(implicit)
  Expr(std::int64_t c) : Expr(Rational(c)) {}  // NOLINT(implicit)
  Expr(int c) : Expr(Rational(c)) {}           // NOLINT(implicit)

  static Expr sym(Symbol s);
  /// Builtins (sin, cos, tan, exp, log, atan) take one argument and no
  /// derivative index; any other name is an opaque function.
  static Expr func(const std::string& name, std::vector<Expr> args, std::vector<int> derivs = {});
  static Expr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const;
  bool is_zero() const;
  bool is_constant() const;
  std::optional<Rational> constant_value() const;
  std::size_t size() const;
  std::uint64_t hash() const;
  std::uint64_t symmask() const;
  const void* id() const { return node_.get(); }

  Expr pow(int k) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend struct ExprAccess;
};

struct AtomNode {
  AtomKind kind = AtomKind::Symbol;
  Symbol sym;
  std::string name;
  std::vector<int> derivs;
  std::vector<Expr> args;  // Func arguments; Sqrt/Sum keep their base in args[0]
  std::uint64_t hash = 0;
  std::uint64_t symmask = 0;
  std::size_t size = 1;

  const Expr& base() const { return args.front(); }
};

/// Total order on expressions; structural, deterministic across runs.
int compare(const Expr& a, const Expr& b);
int compare(const AtomNode& a, const AtomNode& b);

Expr sqrt(const Expr& e);
Expr diff(const Expr& e, Symbol s);
Expr substitute(const Expr& e, const std::map<Symbol, Expr>& map);
/// Re-checks canonical form and the node cap. Expressions are canonical by
/// construction, so this is idempotent.
Expr normalize(const Expr& e);
/// Multiplies by every atom that occurs with a negative exponent until none
/// remain. The result vanishes iff `e` does (away from singular points).
Expr clear_denominators(const Expr& e);
bool is_zero_symbolic(const Expr& e);
/// Cancels formal inverses against their bases where the division is exact.
/// Meant for display; the value is unchanged.
Expr simplify(const Expr& e);

std::set<Symbol> free_symbols(const Expr& e);
std::set<FuncKey> opaque_functions(const Expr& e);
bool depends_on(const Expr& e, Symbol s);
bool depends_on_kind(const Expr& e, SymKind k);

/// Determinant by Levi-Civita expansion (n <= 4).
Expr det(const std::vector<std::vector<Expr>>& m);
bool is_builtin_function(const std::string& name);

std::uint64_t symbol_bit(Symbol s);
std::size_t node_cap();
void set_node_cap(std::size_t cap);

/// Tightens the node cap for the current thread while in scope.
class ScopedNodeCap {
 public:
  explicit ScopedNodeCap(std::size_t cap);
  ~ScopedNodeCap();
  ScopedNodeCap(const ScopedNodeCap&) = delete;
  ScopedNodeCap& operator=(const ScopedNodeCap&) = delete;

 private:
  std::size_t prev_;
};

}  // namespace lepage
