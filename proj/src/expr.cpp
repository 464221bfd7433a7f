#include "lepage/expr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "lepage/error.hpp"
#include "lepage/point.hpp"

namespace lepage {

struct Expr::Node {
  std::vector<Term> terms;
  std::uint64_t hash = 0;
  std::uint64_t symmask = 0;
  std::size_t size = 1;
};

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  v ^= v >> 31;
  return (h ^ v) * 0x100000001b3ULL + (h << 7);
}

std::uint64_t hash_str(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::uint64_t hash_rational(const Rational& r) {
  return mix(static_cast<std::uint64_t>(r.num()), static_cast<std::uint64_t>(r.den()));
}

std::atomic<std::size_t> g_node_cap{0};

std::size_t read_cap() {
  if (const char* env = std::getenv("LEPAGE_NODE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 20'000'000;
}

// ---- atom interning ---------------------------------------------------------

std::mutex g_intern_mu;
std::unordered_multimap<std::uint64_t, std::weak_ptr<const AtomNode>> g_intern;
std::size_t g_intern_inserts = 0;

bool atom_equal(const AtomNode& a, const AtomNode& b);

Atom intern(AtomNode&& node) {
  std::lock_guard<std::mutex> lock(g_intern_mu);
  auto range = g_intern.equal_range(node.hash);
  for (auto it = range.first; it != range.second; ++it) {
    if (auto sp = it->second.lock()) {
      if (atom_equal(*sp, node)) return sp;
    }
  }
  auto sp = std::make_shared<const AtomNode>(std::move(node));
  g_intern.emplace(sp->hash, sp);
  if (++g_intern_inserts % 65536 == 0) {
    for (auto it = g_intern.begin(); it != g_intern.end();) {
      if (it->second.expired())
        it = g_intern.erase(it);
      else
        ++it;
    }
  }
  return sp;
}

}  // namespace

struct ExprAccess {
  static const Expr::Node& node(const Expr& e) { return *e.node_; }

  static Expr make(std::vector<Term>&& terms) {
    auto n = std::make_shared<Expr::Node>();
    std::uint64_t h = 0x51ed270b27b4a3e9ULL;
    std::uint64_t mask = 0;
    std::size_t size = 1;
    for (const auto& t : terms) {
      h = mix(h, hash_rational(t.coef));
      size += 1;
      for (const auto& f : t.mono) {
        h = mix(mix(h, f.atom->hash), static_cast<std::uint64_t>(f.exp));
        mask |= f.atom->symmask;
        size += f.atom->size;
      }
    }
    if (size > node_cap())
      throw ExprSizeError("expression size " + std::to_string(size) + " exceeds node cap " +
                          std::to_string(node_cap()));
    n->terms = std::move(terms);
    n->hash = h;
    n->symmask = mask;
    n->size = size;
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
  }

  static const std::shared_ptr<const Expr::Node>& zero_node() {
    static const std::shared_ptr<const Expr::Node> z = [] {
      auto n = std::make_shared<Expr::Node>();
      n->hash = 0x51ed270b27b4a3e9ULL;
      return std::shared_ptr<const Expr::Node>(n);
    }();
    return z;
  }
};

thread_local std::size_t t_scoped_cap = 0;

std::size_t node_cap() {
  std::size_t c = g_node_cap.load(std::memory_order_relaxed);
  if (c == 0) {
    c = read_cap();
    g_node_cap.store(c, std::memory_order_relaxed);
  }
  return t_scoped_cap && t_scoped_cap < c ? t_scoped_cap : c;
}

ScopedNodeCap::ScopedNodeCap(std::size_t cap) : prev_(t_scoped_cap) { t_scoped_cap = cap; }
ScopedNodeCap::~ScopedNodeCap() { t_scoped_cap = prev_; }

void set_node_cap(std::size_t cap) { g_node_cap.store(cap == 0 ? read_cap() : cap); }

std::uint64_t symbol_bit(Symbol s) { return 1ULL << (mix(0, s.hash()) % 64); }

// ---- ordering -----------------------------------------------------------------

namespace {

int cmp_int(long a, long b) { return (a > b) - (a < b); }

int cmp_atom_ptr(const Atom& a, const Atom& b) {
  if (a.get() == b.get()) return 0;
  return compare(*a, *b);
}

int cmp_mono(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp_atom_ptr(a[i].atom, b[i].atom)) return c;
    if (int c = cmp_int(a[i].exp, b[i].exp)) return c;
  }
  return cmp_int(static_cast<long>(a.size()), static_cast<long>(b.size()));
}

bool atom_equal(const AtomNode& a, const AtomNode& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  return compare(a, b) == 0;
}

}  // namespace

int compare(const AtomNode& a, const AtomNode& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return cmp_int(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case AtomKind::Symbol: {
      auto c = a.sym <=> b.sym;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case AtomKind::Func: {
      if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
      if (a.derivs != b.derivs) return a.derivs < b.derivs ? -1 : 1;
      if (a.args.size() != b.args.size())
        return cmp_int(static_cast<long>(a.args.size()), static_cast<long>(b.args.size()));
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
      return 0;
    }
    case AtomKind::Sqrt:
    case AtomKind::Sum:
      return compare(a.base(), b.base());
  }
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  const auto& na = ExprAccess::node(a);
  const auto& nb = ExprAccess::node(b);
  if (&na == &nb) return 0;
  std::size_t n = std::min(na.terms.size(), nb.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp_mono(na.terms[i].mono, nb.terms[i].mono)) return c;
    if (int c = compare(na.terms[i].coef, nb.terms[i].coef)) return c;
  }
  return cmp_int(static_cast<long>(na.terms.size()), static_cast<long>(nb.terms.size()));
}

bool operator==(const Expr& a, const Expr& b) {
  const auto& na = ExprAccess::node(a);
  const auto& nb = ExprAccess::node(b);
  if (&na == &nb) return true;
  if (na.hash != nb.hash || na.terms.size() != nb.terms.size()) return false;
  return compare(a, b) == 0;
}

// ---- construction -------------------------------------------------------------

namespace {

Atom make_symbol_atom(Symbol s) {
  AtomNode n;
  n.kind = AtomKind::Symbol;
  n.sym = s;
  n.hash = mix(0x1111, s.hash());
  n.symmask = symbol_bit(s);
  return intern(std::move(n));
}

Atom make_base_atom(AtomKind kind, const Expr& base) {
  AtomNode n;
  n.kind = kind;
  n.args = {base};
  n.hash = mix(kind == AtomKind::Sqrt ? 0x2222 : 0x3333, base.hash());
  n.symmask = base.symmask();
  n.size = 1 + base.size();
  return intern(std::move(n));
}

Atom make_func_atom(const std::string& name, std::vector<Expr> args, std::vector<int> derivs) {
  AtomNode n;
  n.kind = AtomKind::Func;
  n.name = name;
  n.derivs = std::move(derivs);
  n.args = std::move(args);
  std::uint64_t h = mix(0x4444, hash_str(n.name));
  for (int d : n.derivs) h = mix(h, static_cast<std::uint64_t>(d));
  for (const auto& a : n.args) {
    h = mix(h, a.hash());
    n.symmask |= a.symmask();
    n.size += a.size();
  }
  n.hash = h;
  return intern(std::move(n));
}

Expr single(Rational c, Monomial m) {
  if (c.is_zero()) return Expr();
  std::vector<Term> t;
  t.push_back({c, std::move(m)});
  return ExprAccess::make(std::move(t));
}

/// Collects terms, then sorts and merges them.
class Acc {
 public:
  void add(const Rational& c, Monomial&& m) {
    if (!c.is_zero()) terms_.push_back({c, std::move(m)});
  }
  void add(const Expr& e, const Rational& scale = Rational(1)) {
    for (const auto& t : e.terms()) terms_.push_back({t.coef * scale, t.mono});
  }
  Expr finish() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return cmp_mono(a.mono, b.mono) < 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && cmp_mono(out.back().mono, t.mono) == 0) {
        out.back().coef += t.coef;
      } else {
        if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
    terms_.clear();
    if (out.empty()) return Expr();
    return ExprAccess::make(std::move(out));
  }

 private:
  std::vector<Term> terms_;
};

int floor_div2(int e) { return e >= 0 ? e / 2 : -((-e + 1) / 2); }

bool is_special(const Factor& f) {
  return (f.atom->kind == AtomKind::Sqrt && f.exp != 1) ||
         (f.atom->kind == AtomKind::Sum && f.exp > 0);
}

Expr make_product(const Rational& c, const Monomial& m);

/// Multiplies monomials by adding exponents. `special` reports factors that
/// need make_product (sqrt powers other than 1, positive Sum powers).
Monomial merge(const Monomial& a, const Monomial& b, bool& special, int b_scale = 1) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size())
      c = 1;
    else if (j == b.size())
      c = -1;
    else
      c = cmp_atom_ptr(a[i].atom, b[j].atom);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back({b[j].atom, b[j].exp * b_scale});
      ++j;
    } else {
      int e = a[i].exp + b[j].exp * b_scale;
      if (e != 0) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
    if (!out.empty() && is_special(out.back())) special = true;
  }
  return out;
}

Expr make_product(const Rational& c, const Monomial& m) {
  if (c.is_zero()) return Expr();
  Monomial clean;
  std::vector<Expr> extras;
  for (const auto& f : m) {
    if (f.exp == 0) continue;
    if (f.atom->kind == AtomKind::Sqrt && f.exp != 1) {
      int q = floor_div2(f.exp);
      int r = f.exp - 2 * q;
      if (r) clean.push_back({f.atom, 1});
      if (q) extras.push_back(f.atom->base().pow(q));
    } else if (f.atom->kind == AtomKind::Sum && f.exp > 0) {
      extras.push_back(f.atom->base().pow(f.exp));
    } else {
      clean.push_back(f);
    }
  }
  Expr r = single(c, std::move(clean));
  for (const auto& x : extras) r = r * x;
  return r;
}

Expr scale(const Expr& e, const Rational& c) {
  if (c.is_zero()) return Expr();
  if (c.is_one()) return e;
  std::vector<Term> t = e.terms();
  for (auto& x : t) x.coef = x.coef * c;
  return ExprAccess::make(std::move(t));
}

/// Returns min exponent per atom across terms (absent atoms count as 0), only
/// for atoms whose minimum is nonzero.
Monomial common_factor(const Expr& e) {
  const auto& terms = e.terms();
  Monomial acc = terms.front().mono;
  for (std::size_t t = 1; t < terms.size(); ++t) {
    const Monomial& m = terms[t].mono;
    Monomial next;
    std::size_t i = 0, j = 0;
    while (i < acc.size()) {
      int c = j == m.size() ? -1 : cmp_atom_ptr(acc[i].atom, m[j].atom);
      if (c < 0) {
        if (acc[i].exp < 0) next.push_back(acc[i]);
        ++i;
      } else if (c > 0) {
        if (m[j].exp < 0) next.push_back(m[j]);
        ++j;
      } else {
        int e2 = std::min(acc[i].exp, m[j].exp);
        if (acc[i].exp > 0 && m[j].exp > 0)
          next.push_back({acc[i].atom, e2});
        else if (e2 < 0)
          next.push_back({acc[i].atom, e2});
        ++i;
        ++j;
      }
    }
    for (; j < m.size(); ++j)
      if (m[j].exp < 0) next.push_back(m[j]);
    acc = std::move(next);
  }
  // atoms with negative exponent in only some terms: the minimum is still
  // that negative exponent, which the merge above keeps
  return acc;
}

Expr divide_monomial(const Expr& e, const Monomial& m) {
  Acc acc;
  for (const auto& t : e.terms()) {
    bool special = false;
    Monomial r = merge(t.mono, m, special, -1);
    if (special)
      acc.add(make_product(t.coef, r));
    else
      acc.add(t.coef, std::move(r));
  }
  return acc.finish();
}

Expr inverse_power(const Expr& e, int k) {
  // e = c * m0 * P with P primitive, polynomial in its atoms, leading coef 1
  Expr p = e;
  Monomial m0;
  for (int iter = 0; iter < 16; ++iter) {
    Monomial m = common_factor(p);
    if (m.empty()) break;
    bool special = false;
    m0 = merge(m0, m, special);
    p = divide_monomial(p, m);
    if (p.terms().size() == 1) break;
  }
  Monomial m0k = m0;
  for (auto& f : m0k) f.exp *= k;
  Expr pref = make_product(Rational(1), m0k);
  if (p.terms().size() == 1) return pref * p.pow(k);
  Rational c = p.terms().front().coef;
  p = scale(p, Rational(1) / c);
  Atom a = make_base_atom(AtomKind::Sum, p);
  return scale(pref, c.pow(k)) * single(Rational(1), {{a, k}});
}

}  // namespace

Expr::Expr() : node_(ExprAccess::zero_node()) {}

Expr::Expr(Rational c) : node_(ExprAccess::zero_node()) {
  if (!c.is_zero()) *this = single(c, {});
}

Expr Expr::sym(Symbol s) { return single(Rational(1), {{make_symbol_atom(s), 1}}); }

Expr Expr::from_terms(std::vector<Term> terms) {
  Acc acc;
  for (auto& t : terms) acc.add(make_product(t.coef, t.mono));
  return acc.finish();
}

const std::vector<Term>& Expr::terms() const { return node_->terms; }
bool Expr::is_zero() const { return node_->terms.empty(); }
bool Expr::is_constant() const {
  return node_->terms.empty() || (node_->terms.size() == 1 && node_->terms[0].mono.empty());
}
std::optional<Rational> Expr::constant_value() const {
  if (node_->terms.empty()) return Rational(0);
  if (is_constant()) return node_->terms[0].coef;
  return std::nullopt;
}
std::size_t Expr::size() const { return node_->size; }
std::uint64_t Expr::hash() const { return node_->hash; }
std::uint64_t Expr::symmask() const { return node_->symmask; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Acc acc;
  acc.add(a);
  acc.add(b);
  return acc.finish();
}

Expr Expr::operator-() const { return scale(*this, Rational(-1)); }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (auto c = a.constant_value()) return scale(b, *c);
  if (auto c = b.constant_value()) return scale(a, *c);
  Acc acc;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      bool special = false;
      Monomial m = merge(ta.mono, tb.mono, special);
      Rational c = ta.coef * tb.coef;
      if (special)
        acc.add(make_product(c, m));
      else
        acc.add(c, std::move(m));
    }
  }
  return acc.finish();
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.pow(-1); }

Expr Expr::pow(int k) const {
  if (k == 0) return Expr(1);
  if (k == 1) return *this;
  if (is_zero()) {
    if (k < 0) throw DomainError("division by zero expression");
    return Expr();
  }
  const auto& t = terms();
  if (t.size() == 1) {
    Monomial m = t[0].mono;
    for (auto& f : m) f.exp *= k;
    return make_product(t[0].coef.pow(k), m);
  }
  if (k < 0) return inverse_power(*this, k);
  Expr result(1), base = *this;
  unsigned e = static_cast<unsigned>(k);
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Expr sqrt(const Expr& e) {
  if (e.is_zero()) return Expr();
  const auto& t = e.terms();
  Rational lead = t.front().coef;
  Rational root;
  if (lead.sign() > 0 && lead.exact_sqrt(root)) {
    if (t.size() == 1 && t[0].mono.empty()) return Expr(root);
    Expr base = scale(e, Rational(1) / lead);
    if (root.is_one()) return single(Rational(1), {{make_base_atom(AtomKind::Sqrt, base), 1}});
    return single(root, {{make_base_atom(AtomKind::Sqrt, base), 1}});
  }
  return single(Rational(1), {{make_base_atom(AtomKind::Sqrt, e), 1}});
}

bool is_builtin_function(const std::string& name) {
  return name == "sin" || name == "cos" || name == "tan" || name == "exp" || name == "log" ||
         name == "atan";
}

Expr Expr::func(const std::string& name, std::vector<Expr> args, std::vector<int> derivs) {
  if (is_builtin_function(name)) {
    if (args.size() != 1) throw Error("function " + name + " takes one argument");
    if (!derivs.empty()) throw Error("builtin " + name + " has no formal partials");
    if (auto c = args[0].constant_value()) {
      if (c->is_zero()) {
        if (name == "cos" || name == "exp") return Expr(1);
        if (name != "log") return Expr();
      }
      if (name == "log" && c->is_one()) return Expr();
    }
  }
  std::sort(derivs.begin(), derivs.end());
  return single(Rational(1), {{make_func_atom(name, std::move(args), std::move(derivs)), 1}});
}

Expr normalize(const Expr& e) {
  if (e.size() > node_cap())
    throw ExprSizeError("expression size " + std::to_string(e.size()) + " exceeds node cap");
  return e;
}

// ---- differentiation ---------------------------------------------------------

namespace {

Expr atom_expr(const Atom& a) { return single(Rational(1), {{a, 1}}); }

class Differ {
 public:
  explicit Differ(Symbol s) : s_(s), bit_(symbol_bit(s)) {}

  Expr run(const Expr& e) {
    if (!(e.symmask() & bit_)) return Expr();
    auto it = expr_memo_.find(e.id());
    if (it != expr_memo_.end()) return it->second;
    Acc acc;
    for (const auto& t : e.terms()) {
      for (std::size_t i = 0; i < t.mono.size(); ++i) {
        const Factor& f = t.mono[i];
        if (!(f.atom->symmask & bit_)) continue;
        Expr da = atom(f.atom);
        if (da.is_zero()) continue;
        Monomial rest = t.mono;
        if (f.exp == 1)
          rest.erase(rest.begin() + static_cast<long>(i));
        else
          rest[i].exp -= 1;
        acc.add(single(t.coef * Rational(f.exp), std::move(rest)) * da);
      }
    }
    Expr r = acc.finish();
    expr_memo_.emplace(e.id(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  Symbol s_;
  std::uint64_t bit_;
  std::unordered_map<const void*, Expr> expr_memo_;
  std::unordered_map<const AtomNode*, Expr> atom_memo_;
  std::vector<Expr> keep_;

  Expr atom(const Atom& a) {
    auto it = atom_memo_.find(a.get());
    if (it != atom_memo_.end()) return it->second;
    Expr r = compute(a);
    atom_memo_.emplace(a.get(), r);
    return r;
  }

  Expr compute(const Atom& a) {
    switch (a->kind) {
      case AtomKind::Symbol:
        return a->sym == s_ ? Expr(1) : Expr();
      case AtomKind::Sqrt: {
        Expr db = run(a->base());
        if (db.is_zero()) return Expr();
        return Expr(Rational(1, 2)) * a->base().pow(-1) * atom_expr(a) * db;
      }
      case AtomKind::Sum:
        return run(a->base());
      case AtomKind::Func:
        break;
    }
    const auto& name = a->name;
    if (is_builtin_function(name)) {
      const Expr& u = a->args[0];
      Expr du = run(u);
      if (du.is_zero()) return Expr();
      if (name == "sin") return Expr::func("cos", {u}) * du;
      if (name == "cos") return -(Expr::func("sin", {u}) * du);
      if (name == "tan") return (Expr(1) + atom_expr(a).pow(2)) * du;
      if (name == "exp") return atom_expr(a) * du;
      if (name == "log") return u.pow(-1) * du;
      if (name == "atan") return (Expr(1) + u.pow(2)).pow(-1) * du;
    }
    Acc acc;
    for (std::size_t k = 0; k < a->args.size(); ++k) {
      Expr dk = run(a->args[k]);
      if (dk.is_zero()) continue;
      std::vector<int> d = a->derivs;
      d.push_back(static_cast<int>(k));
      acc.add(Expr::func(name, a->args, std::move(d)) * dk);
    }
    return acc.finish();
  }
};

class Substituter {
 public:
  explicit Substituter(const std::map<Symbol, Expr>& m) : map_(m) {
    for (const auto& kv : m) mask_ |= symbol_bit(kv.first);
  }

  Expr run(const Expr& e) {
    if (!(e.symmask() & mask_)) return e;
    auto it = memo_.find(e.id());
    if (it != memo_.end()) return it->second;
    Acc acc;
    for (const auto& t : e.terms()) {
      Monomial kept;
      Expr prod(1);
      for (const auto& f : t.mono) {
        if (!(f.atom->symmask & mask_)) {
          kept.push_back(f);
          continue;
        }
        prod = prod * atom(f.atom, f.exp);
      }
      acc.add(make_product(t.coef, kept) * prod);
    }
    Expr r = acc.finish();
    memo_.emplace(e.id(), r);
    keep_.push_back(e);
    return r;
  }

 private:
  const std::map<Symbol, Expr>& map_;
  std::uint64_t mask_ = 0;
  std::unordered_map<const void*, Expr> memo_;
  std::map<std::pair<const AtomNode*, int>, Expr> atom_memo_;
  std::vector<Expr> keep_;

  Expr atom(const Atom& a, int exp) {
    auto key = std::make_pair(a.get(), exp);
    auto it = atom_memo_.find(key);
    if (it != atom_memo_.end()) return it->second;
    Expr r;
    switch (a->kind) {
      case AtomKind::Symbol: {
        auto m = map_.find(a->sym);
        r = (m == map_.end() ? atom_expr(a) : m->second).pow(exp);
        break;
      }
      case AtomKind::Sqrt:
        r = sqrt(run(a->base())).pow(exp);
        break;
      case AtomKind::Sum:
        r = run(a->base()).pow(exp);
        break;
      case AtomKind::Func: {
        std::vector<Expr> args;
        args.reserve(a->args.size());
        for (const auto& x : a->args) args.push_back(run(x));
        r = Expr::func(a->name, std::move(args), a->derivs).pow(exp);
        break;
      }
    }
    atom_memo_.emplace(key, r);
    return r;
  }
};

void collect(const Expr& e, std::set<Symbol>* syms, std::set<FuncKey>* funcs,
             std::unordered_map<const AtomNode*, bool>& seen) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.mono) {
      if (!seen.emplace(f.atom.get(), true).second) continue;
      if (f.atom->kind == AtomKind::Symbol) {
        if (syms) syms->insert(f.atom->sym);
        continue;
      }
      if (f.atom->kind == AtomKind::Func && !is_builtin_function(f.atom->name) && funcs)
        funcs->insert(FuncKey{f.atom->name, f.atom->derivs});
      for (const auto& x : f.atom->args) collect(x, syms, funcs, seen);
    }
  }
}

}  // namespace

Expr diff(const Expr& e, Symbol s) {
  Differ d(s);
  return d.run(e);
}

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& map) {
  if (map.empty()) return e;
  Substituter s(map);
  return s.run(e);
}

Expr clear_denominators(const Expr& e) {
  Expr cur = e;
  for (int iter = 0; iter < 32 && !cur.is_zero(); ++iter) {
    // most negative exponent per atom
    std::vector<Factor> neg;
    for (const auto& t : cur.terms()) {
      for (const auto& f : t.mono) {
        if (f.exp >= 0) continue;
        auto it = std::find_if(neg.begin(), neg.end(),
                               [&](const Factor& g) { return g.atom.get() == f.atom.get(); });
        if (it == neg.end())
          neg.push_back(f);
        else
          it->exp = std::min(it->exp, f.exp);
      }
    }
    if (neg.empty()) return cur;
    std::sort(neg.begin(), neg.end(),
              [](const Factor& a, const Factor& b) { return cmp_atom_ptr(a.atom, b.atom) < 0; });
    Acc acc;
    for (const auto& t : cur.terms()) {
      bool special = false;
      Monomial m = merge(t.mono, neg, special, -1);
      if (special)
        acc.add(make_product(t.coef, m));
      else
        acc.add(t.coef, std::move(m));
    }
    cur = acc.finish();
  }
  return cur;
}

bool is_zero_symbolic(const Expr& e) { return e.is_zero() || clear_denominators(e).is_zero(); }

std::set<Symbol> free_symbols(const Expr& e) {
  std::set<Symbol> out;
  std::unordered_map<const AtomNode*, bool> seen;
  collect(e, &out, nullptr, seen);
  return out;
}

std::set<FuncKey> opaque_functions(const Expr& e) {
  std::set<FuncKey> out;
  std::unordered_map<const AtomNode*, bool> seen;
  collect(e, nullptr, &out, seen);
  return out;
}

bool depends_on(const Expr& e, Symbol s) {
  if (!(e.symmask() & symbol_bit(s))) return false;
  return free_symbols(e).count(s) != 0;
}

bool depends_on_kind(const Expr& e, SymKind k) {
  for (const auto& s : free_symbols(e))
    if (s.kind == k) return true;
  return false;
}

Expr det(const std::vector<std::vector<Expr>>& m) {
  std::size_t n = m.size();
  if (n == 0) return Expr(1);
  if (n > 4) throw PreconditionError("determinant limited to n <= 4");
  for (const auto& row : m)
    if (row.size() != n) throw PreconditionError("determinant of non-square matrix");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Expr sum;
  do {
    int inv = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inv;
    Expr p(inv % 2 ? -1 : 1);
    for (std::size_t r = 0; r < n && !p.is_zero(); ++r) p = p * m[r][static_cast<std::size_t>(perm[r])];
    sum += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

// ---- evaluation ----------------------------------------------------------------

double PointAssignment::at(Symbol s) const {
  auto it = coords.find(s);
  if (it == coords.end()) throw Error("missing value for symbol " + s.name());
  return it->second;
}

namespace {

class Evaluator {
 public:
  Evaluator(const PointAssignment& p, const EvalOptions& o) : p_(p), o_(o) {}

  double run(const Expr& e) {
    double sum = 0.0;
    for (const auto& t : e.terms()) {
      double v = t.coef.to_double();
      for (const auto& f : t.mono) {
        double a = atom(*f.atom);
        if (f.exp < 0 && std::abs(a) <= o_.singular_threshold)
          throw DomainError("singular denominator");
        v *= ipow(a, f.exp);
      }
      sum += v;
    }
    if (!std::isfinite(sum)) throw DomainError("non-finite value");
    return sum;
  }

 private:
  const PointAssignment& p_;
  const EvalOptions& o_;
  std::unordered_map<const AtomNode*, double> memo_;

  static double ipow(double a, int e) {
    if (e == 1) return a;
    if (e == 2) return a * a;
    if (e == -1) return 1.0 / a;
    return std::pow(a, e);
  }

  double atom(const AtomNode& a) {
    auto it = memo_.find(&a);
    if (it != memo_.end()) return it->second;
    double v = compute(a);
    memo_.emplace(&a, v);
    return v;
  }

  double compute(const AtomNode& a) {
    switch (a.kind) {
      case AtomKind::Symbol:
        return p_.at(a.sym);
      case AtomKind::Sqrt: {
        double b = run(a.base());
        if (b < 0) throw DomainError("negative sqrt argument");
        return std::sqrt(b);
      }
      case AtomKind::Sum:
        return run(a.base());
      case AtomKind::Func:
        break;
    }
    if (is_builtin_function(a.name)) {
      double u = run(a.args[0]);
      if (a.name == "sin") return std::sin(u);
      if (a.name == "cos") return std::cos(u);
      if (a.name == "tan") return std::tan(u);
      if (a.name == "exp") return std::exp(u);
      if (a.name == "atan") return std::atan(u);
      if (u <= 0) throw DomainError("log of non-positive argument");
      return std::log(u);
    }
    auto it = p_.funcs.find(FuncKey{a.name, a.derivs});
    if (it == p_.funcs.end()) throw Error("missing value for function " + a.name);
    return it->second;
  }
};

}  // namespace

double eval(const Expr& e, const PointAssignment& p, const EvalOptions& opts) {
  Evaluator ev(p, opts);
  return ev.run(e);
}

}  // namespace lepage
