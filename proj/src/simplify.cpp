#include <algorithm>
#include <optional>

#include "lepage/error.hpp"
#include "lepage/expr.hpp"

namespace lepage {

namespace {

using Exps = std::vector<std::pair<const AtomNode*, int>>;

bool atom_less(const AtomNode* a, const AtomNode* b) { return compare(*a, *b) < 0; }

Exps exps_of(const Monomial& m) {
  Exps e;
  for (const auto& f : m) e.emplace_back(f.atom.get(), f.exp);
  std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return atom_less(x.first, y.first); });
  return e;
}

/// Lex order with atoms ranked by `compare`.
int lex(const Exps& a, const Exps& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && atom_less(a[i].first, b[j].first))) return a[i].second > 0 ? 1 : -1;
    if (i == a.size() || atom_less(b[j].first, a[i].first)) return b[j].second > 0 ? -1 : 1;
    if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
    ++i;
    ++j;
  }
  return 0;
}

const Term& leading(const Expr& e) {
  const Term* best = &e.terms().front();
  Exps be = exps_of(best->mono);
  for (const auto& t : e.terms()) {
    Exps te = exps_of(t.mono);
    if (lex(te, be) > 0) {
      best = &t;
      be = std::move(te);
    }
  }
  return *best;
}

/// n / b when b divides n exactly in the polynomial ring over the atoms of b.
std::optional<Expr> exact_divide(const Expr& n, const Expr& b) {
  const Term& lb = leading(b);
  Exps lbe = exps_of(lb.mono);
  Expr rem = n, q;
  for (int iter = 0; iter < 4096 && !rem.is_zero(); ++iter) {
    const Term& lt = leading(rem);
    Monomial m = lt.mono;
    for (const auto& [atom, k] : lbe) {
      auto it = std::find_if(m.begin(), m.end(), [&](const Factor& f) { return f.atom.get() == atom; });
      if (it == m.end() || it->exp < k) return std::nullopt;
      it->exp -= k;
    }
    std::erase_if(m, [](const Factor& f) { return f.exp == 0; });
    Expr t = Expr::from_terms({Term{lt.coef / lb.coef, m}});
    q += t;
    rem -= t * b;
  }
  if (!rem.is_zero()) return std::nullopt;
  return q;
}

/// Cancels powers of the formal inverse `s` against its base where possible.
std::optional<Expr> reduce_inverse(const Expr& e, const Atom& s) {
  const Expr& b = s->base();
  int K = 0;
  for (const auto& t : e.terms())
    for (const auto& f : t.mono)
      if (f.atom.get() == s.get()) K = std::max(K, -f.exp);
  if (K == 0) return std::nullopt;
  Expr n;
  for (const auto& t : e.terms()) {
    int k = 0;
    Monomial rest;
    for (const auto& f : t.mono) {
      if (f.atom.get() == s.get())
        k = -f.exp;
      else
        rest.push_back(f);
    }
    n += Expr::from_terms({Term{t.coef, rest}}) * b.pow(K - k);
  }
  int cancelled = 0;
  while (cancelled < K) {
    auto q = exact_divide(n, b);
    if (!q) break;
    n = *q;
    ++cancelled;
  }
  if (cancelled == 0) return std::nullopt;
  return n * b.pow(-(K - cancelled));
}

}  // namespace

Expr simplify(const Expr& e) {
  try {
    ScopedNodeCap cap(20000);
    Expr cur = e;
    for (int pass = 0; pass < 8; ++pass) {
      std::vector<Atom> inverses;
      for (const auto& t : cur.terms())
        for (const auto& f : t.mono)
          if (f.atom->kind == AtomKind::Sum &&
              std::none_of(inverses.begin(), inverses.end(), [&](const Atom& a) { return a.get() == f.atom.get(); }))
            inverses.push_back(f.atom);
      bool changed = false;
      for (const auto& s : inverses)
        if (auto r = reduce_inverse(cur, s); r && r->size() <= cur.size()) {
          cur = *r;
          changed = true;
        }
      if (!changed) break;
    }
    return cur;
  } catch (const ExprSizeError&) {
    return e;
  }
}

}  // namespace lepage
