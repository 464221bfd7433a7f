#include "lepage/lepage.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "lepage/error.hpp"

namespace lepage {

namespace {

Expr S(Symbol s) { return Expr::sym(s); }

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r = r * Rational(i);
  return r;
}

/// Calls f on every k-tuple over 1..M with pairwise distinct entries.
template <class Fn>
void distinct_tuples(int k, int M, Fn&& f) {
  std::vector<int> t;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(t.size()) == k) {
      f(t);
      return;
    }
    for (int K = 1; K <= M; ++K) {
      if (std::find(t.begin(), t.end(), K) != t.end()) continue;
      t.push_back(K);
      self(self);
      t.pop_back();
    }
  };
  rec(rec);
}

void require_order1(const Expr& L) {
  if (depends_on_kind(L, SymKind::Y2)) throw PreconditionError("Lagrangian must not depend on second jets");
  for (SymKind k : {SymKind::W, SymKind::W1, SymKind::Z, SymKind::A})
    if (depends_on_kind(L, k)) throw PreconditionError("Lagrangian must be expressed in jet coordinates");
}

void require_homogeneous(const Lagrangian& lam, const HomogeneityOptions& opts) {
  if (lam.L.is_zero()) throw PreconditionError("Lagrangian vanishes identically");
  if (opts.assume_homogeneous) return;
  auto rep = zermelo_residuals(lam.L, lam.chart, opts.eq);
  if (const auto* f = rep.first_failure())
    throw PreconditionError("Lagrangian is not positive homogeneous: Zermelo residual (" + std::to_string(f->j) +
                            "," + std::to_string(f->l) + ") = " + to_string(f->residual));
}

Expr minor_det(const std::vector<int>& K) {
  std::vector<std::vector<Expr>> m;
  for (int k : K) {
    std::vector<Expr> row;
    for (std::size_t j = 1; j <= K.size(); ++j) row.push_back(S(Symbol::y1(k, static_cast<int>(j))));
    m.push_back(std::move(row));
  }
  return det(m);
}

}  // namespace

Lagrangian::Lagrangian(JetChart c, Expr l) : chart(c), L(std::move(l)) {
  require_order1(L);
  for (const auto& s : free_symbols(L))
    if (!chart.contains(s)) throw PreconditionError("Lagrangian symbol " + s.name() + " is outside the chart");
}

Form poincare_cartan(const Lagrangian& lam) {
  Frame f = lam.frame(Basis::Contact);
  Form th = lam.L * omega0(f);
  for (int K = 1; K <= lam.chart.M(); ++K)
    for (int j = 1; j <= lam.chart.n(); ++j) {
      Expr c = diff(lam.L, Symbol::y1(K, j));
      if (!c.is_zero()) th += c * wedge(Form::one(Covector::omega(K), f), omega_j(j, f));
    }
  return th;
}

Form fundamental(const Lagrangian& lam) {
  const int n = lam.chart.n(), M = lam.chart.M();
  if (n > 4) throw PreconditionError("fundamental Lepage equivalent limited to n <= 4");
  Frame f = lam.frame(Basis::Contact);
  DerivativeTable T(lam.L);
  Form z(n, f);
  for (int k = 0; k <= n; ++k) {
    Expr w(Rational(1) / (factorial(n - k) * factorial(k) * factorial(k)));
    for (const auto& sp : signed_permutations(n)) {
      distinct_tuples(k, M, [&](const std::vector<int>& K) {
        std::vector<Symbol> vars;
        Word word;
        for (int a = 0; a < k; ++a) {
          vars.push_back(Symbol::y1(K[static_cast<std::size_t>(a)], sp.p[static_cast<std::size_t>(a)]));
          word.push_back(Covector::omega(K[static_cast<std::size_t>(a)]));
        }
        for (int a = k; a < n; ++a) word.push_back(Covector::dx(sp.p[static_cast<std::size_t>(a)]));
        const Expr& d = T.get(vars);
        if (!d.is_zero()) z.add(word, Expr(sp.sign) * w * d);
      });
    }
  }
  return z;
}

Form caratheodory(const Lagrangian& lam) {
  const int n = lam.chart.n(), M = lam.chart.M();
  if (lam.L.is_zero()) throw PreconditionError("Caratheodory form needs a nonvanishing Lagrangian");
  Frame f = lam.frame(Basis::Contact);
  Form r(n, f);
  // Each factor contributes dx^k or (1/L) dL/dy^K_k omega^K; c contact
  // choices carry L^{1-c}.
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int c = std::popcount(mask);
    Expr lp = c == 0 ? lam.L : c == 1 ? Expr(1) : lam.L.pow(1 - c);
    std::vector<int> Ks(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int k) -> void {
      if (k == n) {
        Word w;
        Expr coef = lp;
        for (int q = 1; q <= n; ++q) {
          if (mask & (1u << (q - 1))) {
            int K = Ks[static_cast<std::size_t>(q - 1)];
            w.push_back(Covector::omega(K));
            coef = coef * diff(lam.L, Symbol::y1(K, q));
          } else {
            w.push_back(Covector::dx(q));
          }
          if (coef.is_zero()) return;
        }
        r.add(w, coef);
        return;
      }
      if (!(mask & (1u << k))) return self(self, k + 1);
      for (int K = 1; K <= M; ++K) {
        Ks[static_cast<std::size_t>(k)] = K;
        self(self, k + 1);
      }
    };
    rec(rec, 0);
  }
  return r;
}

Form hilbert_caratheodory(const Lagrangian& lam, const HomogeneityOptions& opts) {
  require_homogeneous(lam, opts);
  const int n = lam.chart.n(), M = lam.chart.M();
  Frame f = lam.frame();
  Expr pre = Expr(Rational(1) / factorial(n)) * (n == 1 ? Expr(1) : lam.L.pow(1 - n));
  std::map<Symbol, Expr> dL;
  for (const auto& s : lam.chart.jet1_symbols()) dL[s] = diff(lam.L, s);
  Form r(n, f);
  for (const auto& sp : signed_permutations(n)) {
    distinct_tuples(n, M, [&](const std::vector<int>& K) {
      Expr c = Expr(sp.sign) * pre;
      Word w;
      for (int a = 0; a < n; ++a) {
        c = c * dL.at(Symbol::y1(K[static_cast<std::size_t>(a)], sp.p[static_cast<std::size_t>(a)]));
        if (c.is_zero()) return;
        w.push_back(Covector::dy(K[static_cast<std::size_t>(a)]));
      }
      r.add(w, c);
    });
  }
  return r;
}

Form fundamental_homogeneous(const Lagrangian& lam, const HomogeneityOptions& opts, bool verify) {
  require_homogeneous(lam, opts);
  const int n = lam.chart.n(), M = lam.chart.M();
  if (n > 4) throw PreconditionError("W form limited to n <= 4");
  Frame f = lam.frame();
  DerivativeTable T(lam.L);
  Expr pre(Rational(1) / (factorial(n) * factorial(n)));
  Form r(n, f);
  for (const auto& sp : signed_permutations(n)) {
    distinct_tuples(n, M, [&](const std::vector<int>& K) {
      std::vector<Symbol> vars;
      Word w;
      for (int a = 0; a < n; ++a) {
        vars.push_back(Symbol::y1(K[static_cast<std::size_t>(a)], sp.p[static_cast<std::size_t>(a)]));
        w.push_back(Covector::dy(K[static_cast<std::size_t>(a)]));
      }
      const Expr& d = T.get(vars);
      if (!d.is_zero()) r.add(w, Expr(sp.sign) * pre * d);
    });
  }
  if (verify) {
    auto eq = form_equal(r, fundamental(lam), opts.eq);
    if (!eq.equal) throw Error("W_lambda differs from Z_lambda for a homogeneous Lagrangian");
  }
  return r;
}

std::optional<LepageKind> lepage_kind_from_name(const std::string& s) {
  if (s == "pc") return LepageKind::PoincareCartan;
  if (s == "fundamental") return LepageKind::Fundamental;
  if (s == "caratheodory") return LepageKind::Caratheodory;
  if (s == "hc") return LepageKind::HilbertCaratheodory;
  if (s == "w") return LepageKind::W;
  return std::nullopt;
}

std::string to_string(LepageKind k) {
  switch (k) {
    case LepageKind::PoincareCartan: return "pc";
    case LepageKind::Fundamental: return "fundamental";
    case LepageKind::Caratheodory: return "caratheodory";
    case LepageKind::HilbertCaratheodory: return "hc";
    case LepageKind::W: return "w";
  }
  return "?";
}

Form construct(LepageKind k, const Lagrangian& lam, const HomogeneityOptions& opts) {
  switch (k) {
    case LepageKind::PoincareCartan: return poincare_cartan(lam);
    case LepageKind::Fundamental: return fundamental(lam);
    case LepageKind::Caratheodory: return caratheodory(lam);
    case LepageKind::HilbertCaratheodory: return hilbert_caratheodory(lam, opts);
    case LepageKind::W: return fundamental_homogeneous(lam, opts);
  }
  throw PreconditionError("unknown Lepage constructor");
}

HorizontalNForm::HorizontalNForm(JetChart c, Form f) : chart(c), rho(std::move(f)) {
  if (rho.frame().basis != Basis::Coordinate || rho.frame().n != chart.n())
    throw PreconditionError("horizontal n-form must be in the jet coordinate basis");
  if (rho.degree() != chart.n()) throw PreconditionError("horizontal form must have degree n");
  for (const auto& [w, a] : rho.terms()) {
    for (const auto& g : w)
      if (g.kind != CoKind::DY || g.i > chart.M()) throw PreconditionError("horizontal form may only contain dy^K");
    require_order1(a);
  }
}

HorizontalNForm HorizontalNForm::from_coefficients(const JetChart& c, const std::map<std::vector<int>, Expr>& A) {
  Form f(c.n(), Frame::jet(c.n()));
  for (const auto& [K, a] : A) {
    Word w;
    for (int k : K) w.push_back(Covector::dy(k));
    f.add(w, a);
  }
  return HorizontalNForm(c, f);
}

Lagrangian lagrangian_of(const HorizontalNForm& rho) {
  Expr L;
  for (const auto& [w, a] : rho.rho.terms()) {
    std::vector<int> K;
    for (const auto& g : w) K.push_back(g.i);
    L += a * minor_det(K);
  }
  return Lagrangian(rho.chart, L);
}

LepageCriterion is_lepage(const HorizontalNForm& rho, const EqualOptions& opts) {
  LepageCriterion res;
  for (int P = 1; P <= rho.chart.M(); ++P)
    for (int s = 1; s <= rho.chart.n(); ++s) {
      Symbol v = Symbol::y1(P, s);
      Expr r;
      for (const auto& [w, a] : rho.rho.terms()) {
        Expr da = diff(a, v);
        if (da.is_zero()) continue;
        std::vector<int> K;
        for (const auto& g : w) K.push_back(g.i);
        r += da * minor_det(K);
      }
      EqualResult e = is_zero(r, opts);
      if (e.verdict != Verdict::Equal) {
        res.yes = false;
        res.variable = v;
        res.residual = r;
        res.detail = e;
        return res;
      }
      res.detail = e;
    }
  return res;
}

std::vector<Expr> euler_lagrange(const Lagrangian& lam) {
  JetChart c2(lam.chart.n(), lam.chart.m(), 2);
  std::vector<Expr> E;
  for (int K = 1; K <= c2.M(); ++K) {
    Expr e = diff(lam.L, Symbol::y(K));
    for (int j = 1; j <= c2.n(); ++j) e -= formal_derivative(diff(lam.L, Symbol::y1(K, j)), j, c2);
    E.push_back(e);
  }
  return E;
}

ElFormCheck el_form_check(const HorizontalNForm& rho, const EqualOptions& opts) {
  auto crit = is_lepage(rho, opts);
  if (!crit.yes) throw PreconditionError("form fails the Lepage criterion at " + crit.variable->name());
  ElFormCheck res{true, contact_component(ext_d(rho.rho), 1), Form(rho.chart.n() + 1, Frame::jet(rho.chart.n(), Basis::Contact)), {}};
  auto E = euler_lagrange(lagrangian_of(rho));
  Frame f = res.expected.frame();
  for (int K = 1; K <= rho.chart.M(); ++K)
    if (!E[static_cast<std::size_t>(K - 1)].is_zero())
      res.expected += E[static_cast<std::size_t>(K - 1)] * wedge(Form::one(Covector::omega(K), f), omega0(f));
  res.detail = form_equal(res.p1_drho, res.expected, opts);
  res.pass = res.detail.equal;
  return res;
}

FormEqualResult check_horizontal_part(const Form& rho, const Lagrangian& lam, const EqualOptions& opts) {
  Form h = horizontalize(rho);
  return form_equal(h, lam.L * omega0(h.frame()), opts);
}

LepagePropertyResult check_lepage_property(const Form& rho, const JetChart& chart, int directions, std::uint64_t seed,
                                           const EqualOptions& opts) {
  LepagePropertyResult res;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-8, 8);
  Form drho = ext_d(rho);
  for (int t = 0; t < directions; ++t) {
    VectorField xi;
    for (const auto& s : chart.jet1_symbols()) {
      int v = num(rng);
      if (v) xi[s] = Expr(Rational(v, 4));
    }
    if (xi.empty()) xi[Symbol::y1(1, 1)] = Expr(1);
    Form h = horizontalize(contract(xi, drho));
    auto eq = form_equal(h, Form(h.degree(), h.frame()), opts);
    ++res.directions;
    if (!eq.equal) {
      res.pass = false;
      res.failing = xi;
      res.detail = eq;
      return res;
    }
    res.detail = eq;
  }
  return res;
}

}  // namespace lepage
