#include "lepage/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "lepage/error.hpp"

namespace lepage {

const Expr& DerivativeTable::get(std::vector<Symbol> vars) {
  std::sort(vars.begin(), vars.end());
  if (vars.empty()) return f_;
  if (auto it = memo_.find(vars); it != memo_.end()) return it->second;
  Symbol last = vars.back();
  vars.pop_back();
  Expr d = diff(get(vars), last);
  vars.push_back(last);
  return memo_.emplace(std::move(vars), std::move(d)).first->second;
}

const std::vector<SignedPermutation>& signed_permutations(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<SignedPermutation>> cache;
  std::lock_guard lock(mu);
  auto& out = cache[n];
  if (out.empty()) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    do {
      int inv = 0;
      for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b)
          if (p[a] > p[b]) ++inv;
      out.push_back({p, inv % 2 ? -1 : 1});
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return out;
}

bool ZermeloReport::pass() const { return first_failure() == nullptr; }

const ZermeloEntry* ZermeloReport::first_failure() const {
  for (const auto& e : entries)
    if (e.verdict.verdict != Verdict::Equal) return &e;
  return nullptr;
}

ZermeloReport zermelo_residuals(const Expr& F, const JetChart& chart, const EqualOptions& opts) {
  if (depends_on_kind(F, SymKind::Y2)) throw PreconditionError("Zermelo residuals need an order-1 function");
  const int n = chart.n();
  ZermeloReport rep;
  rep.n = n;
  for (int j = 1; j <= n; ++j) {
    for (int l = 1; l <= n; ++l) {
      Expr r;
      for (int K = 1; K <= chart.M(); ++K) r += diff(F, Symbol::y1(K, j)) * Expr::sym(Symbol::y1(K, l));
      if (j == l) r -= F;
      ZermeloEntry e{j, l, r, is_zero(r, opts)};
      rep.entries.push_back(std::move(e));
    }
  }
  return rep;
}

namespace {

GroupElement random_gl_plus(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    GroupElement a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i == j ? 1.0 : 0.0) + 0.3 * u(rng);
    if (determinant(a) > 0.1) return a;
  }
}

}  // namespace

EquivarianceResult check_equivariance(const Expr& F, const JetChart& chart, int trials, std::uint64_t seed,
                                      double tol) {
  if (trials < 1) throw PreconditionError("equivariance check needs trials >= 1");
  EquivarianceResult res;
  PointSampler sampler(seed);
  std::set<Symbol> syms = free_symbols(F);
  for (const auto& s : chart.jet1_symbols()) syms.insert(s);
  auto funcs = opaque_functions(F);
  const int attempts = trials * 20;
  for (int t = 0; t < attempts && res.evaluated < trials; ++t) {
    PointAssignment p = sampler.sample(syms, funcs);
    if (regular_blocks(p, chart).empty()) continue;
    GroupElement a = random_gl_plus(sampler.rng(), chart.n());
    PointAssignment q = gl_act(p, a, chart);
    double fp, fq;
    try {
      fp = eval(F, p);
      fq = eval(F, q);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(fp) || !std::isfinite(fq)) continue;
    ++res.evaluated;
    double rhs = determinant(a) * fp;
    if (!close(fq, rhs, tol)) {
      res.verdict = Verdict::Unequal;
      res.witness = p;
      res.group = a;
      res.lhs = fq;
      res.rhs = rhs;
      return res;
    }
  }
  res.verdict = res.evaluated ? Verdict::Equal : Verdict::Unknown;
  return res;
}

std::map<Symbol, Expr> grassmann_slice(const AdaptedChart& ac) {
  std::map<Symbol, Expr> s;
  const int n = ac.n();
  for (int K = 1; K <= ac.M(); ++K) s[Symbol::y(K)] = Expr::sym(Symbol::w(K));
  for (int a = 0; a < n; ++a)
    for (int j = 1; j <= n; ++j) s[Symbol::y1(ac.idx()[static_cast<std::size_t>(a)], j)] = Expr(a + 1 == j ? 1 : 0);
  for (int sg : ac.sigma())
    for (int j = 1; j <= n; ++j)
      s[Symbol::y1(sg, j)] = Expr::sym(Symbol::w1(sg, ac.idx()[static_cast<std::size_t>(j - 1)]));
  return s;
}

Expr grassmann_projection(const Expr& F, const AdaptedChart& ac, const EqualOptions& opts) {
  Expr fg = substitute(F, grassmann_slice(ac));
  auto maps = to_adapted(ac);
  Expr lifted = substitute(F, maps.y_to_w);
  std::vector<std::vector<Expr>> wm;
  for (int i : ac.idx()) {
    std::vector<Expr> row;
    for (int j = 1; j <= ac.n(); ++j) row.push_back(Expr::sym(Symbol::w1(i, j)));
    wm.push_back(std::move(row));
  }
  Expr dw = det(wm);
  EqualOptions o = opts;
  auto user = opts.guard;
  o.guard = [dw, user](const PointAssignment& p) { return eval(dw, p) > 1e-3 && (!user || user(p)); };
  auto r = equal(lifted, dw * fg, o);
  if (r.verdict != Verdict::Equal)
    throw PreconditionError("function does not factor as det(w^i_j) * F_G (not positive homogeneous)");
  return fg;
}

}  // namespace lepage
