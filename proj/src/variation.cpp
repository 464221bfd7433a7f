#include "lepage/variation.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <Eigen/Dense>

#include "lepage/error.hpp"

namespace lepage {

namespace {

Expr S(Symbol s) { return Expr::sym(s); }

std::size_t z(int i) { return static_cast<std::size_t>(i); }

std::map<Symbol, Expr> y_to_w_base(int M) {
  std::map<Symbol, Expr> m;
  for (int K = 1; K <= M; ++K) m[Symbol::y(K)] = S(Symbol::w(K));
  return m;
}

AdaptedChart chart_of(const Frame& f, int M) { return AdaptedChart(JetChart(f.n, M - f.n), f.idx); }

/// Evaluates an x-expression at (x1, x2).
double at_xy(const Expr& e, double x, double y) {
  PointAssignment p;
  p.set(Symbol::x(1), x);
  p.set(Symbol::x(2), y);
  return eval(e, p);
}

}  // namespace

FieldSpec::FieldSpec(std::vector<Expr> components) : xi(std::move(components)) {
  if (xi.empty()) throw PreconditionError("vector field needs at least one component");
  for (const auto& c : xi)
    for (const auto& s : free_symbols(c))
      if (s.kind != SymKind::Y || s.i > xi.size())
        throw PreconditionError("vector field components may depend on y only, got " + s.name());
}

FieldSpec FieldSpec::constant(const std::vector<Rational>& c) {
  std::vector<Expr> v;
  for (const auto& r : c) v.emplace_back(r);
  return FieldSpec(v);
}

ProlongedField prolong_jet(const FieldSpec& xi, const JetChart& chart, int order) {
  if (xi.dim() != chart.M()) throw PreconditionError("vector field dimension does not match the chart");
  if (order != 1 && order != 2) throw UnsupportedOrder("jet prolongation order must be 1 or 2");
  JetChart c2(chart.n(), chart.m(), 2);
  ProlongedField pf{xi.xi, {}};
  for (int K = 1; K <= chart.M(); ++K) {
    const Expr& X = xi.xi[z(K - 1)];
    if (!X.is_zero()) pf.field[Symbol::y(K)] = X;
    for (int j = 1; j <= chart.n(); ++j) {
      Expr Xj = formal_derivative(X, j, c2);
      if (!Xj.is_zero()) pf.field[Symbol::y1(K, j)] = Xj;
      if (order < 2) continue;
      for (int l = j; l <= chart.n(); ++l) {
        Expr Xjl = formal_derivative(Xj, l, c2);
        if (!Xjl.is_zero()) pf.field[Symbol::y2(K, j, l)] = Xjl;
      }
    }
  }
  return pf;
}

ProlongedField prolong_grassmann(const FieldSpec& xi, const AdaptedChart& ac) {
  if (xi.dim() != ac.M()) throw PreconditionError("vector field dimension does not match the chart");
  auto sub = y_to_w_base(ac.M());
  std::vector<Expr> xw;
  for (const auto& c : xi.xi) xw.push_back(substitute(c, sub));
  ProlongedField pf{xw, {}};
  for (int K = 1; K <= ac.M(); ++K)
    if (!xw[z(K - 1)].is_zero()) pf.field[Symbol::w(K)] = xw[z(K - 1)];
  for (int s : ac.sigma())
    for (int i : ac.idx()) {
      Expr v = adapted_derivative(xw[z(s - 1)], i, ac);
      for (int p : ac.idx()) v -= S(Symbol::w1(s, p)) * adapted_derivative(xw[z(p - 1)], i, ac);
      if (!v.is_zero()) pf.field[Symbol::w1(s, i)] = v;
    }
  return pf;
}

NoetherResidual noether_residual(const FieldSpec& xi, const Form& eta, const EqualOptions& opts) {
  const Frame& f = eta.frame();
  if (!f.is_grassmann()) throw PreconditionError("Noether residual needs a Grassmann-mode form");
  AdaptedChart ac = chart_of(f, xi.dim());
  Form lie = lie_derivative(prolong_grassmann(xi, ac).field, eta);
  Form c = to_basis(lie, Basis::GrassContact);
  NoetherResidual res{Form(c.degree(), c.frame()), Form(c.degree(), Frame::grassmann(ac)), true, {}};
  Frame hf = res.horizontal.frame();
  for (const auto& [w, coef] : c.terms()) {
    bool contact = false;
    for (const auto& g : w) contact |= g.kind == CoKind::OMEGA_T;
    if (contact) continue;
    res.reduced.add(w, coef);
    // dw^sigma_i -> w^sigma_ij dw^j, with y2 symbols standing in for the
    // symmetric second-order Grassmann coordinates.
    Form prod = Form::scalar(coef, hf);
    for (const auto& g : w) {
      Form img(1, hf);
      if (g.kind == CoKind::DW) {
        img.add({g}, Expr(1));
      } else if (g.kind == CoKind::DW1) {
        for (int j : ac.idx()) img.add({Covector::dw(j)}, S(Symbol::y2(g.i, g.j, j)));
      } else {
        throw PreconditionError("unexpected generator in Grassmann contact basis");
      }
      prod = wedge(prod, img);
    }
    res.horizontal += prod;
  }
  res.detail = form_equal(res.horizontal, Form(res.horizontal.degree(), hf), opts);
  res.zero = res.detail.equal;
  return res;
}

Form noether_current(const FieldSpec& xi, const Form& W) {
  const Frame& f = W.frame();
  if (f.is_grassmann()) return contract(prolong_grassmann(xi, chart_of(f, xi.dim())).field, W);
  JetChart chart(f.n, xi.dim() - f.n);
  return contract(prolong_jet(xi, chart, 1).field, W);
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw PreconditionError("quadrature order must be positive");
  QuadratureRule q;
  for (int i = 1; i <= order; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.nodes.push_back(x);
    q.weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  return q;
}

namespace {

/// Composite rule on [a, b] as (node, weight) pairs.
std::vector<std::pair<double, double>> composite(double a, double b, int cells, const QuadratureRule& q) {
  std::vector<std::pair<double, double>> out;
  double h = (b - a) / cells;
  for (int c = 0; c < cells; ++c) {
    double mid = a + (c + 0.5) * h;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) out.emplace_back(mid + 0.5 * h * q.nodes[k], 0.5 * h * q.weights[k]);
  }
  return out;
}

}  // namespace

double integrate_rect(const std::function<double(double, double)>& f, const Rect& r, int cells, int order) {
  auto q = gauss_legendre(order);
  auto xs = composite(r.x0, r.x1, cells, q), ys = composite(r.y0, r.y1, cells, q);
  double s = 0;
  for (const auto& [y, wy] : ys)
    for (const auto& [x, wx] : xs) s += wx * wy * f(x, y);
  return s;
}

double integrate_region(const std::function<double(double, double)>& f, double y0, double y1,
                        const std::function<double(double)>& lo, const std::function<double(double)>& hi, int cells,
                        int order) {
  auto q = gauss_legendre(order);
  double s = 0;
  for (const auto& [y, wy] : composite(y0, y1, cells, q))
    for (const auto& [x, wx] : composite(lo(y), hi(y), cells, q)) s += wx * wy * f(x, y);
  return s;
}

double integrate_boundary(const std::function<double(double, double)>& a, const std::function<double(double, double)>& b,
                          const Rect& r, int cells, int order) {
  auto q = gauss_legendre(order);
  double s = 0;
  for (const auto& [x, w] : composite(r.x0, r.x1, cells, q)) s += w * (a(x, r.y0) - a(x, r.y1));
  for (const auto& [y, w] : composite(r.y0, r.y1, cells, q)) s += w * (b(r.x1, y) - b(r.x0, y));
  return s;
}

double action(const Lagrangian& lam, const Immersion& zeta, const Rect& r, int cells, int order) {
  if (lam.chart.n() != 2) throw PreconditionError("rectangle integrals need n = 2");
  Expr f = pullback_jet(lam.L * omega0(lam.frame()), zeta).get({Covector::dx(1), Covector::dx(2)});
  return integrate_rect([&](double x, double y) { return at_xy(f, x, y); }, r, cells, order);
}

FirstVariationReport first_variation_check(const HorizontalNForm& rho, const FieldSpec& xi, const Immersion& zeta,
                                           const Rect& omega, double tol, int cells, int order) {
  if (rho.chart.n() != 2) throw PreconditionError("first variation check is implemented for n = 2");
  if (xi.dim() != rho.chart.M() || static_cast<int>(zeta.components.size()) != rho.chart.M())
    throw PreconditionError("field or immersion dimension does not match the chart");
  Lagrangian lam = lagrangian_of(rho);
  Form W = fundamental_homogeneous(lam);
  auto X = prolong_jet(xi, lam.chart, 1).field;
  Expr lhs = pullback_jet(lie_derivative(X, W), zeta).get({Covector::dx(1), Covector::dx(2)});
  Form cur = pullback_jet(contract(X, W), zeta);
  Expr ca = cur.get({Covector::dx(1)}), cb = cur.get({Covector::dx(2)});
  auto jets = jet_prolongation(zeta, 2);
  auto E = euler_lagrange(lam);
  Expr el;
  for (int K = 1; K <= lam.chart.M(); ++K) el += substitute(E[z(K - 1)], jets) * substitute(xi.xi[z(K - 1)], jets);

  FirstVariationReport r;
  r.lhs = integrate_rect([&](double x, double y) { return at_xy(lhs, x, y); }, omega, cells, order);
  r.el_term = integrate_rect([&](double x, double y) { return at_xy(el, x, y); }, omega, cells, order);
  r.boundary = integrate_boundary([&](double x, double y) { return at_xy(ca, x, y); },
                                  [&](double x, double y) { return at_xy(cb, x, y); }, omega, cells, order);
  r.difference = std::abs(r.lhs - r.el_term - r.boundary);
  double scale = std::max({std::abs(r.lhs), std::abs(r.el_term), std::abs(r.boundary)});
  r.relative = r.difference == 0 ? 0 : r.difference / std::max(scale, 1e-300);
  r.pass = r.relative <= tol;
  return r;
}

FieldSpec AffineField::spec() const {
  std::vector<Expr> comps;
  for (std::size_t K = 0; K < b.size(); ++K) {
    Expr c(b[K]);
    for (std::size_t L = 0; L < b.size(); ++L)
      if (!A[K][L].is_zero()) c += Expr(A[K][L]) * S(Symbol::y(static_cast<int>(L) + 1));
    comps.push_back(c);
  }
  return FieldSpec(comps);
}

std::pair<std::vector<std::vector<double>>, std::vector<double>> AffineField::flow(double t) const {
  const int M = static_cast<int>(b.size());
  Eigen::MatrixXd a(M, M);
  Eigen::VectorXd bb(M);
  for (int K = 0; K < M; ++K) {
    bb(K) = b[z(K)].to_double();
    for (int L = 0; L < M; ++L) a(K, L) = A[z(K)][z(L)].to_double();
  }
  // E = sum (tA)^k/k!, c = sum t^k A^{k-1} b / k!
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(M, M), term = E;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(M), cterm = t * bb;
  for (int k = 1; k <= 30; ++k) {
    term = term * (t * a) / k;
    E += term;
    c += cterm;
    cterm = (t * a) * cterm / (k + 1);
  }
  std::vector<std::vector<double>> Ev(z(M), std::vector<double>(z(M)));
  std::vector<double> cv(z(M));
  for (int K = 0; K < M; ++K) {
    cv[z(K)] = c(K);
    for (int L = 0; L < M; ++L) Ev[z(K)][z(L)] = E(K, L);
  }
  return {Ev, cv};
}

namespace {

/// New w-coordinates from the image point y' and image velocities V' (M x n).
PointAssignment w_from_velocities(const Eigen::VectorXd& y, const Eigen::MatrixXd& V, const AdaptedChart& ac) {
  const int n = ac.n();
  Eigen::MatrixXd B(n, n);
  for (int a = 0; a < n; ++a) B.row(a) = V.row(ac.idx()[z(a)] - 1);
  if (std::abs(B.determinant()) < 1e-12) throw DomainError("image leaves the adapted chart");
  Eigen::MatrixXd Binv = B.inverse();
  PointAssignment out;
  for (int K = 1; K <= ac.M(); ++K) out.set(Symbol::w(K), y(K - 1));
  for (int s : ac.sigma()) {
    Eigen::RowVectorXd row = V.row(s - 1) * Binv;
    for (int a = 0; a < n; ++a) out.set(Symbol::w1(s, ac.idx()[z(a)]), row(a));
  }
  return out;
}

/// Point y and velocity matrix of the slice representative of a w-point.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> slice_of(const AdaptedChart& ac, const PointAssignment& w) {
  const int n = ac.n(), M = ac.M();
  Eigen::VectorXd y(M);
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(M, n);
  for (int K = 1; K <= M; ++K) y(K - 1) = w.at(Symbol::w(K));
  for (int a = 0; a < n; ++a) V(ac.idx()[z(a)] - 1, a) = 1;
  for (int s : ac.sigma())
    for (int a = 0; a < n; ++a) V(s - 1, a) = w.at(Symbol::w1(s, ac.idx()[z(a)]));
  return {y, V};
}

}  // namespace

PointAssignment grassmann_act(const std::vector<Expr>& alpha, const AdaptedChart& ac, const PointAssignment& w) {
  const int M = ac.M();
  if (static_cast<int>(alpha.size()) != M) throw PreconditionError("map has the wrong number of components");
  auto [y, V] = slice_of(ac, w);
  PointAssignment p;
  for (int K = 1; K <= M; ++K) p.set(Symbol::y(K), y(K - 1));
  Eigen::VectorXd ay(M);
  Eigen::MatrixXd J(M, M);
  for (int K = 1; K <= M; ++K) {
    ay(K - 1) = eval(alpha[z(K - 1)], p);
    for (int L = 1; L <= M; ++L) J(K - 1, L - 1) = eval(diff(alpha[z(K - 1)], Symbol::y(L)), p);
  }
  return w_from_velocities(ay, J * V, ac);
}

PointAssignment grassmann_act(const std::vector<std::vector<double>>& E, const std::vector<double>& c,
                              const AdaptedChart& ac, const PointAssignment& w) {
  const int M = ac.M();
  auto [y, V] = slice_of(ac, w);
  Eigen::MatrixXd e(M, M);
  Eigen::VectorXd cc(M);
  for (int K = 0; K < M; ++K) {
    cc(K) = c[z(K)];
    for (int L = 0; L < M; ++L) e(K, L) = E[z(K)][z(L)];
  }
  return w_from_velocities(e * y + cc, e * V, ac);
}

double flow_consistency_error(const AffineField& f, const AdaptedChart& ac, int samples, std::uint64_t seed,
                              double step) {
  auto field = prolong_grassmann(f.spec(), ac).field;
  auto [Ep, cp] = f.flow(step);
  auto [Em, cm] = f.flow(-step);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int t = 0; t < samples; ++t) {
    PointAssignment w;
    for (const auto& s : ac.w_symbols())
      if (s.kind == SymKind::W || !ac.in_idx(s.i)) w.set(s, u(rng));
    auto plus = grassmann_act(Ep, cp, ac, w), minus = grassmann_act(Em, cm, ac, w);
    for (const auto& [s, v] : plus.coords) {
      double fd = (v - minus.at(s)) / (2 * step);
      auto it = field.find(s);
      double exact = it == field.end() ? 0.0 : eval(it->second, w);
      worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  return worst;
}

double functoriality_error(const std::vector<Expr>& alpha, const Immersion& zeta, const AdaptedChart& ac,
                           const std::vector<PointAssignment>& xs) {
  std::map<Symbol, Expr> ysub;
  for (int K = 1; K <= ac.M(); ++K) ysub[Symbol::y(K)] = zeta.components[z(K - 1)];
  Immersion composed;
  for (const auto& a : alpha) composed.components.push_back(substitute(a, ysub));
  auto lhs = grassmann_prolongation(composed, ac);
  auto base = grassmann_prolongation(zeta, ac);
  double worst = 0;
  for (const auto& x : xs) {
    PointAssignment w;
    for (const auto& [s, e] : base) w.set(s, eval(e, x));
    PointAssignment rhs = grassmann_act(alpha, ac, w);
    for (const auto& [s, e] : lhs) worst = std::max(worst, std::abs(eval(e, x) - rhs.at(s)));
  }
  return worst;
}

}  // namespace lepage
