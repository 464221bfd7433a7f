#include "lepage/minimal.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "lepage/error.hpp"
#include "lepage/point.hpp"

namespace lepage {

namespace {

Expr S(Symbol s) { return Expr::sym(s); }

Expr minor_det(const std::vector<int>& K, int n) {
  std::vector<std::vector<Expr>> m;
  for (int k : K) {
    std::vector<Expr> row;
    for (int j = 1; j <= n; ++j) row.push_back(S(Symbol::y1(k, j)));
    m.push_back(std::move(row));
  }
  return det(m);
}

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

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

Metric::Metric(std::vector<std::vector<Expr>> m) : g(std::move(m)) {
  const std::size_t M = g.size();
  if (M == 0) throw PreconditionError("metric must be nonempty");
  for (const auto& row : g)
    if (row.size() != M) throw PreconditionError("metric must be square");
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) {
      if (!(g[a][b] == g[b][a])) throw PreconditionError("metric must be symmetric");
      for (const auto& s : free_symbols(g[a][b]))
        if (s.kind != SymKind::Y) throw PreconditionError("metric may depend on y only, got " + s.name());
    }
}

Metric Metric::euclidean(int M) {
  std::vector<std::vector<Expr>> m(static_cast<std::size_t>(M), std::vector<Expr>(static_cast<std::size_t>(M)));
  for (int K = 0; K < M; ++K) m[static_cast<std::size_t>(K)][static_cast<std::size_t>(K)] = Expr(1);
  return Metric(m);
}

Metric Metric::diagonal(const std::vector<Expr>& d) {
  std::vector<std::vector<Expr>> m(d.size(), std::vector<Expr>(d.size()));
  for (std::size_t K = 0; K < d.size(); ++K) m[K][K] = d[K];
  return Metric(m);
}

Lagrangian minimal_lagrangian(const Metric& g, int n) {
  if (n < 1 || n > 3) throw PreconditionError("minimal Lagrangian supports 1 <= n <= 3");
  const int M = g.dim();
  if (M <= n) throw PreconditionError("metric dimension must exceed n");
  std::vector<std::vector<Expr>> gram(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      Expr s;
      for (int K = 1; K <= M; ++K)
        for (int L = 1; L <= M; ++L) {
          const Expr& gkl = g.at(K, L);
          if (!gkl.is_zero()) s += gkl * S(Symbol::y1(K, j)) * S(Symbol::y1(L, k));
        }
      gram[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] = s;
    }
  return Lagrangian(JetChart(n, M - n), sqrt(det(gram)));
}

HorizontalNForm krupka_form(const Metric& g, int n) {
  Lagrangian lam = minimal_lagrangian(g, n);
  const int M = g.dim();
  Expr pre = Expr(Rational(1, factorial(n))) * lam.L.pow(-1);
  Form f(n, Frame::jet(n));
  distinct_tuples(n, M, [&](const std::vector<int>& K) {
    Word w;
    for (int k : K) w.push_back(Covector::dy(k));
    Expr c;
    distinct_tuples(n, M, [&](const std::vector<int>& L) {
      Expr t(1);
      for (int a = 0; a < n; ++a) {
        t = t * g.at(K[static_cast<std::size_t>(a)], L[static_cast<std::size_t>(a)]);
        if (t.is_zero()) return;
      }
      c += t * minor_det(L, n);
    });
    if (!c.is_zero()) f.add(w, pre * c);
  });
  return HorizontalNForm(lam.chart, f);
}

bool CoincidenceReport::all_equal() const {
  for (const auto& e : entries)
    if (!e.result.equal) return false;
  return true;
}

CoincidenceReport verify_coincidence(const Metric& g, int n, const EqualOptions& opts) {
  Lagrangian lam = minimal_lagrangian(g, n);
  HomogeneityOptions ho{opts, false};
  Form W = fundamental_homogeneous(lam, ho);
  ho.assume_homogeneous = true;
  Form HC = hilbert_caratheodory(lam, ho);
  Form K = krupka_form(g, n).rho;
  CoincidenceReport rep;
  rep.entries.push_back({"W-HC", form_equal(W, HC, opts)});
  rep.entries.push_back({"W-krupka", form_equal(W, K, opts)});
  rep.entries.push_back({"HC-krupka", form_equal(HC, K, opts)});
  return rep;
}

Expr graph_el_residual(const Expr& u) {
  const Symbol x = Symbol::x(1), y = Symbol::x(2);
  Expr ux = diff(u, x), uy = diff(u, y);
  return (Expr(1) + uy * uy) * diff(ux, x) - Expr(2) * ux * uy * diff(ux, y) + (Expr(1) + ux * ux) * diff(uy, y);
}

GraphElCheck check_graph_el(const std::optional<Expr>& u, const EqualOptions& opts) {
  const Expr X = S(Symbol::x(1)), Y = S(Symbol::x(2));
  Expr uu = u ? *u : Expr::func("u", {X, Y});
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  auto sub = jet_prolongation(Immersion{{X, Y, uu}}, 2);
  GraphElCheck r;
  for (const auto& e : euler_lagrange(lam)) r.el.push_back(substitute(e, sub));
  r.mse = graph_el_residual(uu);
  Expr ux = diff(uu, Symbol::x(1)), uy = diff(uu, Symbol::x(2));
  r.factor = -sqrt(Expr(1) + ux * ux + uy * uy).pow(-3);
  r.proportional = equal(r.el[2], r.factor * r.mse, opts);
  r.tangential = equal(r.el[0] + ux * r.el[2], Expr(0), opts);
  if (r.tangential.verdict == Verdict::Equal) r.tangential = equal(r.el[1] + uy * r.el[2], Expr(0), opts);
  r.pass = r.proportional.verdict == Verdict::Equal && r.tangential.verdict == Verdict::Equal;
  return r;
}

GridField::GridField(double a_, double b_, double c_, double d_, int nx_, int ny_)
    : a(a_), b(b_), c(c_), d(d_), nx(nx_), ny(ny_) {
  if (nx < 3 || ny < 3) throw PreconditionError("grid must be at least 3 x 3");
  if (!(b > a) || !(d > c)) throw PreconditionError("grid rectangle must have positive extent");
  u.assign(static_cast<std::size_t>(nx * ny), 0.0);
}

GridField GridField::sample(const std::function<double(double, double)>& f, double a, double b, double c, double d,
                            int nx, int ny) {
  GridField g(a, b, c, d, nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.at(i, j) = f(g.x(i), g.y(j));
  return g;
}

GridField GridField::sample(const Expr& f, double a, double b, double c, double d, int nx, int ny) {
  return sample(
      [&](double x, double y) {
        PointAssignment p;
        p.set(Symbol::x(1), x);
        p.set(Symbol::x(2), y);
        return eval(f, p);
      },
      a, b, c, d, nx, ny);
}

double GridField::max_abs_interior() const {
  double m = 0;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) m = std::max(m, std::abs(at(i, j)));
  return m;
}

double GridField::ux(int i, int j) const {
  const double h2 = 2 * hx();
  if (i == 0) return (-3 * at(0, j) + 4 * at(1, j) - at(2, j)) / h2;
  if (i == nx - 1) return (3 * at(i, j) - 4 * at(i - 1, j) + at(i - 2, j)) / h2;
  return (at(i + 1, j) - at(i - 1, j)) / h2;
}

double GridField::uy(int i, int j) const {
  const double h2 = 2 * hy();
  if (j == 0) return (-3 * at(i, 0) + 4 * at(i, 1) - at(i, 2)) / h2;
  if (j == ny - 1) return (3 * at(i, j) - 4 * at(i, j - 1) + at(i, j - 2)) / h2;
  return (at(i, j + 1) - at(i, j - 1)) / h2;
}

double GridField::uxx(int i, int j) const { return (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (hx() * hx()); }
double GridField::uyy(int i, int j) const { return (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (hy() * hy()); }
double GridField::uxy(int i, int j) const {
  return (at(i + 1, j + 1) - at(i - 1, j + 1) - at(i + 1, j - 1) + at(i - 1, j - 1)) / (4 * hx() * hy());
}

namespace {

double mse_at(const GridField& u, int i, int j) {
  const double p = u.ux(i, j), q = u.uy(i, j);
  return (1 + q * q) * u.uxx(i, j) - 2 * p * q * u.uxy(i, j) + (1 + p * p) * u.uyy(i, j);
}

struct NewtonSystem {
  Eigen::SparseMatrix<double> J;
  Eigen::VectorXd F;
};

/// Residual and Jacobian at interior nodes; `linear` assembles the Laplacian.
NewtonSystem assemble(const GridField& u, bool linear) {
  const int nx = u.nx - 2, ny = u.ny - 2;
  const double hx = u.hx(), hy = u.hy();
  auto idx = [&](int i, int j) { return (j - 1) * nx + (i - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  NewtonSystem s;
  s.F.resize(nx * ny);
  for (int j = 1; j <= ny; ++j)
    for (int i = 1; i <= nx; ++i) {
      double p = 0, q = 0, A = 0, B = 0, cxy = 0;
      if (!linear) {
        p = u.ux(i, j);
        q = u.uy(i, j);
        A = -2 * q * u.uxy(i, j) + 2 * p * u.uyy(i, j);
        B = 2 * q * u.uxx(i, j) - 2 * p * u.uxy(i, j);
        cxy = -2 * p * q;
      }
      const double cxx = 1 + q * q, cyy = 1 + p * p;
      s.F[idx(i, j)] = linear ? u.uxx(i, j) + u.uyy(i, j) : mse_at(u, i, j);
      const int row = idx(i, j);
      auto put = [&](int ii, int jj, double v) {
        if (v != 0 && u.interior(ii, jj)) trip.emplace_back(row, idx(ii, jj), v);
      };
      put(i + 1, j, A / (2 * hx) + cxx / (hx * hx));
      put(i - 1, j, -A / (2 * hx) + cxx / (hx * hx));
      put(i, j + 1, B / (2 * hy) + cyy / (hy * hy));
      put(i, j - 1, -B / (2 * hy) + cyy / (hy * hy));
      put(i, j, -2 * cxx / (hx * hx) - 2 * cyy / (hy * hy));
      const double e = cxy / (4 * hx * hy);
      put(i + 1, j + 1, e);
      put(i - 1, j - 1, e);
      put(i - 1, j + 1, -e);
      put(i + 1, j - 1, -e);
    }
  s.J.resize(nx * ny, nx * ny);
  s.J.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& F) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(J);
  lu.factorize(J);
  if (lu.info() != Eigen::Success) throw Error("singular Jacobian in minimal-surface solver");
  Eigen::VectorXd dx = lu.solve(-F);
  if (lu.info() != Eigen::Success) throw Error("singular Jacobian in minimal-surface solver");
  return dx;
}

void apply(GridField& u, const Eigen::VectorXd& dx, double t) {
  const int nx = u.nx - 2;
  for (int j = 1; j < u.ny - 1; ++j)
    for (int i = 1; i < u.nx - 1; ++i) u.at(i, j) += t * dx[(j - 1) * nx + (i - 1)];
}

}  // namespace

GridField graph_el_residual(const GridField& u) {
  GridField r(u.a, u.b, u.c, u.d, u.nx, u.ny);
  for (int j = 1; j < u.ny - 1; ++j)
    for (int i = 1; i < u.nx - 1; ++i) r.at(i, j) = mse_at(u, i, j);
  return r;
}

SolveReport solve_minimal_surface(const GridField& boundary, double tol, int max_iter) {
  if (!(tol > 0)) throw PreconditionError("solver tolerance must be positive");
  SolveReport rep{boundary, 0, false, 0, {}};
  GridField& u = rep.u;
  for (int j = 1; j < u.ny - 1; ++j)
    for (int i = 1; i < u.nx - 1; ++i) u.at(i, j) = 0;
  auto lap = assemble(u, true);
  apply(u, solve_sparse(lap.J, lap.F), 1);
  rep.residual = graph_el_residual(u).max_abs_interior();
  rep.history.push_back(rep.residual);
  while (rep.residual >= tol && rep.iterations < max_iter) {
    auto sys = assemble(u, false);
    Eigen::VectorXd dx = solve_sparse(sys.J, sys.F);
    GridField base = u;
    double t = 1, r = 0;
    for (int k = 0; k < 20; ++k, t *= 0.5) {
      u = base;
      apply(u, dx, t);
      r = graph_el_residual(u).max_abs_interior();
      if (r < rep.residual) break;
    }
    ++rep.iterations;
    rep.residual = r;
    rep.history.push_back(r);
  }
  rep.converged = rep.residual < tol;
  return rep;
}

double CellGrid::max_abs() const {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double ConservationResiduals::max_abs() const {
  double m = 0;
  for (const auto& c : circulation) m = std::max(m, c.max_abs());
  return m;
}

namespace {

/// dx and dy coefficients of the three currents on the interior sub-grid,
/// where all first differences of u are central.
struct Currents {
  std::array<GridField, 3> P, Q;
};

Currents currents(const GridField& u) {
  if (u.nx < 4 || u.ny < 4) throw PreconditionError("conservation checks need at least a 4 x 4 grid");
  GridField z(u.x(1), u.x(u.nx - 2), u.y(1), u.y(u.ny - 2), u.nx - 2, u.ny - 2);
  Currents cu{{z, z, z}, {z, z, z}};
  for (int j = 0; j < z.ny; ++j)
    for (int i = 0; i < z.nx; ++i) {
      const double p = u.ux(i + 1, j + 1), q = u.uy(i + 1, j + 1), L = std::sqrt(1 + p * p + q * q);
      cu.P[0].at(i, j) = p * q / L;
      cu.Q[0].at(i, j) = (1 + q * q) / L;
      cu.P[1].at(i, j) = -(1 + p * p) / L;
      cu.Q[1].at(i, j) = -p * q / L;
      cu.P[2].at(i, j) = -q / L;
      cu.Q[2].at(i, j) = p / L;
    }
  return cu;
}

}  // namespace

ConservationResiduals conservation_residuals(const GridField& u) {
  Currents cu = currents(u);
  const GridField& grid = cu.P[0];
  const double hx = grid.hx(), hy = grid.hy();
  ConservationResiduals r;
  r.h2 = hx * hy;
  for (std::size_t k = 0; k < 3; ++k) {
    const GridField &P = cu.P[k], &Q = cu.Q[k];
    CellGrid& cg = r.circulation[k];
    cg.nx = grid.nx - 1;
    cg.ny = grid.ny - 1;
    for (int j = 0; j < cg.ny; ++j)
      for (int i = 0; i < cg.nx; ++i) {
        double circ = hx * (P.at(i, j) + P.at(i + 1, j) - P.at(i, j + 1) - P.at(i + 1, j + 1)) / 2 +
                      hy * (Q.at(i + 1, j) + Q.at(i + 1, j + 1) - Q.at(i, j) - Q.at(i, j + 1)) / 2;
        cg.v.push_back(circ / r.h2);
      }
  }
  return r;
}

ReconstructionReport reconstruct_and_check(const GridField& u, double gate_factor) {
  Currents cu = currents(u);
  const GridField& grid = cu.P[0];
  const double hx = grid.hx(), hy = grid.hy();
  std::array<GridField, 3> pot{grid, grid, grid};
  for (std::size_t k = 0; k < 3; ++k) {
    GridField& f = pot[k];
    f.at(0, 0) = 0;
    for (int i = 1; i < grid.nx; ++i) f.at(i, 0) = f.at(i - 1, 0) + hx * (cu.P[k].at(i - 1, 0) + cu.P[k].at(i, 0)) / 2;
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 1; j < grid.ny; ++j) f.at(i, j) = f.at(i, j - 1) + hy * (cu.Q[k].at(i, j - 1) + cu.Q[k].at(i, j)) / 2;
  }
  ReconstructionReport r{pot[0], pot[1], pot[2]};
  r.gate = gate_factor * u.hx() * u.hy();
  r.circulation = conservation_residuals(u).max_abs();
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i) {
      const double p = u.ux(i + 1, j + 1), q = u.uy(i + 1, j + 1);
      r.rovnice = std::max(r.rovnice, std::abs(p * r.f.ux(i, j) + q * r.g.ux(i, j) - r.h.ux(i, j)));
      r.rovnice = std::max(r.rovnice, std::abs(p * r.f.uy(i, j) + q * r.g.uy(i, j) - r.h.uy(i, j)));
    }
  r.el = graph_el_residual(u).max_abs_interior();
  r.closed = r.circulation <= r.gate;
  r.pass = r.closed && r.rovnice <= r.gate && r.el <= r.gate;
  return r;
}

}  // namespace lepage
