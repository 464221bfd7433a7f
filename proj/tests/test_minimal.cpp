#include <gtest/gtest.h>

#include <cmath>

#include "lepage/error.hpp"
#include "lepage/minimal.hpp"
#include "lepage/point.hpp"
#include "lepage/variation.hpp"
#include "support.hpp"

using namespace lepage;
using lepage::testing::P;

namespace {

double scherk(double x, double y) { return std::log(std::cos(x) / std::cos(y)); }

GridField boundary_of(const std::function<double(double, double)>& f, int N, double a = -1, double b = 1) {
  GridField g = GridField::sample(f, a, b, a, b, N, N);
  for (int j = 1; j < N - 1; ++j)
    for (int i = 1; i < N - 1; ++i) g.at(i, j) = 0;
  return g;
}

double max_error(const GridField& u, const std::function<double(double, double)>& f) {
  double m = 0;
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) m = std::max(m, std::abs(u.at(i, j) - f(u.x(i), u.y(j))));
  return m;
}

}  // namespace

TEST(MinimalLagrangian, Examples) {
  EXPECT_EQ(minimal_lagrangian(Metric::euclidean(2), 1).L, P("sqrt(y1_1^2 + y2_1^2)"));
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  std::map<Symbol, Expr> graph = {{Symbol::y1(1, 1), P("1")}, {Symbol::y1(1, 2), P("0")}, {Symbol::y1(2, 1), P("0")},
                                  {Symbol::y1(2, 2), P("1")}, {Symbol::y1(3, 1), P("x1")}, {Symbol::y1(3, 2), P("x2")}};
  EXPECT_TRUE(equal(substitute(lam.L, graph), P("sqrt(1 + x1^2 + x2^2)")).verdict == Verdict::Equal);
  EXPECT_TRUE(zermelo_residuals(lam.L, lam.chart).pass());
  EXPECT_THROW(minimal_lagrangian(Metric::euclidean(5), 4), PreconditionError);
  EXPECT_THROW(Metric({{P("1"), P("y1")}, {P("0"), P("1")}}), PreconditionError);
}

TEST(KrupkaForm, Examples) {
  auto k1 = krupka_form(Metric::euclidean(2), 1);
  Expr L = P("sqrt(y1_1^2 + y2_1^2)");
  Form expected = Form::one(Covector::dy(1), k1.rho.frame(), P("y1_1") * L.pow(-1)) +
                  Form::one(Covector::dy(2), k1.rho.frame(), P("y2_1") * L.pow(-1));
  EXPECT_TRUE(form_equal(k1.rho, expected).equal);
  for (int n : {1, 2}) {
    for (int M : {n + 1, n + 2}) {
      auto k = krupka_form(Metric::euclidean(M), n);
      EXPECT_TRUE(equal(lagrangian_of(k).L, minimal_lagrangian(Metric::euclidean(M), n).L).verdict == Verdict::Equal) << n << M;
      EXPECT_TRUE(is_lepage(k).yes) << n << M;
    }
  }
  // Coefficient (1/L) g g D on the sorted word dy1^dy2.
  auto k2 = krupka_form(Metric::euclidean(3), 2);
  Expr L2 = minimal_lagrangian(Metric::euclidean(3), 2).L;
  EXPECT_TRUE(equal(k2.rho.get({Covector::dy(1), Covector::dy(2)}), L2.pow(-1) * P("y1_1*y2_2 - y1_2*y2_1")).verdict == Verdict::Equal);
}

TEST(Coincidence, EuclideanAndCurvedMetrics) {
  for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    auto rep = verify_coincidence(Metric::euclidean(n + m), n);
    EXPECT_TRUE(rep.all_equal()) << n << m;
    EXPECT_EQ(rep.entries.size(), 3u);
  }
  auto curved = verify_coincidence(Metric::diagonal({P("exp(y1)"), P("1"), P("1")}), 2);
  EXPECT_TRUE(curved.all_equal());
  auto warped = verify_coincidence(Metric::diagonal({P("1"), P("1 + y1^2"), P("2 + sin(y3)")}), 2);
  EXPECT_TRUE(warped.all_equal());
}

TEST(GraphElResidual, ExactSolutions) {
  EXPECT_TRUE(is_zero_symbolic(graph_el_residual(P("3*x1 - 2*x2 + 5"))));
  EXPECT_TRUE(is_zero_symbolic(graph_el_residual(P("log(cos(x1)) - log(cos(x2))"))));
  Expr bowl = graph_el_residual(P("x1^2 + x2^2"));
  PointAssignment o;
  o.set(Symbol::x(1), 0);
  o.set(Symbol::x(2), 0);
  EXPECT_DOUBLE_EQ(eval(bowl, o), 4);
  Expr helicoid = graph_el_residual(P("atan(x2/x1)"));
  double worst = 0;
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b) {
      PointAssignment p;
      p.set(Symbol::x(1), 1 + a / 99.0);
      p.set(Symbol::x(2), 1 + b / 99.0);
      worst = std::max(worst, std::abs(eval(helicoid, p)));
    }
  EXPECT_LE(worst, 1e-8);
}

TEST(GraphElResidual, EulerLagrangeOnGraphs) {
  auto r = check_graph_el();
  EXPECT_TRUE(r.pass) << to_string(r.el[2]);
  EXPECT_TRUE(check_graph_el(P("x1^3 - x2*x1 + sin(x2)")).pass);
}

TEST(GridField, FiniteDifferences) {
  EXPECT_THROW(GridField(0, 1, 0, 1, 2, 5), PreconditionError);
  auto g = GridField::sample([](double x, double y) { return x * x + 3 * x * y - y * y; }, 0, 1, 0, 2, 5, 9);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      EXPECT_NEAR(g.ux(i, j), 2 * g.x(i) + 3 * g.y(j), 1e-12);
      EXPECT_NEAR(g.uy(i, j), 3 * g.x(i) - 2 * g.y(j), 1e-12);
      if (!g.interior(i, j)) continue;
      EXPECT_NEAR(g.uxx(i, j), 2, 1e-10);
      EXPECT_NEAR(g.uxy(i, j), 3, 1e-10);
      EXPECT_NEAR(g.uyy(i, j), -2, 1e-10);
    }
  auto scherk_grid = GridField::sample(P("log(cos(x1)) - log(cos(x2))"), -1, 1, -1, 1, 9, 9);
  EXPECT_NEAR(scherk_grid.at(0, 4), scherk(-1, 0), 1e-15);
}

TEST(Solver, PlanarBoundary) {
  auto plane = [](double x, double y) { return 0.3 * x - 0.7 * y + 2; };
  auto rep = solve_minimal_surface(boundary_of(plane, 9));
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(max_error(rep.u, plane), 1e-12);
  EXPECT_LT(rep.residual, 1e-10);
}

TEST(Solver, ScherkConvergesAtSecondOrder) {
  std::vector<double> errs;
  for (int N : {17, 33, 65}) {
    auto rep = solve_minimal_surface(boundary_of(scherk, N));
    EXPECT_TRUE(rep.converged) << N;
    EXPECT_LE(rep.iterations, 12);
    EXPECT_LT(rep.residual, 1e-10);
    errs.push_back(max_error(rep.u, scherk));
  }
  for (std::size_t k = 1; k < errs.size(); ++k) EXPECT_GE(std::log2(errs[k - 1] / errs[k]), 1.9) << errs[k - 1] << " " << errs[k];
}

TEST(Solver, BowlBoundaryGivesDifferentInterior) {
  auto bowl = [](double x, double y) { return x * x + y * y; };
  auto rep = solve_minimal_surface(boundary_of(bowl, 17));
  EXPECT_TRUE(rep.converged);
  EXPECT_GT(max_error(rep.u, bowl), 0.1);
  EXPECT_GE(graph_el_residual(GridField::sample(bowl, -1, 1, -1, 1, 17, 17)).max_abs_interior(), 3);
  EXPECT_THROW(solve_minimal_surface(boundary_of(bowl, 5), 0), PreconditionError);
  EXPECT_FALSE(solve_minimal_surface(boundary_of(bowl, 17), 1e-10, 0).converged);
}

TEST(Conservation, Circulations) {
  auto plane = GridField::sample([](double x, double y) { return 2 * x + y; }, -1, 1, -1, 1, 9, 9);
  EXPECT_LT(conservation_residuals(plane).max_abs(), 1e-12);
  double prev = 0;
  for (int N : {17, 33, 65}) {
    auto s = conservation_residuals(GridField::sample(scherk, -1, 1, -1, 1, N, N));
    const double h = 2.0 / (N - 1);
    EXPECT_LE(s.max_abs(), 10 * h * h) << N;
    if (prev > 0) EXPECT_GT(prev / s.max_abs(), 2.4) << N;
    prev = s.max_abs();
    auto b = conservation_residuals(GridField::sample([](double x, double y) { return x * x + y * y; }, -1, 1, -1, 1, N, N));
    EXPECT_GT(b.max_abs(), 1);
  }
}

TEST(Reconstruction, EquivalenceGates) {
  auto plane = GridField::sample([](double x, double y) { return x - y / 2; }, -1, 1, -1, 1, 9, 9);
  auto rp = reconstruct_and_check(plane);
  EXPECT_TRUE(rp.pass);
  EXPECT_LT(rp.rovnice, 1e-12);

  auto sol = solve_minimal_surface(boundary_of(scherk, 65));
  auto rs = reconstruct_and_check(sol.u);
  EXPECT_TRUE(rs.pass) << rs.circulation << " " << rs.rovnice << " " << rs.el << " gate " << rs.gate;

  auto sampled = reconstruct_and_check(GridField::sample(scherk, -1, 1, -1, 1, 65, 65));
  EXPECT_LE(sampled.rovnice, sampled.gate);

  auto perturbed = GridField::sample([](double x, double y) { return scherk(x, y) + 0.1 * x * y; }, -1, 1, -1, 1, 65, 65);
  auto rq = reconstruct_and_check(perturbed);
  EXPECT_FALSE(rq.closed);
  EXPECT_FALSE(rq.pass);

  auto bowl = reconstruct_and_check(GridField::sample([](double x, double y) { return x * x + y * y; }, -1, 1, -1, 1, 65, 65));
  EXPECT_FALSE(bowl.closed);
  EXPECT_GT(bowl.rovnice, bowl.gate);
  EXPECT_GT(bowl.el, bowl.gate);
}

TEST(Conservation, NoetherCurrentsOnGraphs) {
  AdaptedChart ac(JetChart(2, 1), {1, 2});
  Form eta = to_grassmann(krupka_form(Metric::euclidean(3), 2).rho, ac);
  Immersion graph{{P("x1"), P("x2"), P("u(x1, x2)")}};
  Expr ux = diff(P("u(x1, x2)"), Symbol::x(1)), uy = diff(P("u(x1, x2)"), Symbol::x(2));
  Expr inv = sqrt(Expr(1) + ux * ux + uy * uy).pow(-1);
  Frame f = Frame::jet(2);
  auto one = [&](const Expr& a, const Expr& b) {
    return Form::one(Covector::dx(1), f, inv * a) + Form::one(Covector::dx(2), f, inv * b);
  };
  std::vector<Form> expected = {one(ux * uy, Expr(1) + uy * uy), one(-(Expr(1) + ux * ux), -(ux * uy)), one(-uy, ux)};
  for (int K = 1; K <= 3; ++K) {
    std::vector<Rational> c(3);
    c[static_cast<std::size_t>(K - 1)] = 1;
    auto got = pullback_grassmann(noether_current(FieldSpec::constant(c), eta), graph);
    EXPECT_TRUE(form_equal(got, expected[static_cast<std::size_t>(K - 1)]).equal) << K << " " << to_string(got);
  }
}
