#include <gtest/gtest.h>

#include <random>

#include "lepage/charts.hpp"
#include "lepage/equality.hpp"
#include "lepage/error.hpp"
#include "support.hpp"

using namespace lepage;
using lepage::testing::P;

namespace {

PointAssignment random_jet(std::mt19937_64& rng, const JetChart& c) {
  std::uniform_real_distribution<double> u(-2, 2);
  PointAssignment p;
  for (auto& s : c.fiber_symbols()) p.set(s, u(rng));
  for (auto& s : c.jet1_symbols()) p.set(s, u(rng));
  return p;
}

GroupElement random_group(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    GroupElement a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& r : a)
      for (auto& v : r) v = u(rng);
    if (determinant(a) > 0.05) return a;
  }
}

}  // namespace

TEST(Charts, Validation) {
  EXPECT_THROW(JetChart(0, 1), PreconditionError);
  EXPECT_THROW(JetChart(1, 1, 3), UnsupportedOrder);
  EXPECT_THROW(AdaptedChart(JetChart(2, 1), {2, 1}), PreconditionError);
  EXPECT_THROW(AdaptedChart(JetChart(2, 1), {1}), PreconditionError);
  AdaptedChart ac(JetChart(2, 2), {1, 3});
  EXPECT_EQ(ac.sigma(), (std::vector<int>{2, 4}));
  EXPECT_EQ(JetChart(1, 1, 1).jet2_symbols().size(), 0u);
  EXPECT_EQ(JetChart(2, 1).jet2_symbols().size(), 9u);
}

TEST(Charts, ParseContextRejectsForeignSymbols) {
  JetChart c(2, 1);
  EXPECT_NO_THROW(parse("y3_2 + x2", c.parse_context()));
  EXPECT_THROW(parse("y4_1", c.parse_context()), ParseError);
  EXPECT_THROW(parse("x3", c.parse_context()), ParseError);
  AdaptedChart ac(c, {1, 2});
  EXPECT_NO_THROW(parse("w3_1 + w1_2", ac.parse_context()));
  EXPECT_THROW(parse("w3_3", ac.parse_context()), ParseError);
}

TEST(FormalDerivative, Examples) {
  JetChart c(2, 1);
  EXPECT_EQ(formal_derivative(P("y1"), 1, c), P("y1_1"));
  EXPECT_EQ(formal_derivative(P("y1_1"), 2, c), P("y1_12"));
  EXPECT_EQ(formal_derivative(P("g(y1)"), 1, c), P("g__1(y1)*y1_1"));
  EXPECT_EQ(formal_derivative(P("x1*y2"), 1, c), P("y2 + x1*y2_1"));
  EXPECT_THROW(formal_derivative(P("y1_11"), 1, c), UnsupportedOrder);
  EXPECT_THROW(formal_derivative(P("y1_1"), 1, JetChart(2, 1, 1)), UnsupportedOrder);
}

TEST(AdaptedDerivative, Examples) {
  AdaptedChart ac(JetChart(2, 1), {1, 2});
  EXPECT_EQ(adapted_derivative(P("w3"), 1, ac), P("w3_1"));
  EXPECT_EQ(adapted_derivative(P("w1"), 1, ac), Expr(1));
  Expr xi = P("h(w1,w2,w3)");
  Expr expect = P("h__2(w1,w2,w3) + w3_2*h__3(w1,w2,w3)");
  EXPECT_EQ(adapted_derivative(xi, 2, ac), expect);
  EXPECT_THROW(adapted_derivative(xi, 3, ac), PreconditionError);
}

TEST(ToAdapted, Examples) {
  AdaptedChart c1(JetChart(1, 1), {1});
  auto m1 = to_adapted(c1);
  EXPECT_EQ(m1.w_to_y.at(Symbol::w1(2, 1)), P("y2_1/y1_1"));

  AdaptedChart c2(JetChart(2, 1), {1, 2});
  auto m2 = to_adapted(c2);
  std::map<Symbol, Expr> id = {{Symbol::y1(1, 1), Expr(1)}, {Symbol::y1(1, 2), Expr()},
                               {Symbol::y1(2, 1), Expr()}, {Symbol::y1(2, 2), Expr(1)}};
  for (int i : {1, 2}) {
    Expr w = substitute(m2.w_to_y.at(Symbol::w1(3, i)), id);
    EXPECT_EQ(w, Expr::sym(Symbol::y1(3, i)));
  }
}

TEST(ToAdapted, RoundtripIsIdentity) {
  for (auto [n, m, sub] : {std::tuple{1, 2, std::vector<int>{2}}, std::tuple{2, 1, std::vector<int>{1, 3}},
                           std::tuple{2, 2, std::vector<int>{2, 4}}}) {
    AdaptedChart ac(JetChart(n, m), sub);
    auto maps = to_adapted(ac);
    for (const auto& s : ac.w_symbols()) {
      Expr back = substitute(maps.w_to_y.at(s), maps.y_to_w);
      EXPECT_TRUE(is_zero_symbolic(back - Expr::sym(s))) << s.name() << ": " << to_string(back);
    }
    for (const auto& s : ac.parent().jet1_symbols()) {
      Expr back = substitute(maps.y_to_w.at(s), maps.w_to_y);
      EXPECT_TRUE(is_zero_symbolic(back - Expr::sym(s))) << s.name();
    }
  }
}

TEST(ToAdapted, ZIdentity) {
  for (int n : {1, 2, 3}) {
    std::vector<int> sub;
    for (int a = 1; a <= n; ++a) sub.push_back(a + 1);
    AdaptedChart ac(JetChart(n, 1), sub);
    auto maps = to_adapted(ac);
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j) {
        Expr s;
        for (int i : sub) s += maps.z.at(Symbol::z(k, i)) * Expr::sym(Symbol::y1(i, j));
        EXPECT_TRUE(is_zero_symbolic(s - Expr(k == j ? 1 : 0))) << n << " " << k << " " << j;
      }
  }
}

TEST(ToAdapted, AdaptedDerivativeThroughFormalDerivatives) {
  JetChart c(2, 1);
  AdaptedChart ac(c, {1, 2});
  auto maps = to_adapted(ac);
  std::vector<Expr> fs = {P("y3"), P("y1*y3^2"), P("g(y1,y2,y3)"), P("sin(y2)*y3 + y1^3")};
  for (const auto& f : fs) {
    Expr fw = substitute(f, maps.y_to_w);
    for (int i : ac.idx()) {
      Expr lhs = substitute(adapted_derivative(fw, i, ac), maps.w_to_y);
      Expr rhs;
      for (int j = 1; j <= 2; ++j) rhs += maps.z.at(Symbol::z(j, i)) * formal_derivative(f, j, c);
      EXPECT_TRUE(is_zero_symbolic(lhs - rhs)) << to_string(f) << " i=" << i;
    }
  }
}

TEST(RegularBlocks, Examples) {
  JetChart c(1, 1);
  PointAssignment p;
  p.set(Symbol::y1(1, 1), 1);
  p.set(Symbol::y1(2, 1), 0);
  EXPECT_EQ(regular_blocks(p, c), (std::vector<std::vector<int>>{{1}}));
  p.set(Symbol::y1(1, 1), 0);
  EXPECT_TRUE(regular_blocks(p, c).empty());

  JetChart g(2, 1);
  PointAssignment q;
  q.set(Symbol::y1(1, 1), 1);
  q.set(Symbol::y1(1, 2), 0);
  q.set(Symbol::y1(2, 1), 0);
  q.set(Symbol::y1(2, 2), 1);
  q.set(Symbol::y1(3, 1), 0);
  q.set(Symbol::y1(3, 2), 0);
  auto blocks = regular_blocks(q, g);
  EXPECT_NE(std::find(blocks.begin(), blocks.end(), std::vector<int>{1, 2}), blocks.end());
  EXPECT_EQ(blocks.size(), 1u);
}

TEST(GlAct, Examples) {
  JetChart c(1, 1);
  PointAssignment p;
  p.set(Symbol::y(1), 0.3);
  p.set(Symbol::y1(1, 1), 1.5);
  p.set(Symbol::y1(2, 1), -0.5);
  auto same = gl_act(p, {{1.0}}, c);
  EXPECT_EQ(same.coords, p.coords);
  auto twice = gl_act(p, {{2.0}}, c);
  EXPECT_DOUBLE_EQ(twice.at(Symbol::y1(1, 1)), 3.0);
  EXPECT_DOUBLE_EQ(twice.at(Symbol::y1(2, 1)), -1.0);
  EXPECT_DOUBLE_EQ(twice.at(Symbol::y(1)), 0.3);
  EXPECT_THROW(gl_act(p, {{-1.0}}, c), PreconditionError);
}

TEST(GlAct, AdaptedCoordinatesInvariant) {
  std::mt19937_64 rng(7);
  for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}}) {
    JetChart c(n, m);
    for (const auto& sub : increasing_subsequences(n, c.M())) {
      AdaptedChart ac(c, sub);
      auto maps = to_adapted(ac);
      int done = 0;
      while (done < 200) {
        PointAssignment p = random_jet(rng, c);
        if (regular_blocks(p, c).size() != increasing_subsequences(n, c.M()).size()) continue;
        GroupElement a = random_group(rng, n);
        PointAssignment q = gl_act(p, a, c);
        for (const auto& s : ac.w_symbols()) {
          if (s.kind == SymKind::W1 && ac.in_idx(s.i)) continue;  // w^i_j transforms
          const Expr& e = maps.w_to_y.at(s);
          double before = eval(e, p), after = eval(e, q);
          EXPECT_NEAR(before, after, 1e-12 * std::max(1.0, std::abs(before))) << s.name();
        }
        ++done;
      }
    }
  }
}
