#include <gtest/gtest.h>

#include "lepage/error.hpp"
#include "lepage/homogeneity.hpp"
#include "lepage/minimal.hpp"
#include "support.hpp"

using namespace lepage;
using lepage::testing::P;

namespace {

bool symbolic(const EqualResult& r) { return r.verdict == Verdict::Equal && r.method != "numeric"; }

Expr S(Symbol s) { return Expr::sym(s); }

}  // namespace

TEST(Zermelo, Examples) {
  JetChart c1(1, 1);
  auto arc = zermelo_residuals(P("sqrt(y1_1^2 + y2_1^2)"), c1);
  ASSERT_EQ(arc.entries.size(), 1u);
  EXPECT_TRUE(symbolic(arc.entries[0].verdict)) << to_string(arc.entries[0].residual);

  auto lin = zermelo_residuals(P("y1_1 + 1"), c1);
  EXPECT_FALSE(lin.pass());
  EXPECT_EQ(lin.entries[0].residual, Expr(-1));
  ASSERT_TRUE(lin.entries[0].verdict.witness.has_value());

  auto sq = zermelo_residuals(P("y1_1^2"), c1);
  EXPECT_FALSE(sq.pass());
  EXPECT_EQ(sq.first_failure()->verdict.verdict, Verdict::Unequal);
  EXPECT_TRUE(sq.first_failure()->verdict.witness.has_value());
}

TEST(Zermelo, MinimalLagrangianSymbolicallyZero) {
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  auto rep = zermelo_residuals(lam.L, lam.chart);
  ASSERT_EQ(rep.entries.size(), 4u);
  for (const auto& e : rep.entries) EXPECT_TRUE(symbolic(e.verdict)) << e.j << e.l << ": " << e.verdict.method;
}

TEST(Equivariance, Examples) {
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  EXPECT_EQ(check_equivariance(lam.L, lam.chart, 50).verdict, Verdict::Equal);
  auto sq = check_equivariance(P("y1_1^2"), JetChart(1, 1), 20);
  EXPECT_EQ(sq.verdict, Verdict::Unequal);
  EXPECT_TRUE(sq.witness.has_value());
  EXPECT_EQ(check_equivariance(Expr(), JetChart(2, 1), 10).verdict, Verdict::Equal);
  EXPECT_THROW(check_equivariance(Expr(), JetChart(2, 1), 0), PreconditionError);
}

TEST(Equivariance, AgreesWithZermeloOnCorpus) {
  struct Case {
    int n, m;
    const char* F;
  };
  std::vector<Case> corpus = {
      {1, 1, "sqrt(y1_1^2 + y2_1^2)"},
      {1, 1, "y1_1^2"},
      {1, 1, "y1_1 + 1"},
      {1, 1, "y1_1"},
      {1, 1, "sqrt(y1_1^2 + y2_1^2) + y2*y1_1"},
      {1, 2, "y1_1^2 + y2_1^2 + y3_1^2"},
      {2, 1, "y1_1*y2_2 - y1_2*y2_1"},
      {2, 1, "y1_1*y2_2"},
      {2, 1, "exp(y3)*(y1_1*y3_2 - y1_2*y3_1) + 2*(y2_1*y3_2 - y2_2*y3_1)"},
      {2, 1, "sqrt((y1_1*y2_2 - y1_2*y2_1)^2 + (y1_1*y3_2 - y1_2*y3_1)^2 + (y2_1*y3_2 - y2_2*y3_1)^2)"},
  };
  int homogeneous = 0;
  for (const auto& c : corpus) {
    JetChart chart(c.n, c.m);
    Expr F = P(c.F);
    bool z = zermelo_residuals(F, chart).pass();
    auto eq = check_equivariance(F, chart, 30, 5);
    ASSERT_NE(eq.verdict, Verdict::Unknown) << c.F;
    EXPECT_EQ(z, eq.verdict == Verdict::Equal) << c.F;
    homogeneous += z;
  }
  EXPECT_EQ(homogeneous, 6);
}

TEST(GrassmannProjection, Examples) {
  AdaptedChart a1(JetChart(1, 1), {1});
  Expr fg = grassmann_projection(P("sqrt(y1_1^2 + y2_1^2)"), a1);
  EXPECT_TRUE(equal(fg, P("sqrt(1 + w2_1^2)"))) << to_string(fg);

  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  AdaptedChart a2(lam.chart, {1, 2});
  Expr lg = grassmann_projection(lam.L, a2);
  EXPECT_TRUE(equal(lg, P("sqrt(1 + w3_1^2 + w3_2^2)"))) << to_string(lg);

  // A_PQ y^P_1 y^Q_2 with A antisymmetric constant.
  Expr rem = P("(y1_1*y2_2 - y2_1*y1_2) + 2*(y1_1*y3_2 - y3_1*y1_2) - (y2_1*y3_2 - y3_1*y2_2)");
  Expr rg = grassmann_projection(rem, a2);
  for (const auto& s : free_symbols(rg)) EXPECT_EQ(s.kind, SymKind::W1) << s.name();
  EXPECT_TRUE(equal(rg, P("1 + 2*w3_2 + w3_1")));

  EXPECT_THROW(grassmann_projection(P("y1_1^2"), a1), PreconditionError);
}

TEST(HomogeneousIdentities, DifferentiatedZermelo) {
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  const int n = 2, M = 3;
  DerivativeTable T(lam.L);
  for (int K2 = 1; K2 <= M; ++K2)
    for (int j1 = 1; j1 <= n; ++j1)
      for (int j2 = 1; j2 <= n; ++j2)
        for (int i1 = 1; i1 <= n; ++i1) {
          Expr lhs;
          for (int K1 = 1; K1 <= M; ++K1)
            lhs += T.get({Symbol::y1(K1, j1), Symbol::y1(K2, j2)}) * S(Symbol::y1(K1, i1));
          Expr rhs;
          if (j1 == i1) rhs += T.get({Symbol::y1(K2, j2)});
          if (j2 == i1) rhs -= T.get({Symbol::y1(K2, j1)});
          EXPECT_TRUE(symbolic(equal(lhs, rhs))) << K2 << j1 << j2 << i1;
        }
}

TEST(HomogeneousIdentities, ContractedEpsilon) {
  // l = 2, k = 1, n = 2: d2F/dy^K1_j1 dy^K2_j2 y^K2_i2 eps_j1j2 = 2 dF/dy^K1_j1 eps_j1i2
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  DerivativeTable T(lam.L);
  auto eps = [](int a, int b) { return a == b ? 0 : (a < b ? 1 : -1); };
  for (int K1 = 1; K1 <= 3; ++K1)
    for (int i2 = 1; i2 <= 2; ++i2) {
      Expr lhs, rhs;
      for (int j1 = 1; j1 <= 2; ++j1)
        for (int j2 = 1; j2 <= 2; ++j2) {
          if (!eps(j1, j2)) continue;
          for (int K2 = 1; K2 <= 3; ++K2)
            lhs += Expr(eps(j1, j2)) * T.get({Symbol::y1(K1, j1), Symbol::y1(K2, j2)}) * S(Symbol::y1(K2, i2));
        }
      for (int j1 = 1; j1 <= 2; ++j1)
        if (eps(j1, i2)) rhs += Expr(2 * eps(j1, i2)) * T.get({Symbol::y1(K1, j1)});
      EXPECT_TRUE(symbolic(equal(lhs, rhs))) << K1 << i2;
    }
}

TEST(SignedPermutations, Counts) {
  EXPECT_EQ(signed_permutations(3).size(), 6u);
  int total = 0;
  for (const auto& p : signed_permutations(3)) total += p.sign;
  EXPECT_EQ(total, 0);
  EXPECT_EQ(signed_permutations(1)[0].sign, 1);
}
