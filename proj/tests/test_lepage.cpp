#include <gtest/gtest.h>

#include "lepage/error.hpp"
#include "lepage/lepage.hpp"
#include "lepage/minimal.hpp"
#include "support.hpp"

using namespace lepage;
using lepage::testing::P;

namespace {

Form one(Covector c, const Frame& f, const Expr& coef = Expr(1)) { return Form::one(c, f, coef); }

void expect_forms_equal(const Form& a, const Form& b) {
  auto r = form_equal(a, b);
  EXPECT_TRUE(r.equal) << to_string(a) << "\n vs \n" << to_string(b);
}

Lagrangian trivial2() { return Lagrangian(JetChart(2, 1), P("y1_1*y2_2 - y1_2*y2_1")); }

/// A_PQ y^P_1 y^Q_2 with A antisymmetric constant of rank 4 (A_12 = 1, A_34 = 2, A_13 = 1).
Lagrangian antisymmetric_control() {
  return Lagrangian(JetChart(2, 2),
                    P("(y1_1*y2_2 - y2_1*y1_2) + 2*(y3_1*y4_2 - y4_1*y3_2) + (y1_1*y3_2 - y3_1*y1_2)"));
}

/// Rank-2 antisymmetric A on R^3 (always decomposable).
Lagrangian decomposable_lagrangian() {
  return Lagrangian(JetChart(2, 1),
                    P("(y1_1*y2_2 - y2_1*y1_2) + 2*(y1_1*y3_2 - y3_1*y1_2) - (y2_1*y3_2 - y3_1*y2_2)"));
}

struct Sample {
  int n, m;
  const char* L;
};

const std::vector<Sample>& generic_lagrangians() {
  static const std::vector<Sample> v = {
      {1, 1, "y1*y1_1^2 + sin(y2)*y2_1"},
      {1, 2, "y1_1*y3_1 + y2^2*y2_1^2 + x1*y3"},
      {2, 1, "y1_1*y2_2 + y3^2*y3_1*y1_2 + x1*y3_2^2"},
      {2, 2, "y1_1*y4_2 + y3*y2_1^2 + y4_1*y3_2"},
  };
  return v;
}

}  // namespace

TEST(PoincareCartan, Examples) {
  Lagrangian lam(JetChart(1, 1), P("y1_1"));
  expect_forms_equal(to_basis(poincare_cartan(lam), Basis::Coordinate), one(Covector::dy(1), Frame::jet(1)));

  Lagrangian l2(JetChart(1, 1), P("y1_1^2/2 + y2*y1"));
  Frame c = Frame::jet(1, Basis::Contact);
  Form expect = one(Covector::dx(1), c, l2.L) + one(Covector::omega(1), c, P("y1_1"));
  expect_forms_equal(poincare_cartan(l2), expect);
  EXPECT_TRUE(check_horizontal_part(poincare_cartan(l2), l2).equal);
}

TEST(Fundamental, Examples) {
  Lagrangian l1(JetChart(1, 1), P("y1*y1_1^2 + y2_1"));
  expect_forms_equal(fundamental(l1), poincare_cartan(l1));

  Form z = fundamental(trivial2());
  Form dydy = wedge(one(Covector::dy(1), Frame::jet(2)), one(Covector::dy(2), Frame::jet(2)));
  expect_forms_equal(dydy, z);
  EXPECT_TRUE(form_equal(ext_d(z), Form(3, z.frame())).equal);

  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  EXPECT_FALSE(form_equal(ext_d(fundamental(lam)), Form(3, Frame::jet(2, Basis::Contact))).equal);
}

TEST(Caratheodory, Examples) {
  Lagrangian l1(JetChart(1, 2), P("y1_1^2 + y3*y2_1 + 1"));
  expect_forms_equal(caratheodory(l1), poincare_cartan(l1));

  Lagrangian rem = antisymmetric_control();
  auto r = form_equal(caratheodory(rem), fundamental(rem));
  EXPECT_FALSE(r.equal);
  EXPECT_EQ(r.detail.verdict, Verdict::Unequal);
  EXPECT_TRUE(r.detail.witness.has_value());

  EXPECT_THROW(caratheodory(Lagrangian(JetChart(1, 1), Expr())), PreconditionError);
}

TEST(HilbertCaratheodory, Examples) {
  Lagrangian arc(JetChart(1, 1), P("sqrt(y1_1^2 + y2_1^2)"));
  Frame f = Frame::jet(1);
  Form hilbert = one(Covector::dy(1), f, diff(arc.L, Symbol::y1(1, 1))) +
                 one(Covector::dy(2), f, diff(arc.L, Symbol::y1(2, 1)));
  expect_forms_equal(hilbert_caratheodory(arc), hilbert);
  expect_forms_equal(fundamental_homogeneous(arc), hilbert);

  EXPECT_THROW(hilbert_caratheodory(Lagrangian(JetChart(1, 1), P("y1_1^2"))), PreconditionError);
  EXPECT_THROW(fundamental_homogeneous(Lagrangian(JetChart(1, 1), P("y1_1 + 1"))), PreconditionError);

  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  expect_forms_equal(hilbert_caratheodory(lam), caratheodory(lam));
}

TEST(W, EqualsFundamentalForHomogeneous) {
  for (int M : {3, 4}) {
    Lagrangian lam = minimal_lagrangian(Metric::euclidean(M), 2);
    EXPECT_NO_THROW(fundamental_homogeneous(lam, {}, true)) << M;
  }
  Lagrangian rem = antisymmetric_control();
  expect_forms_equal(fundamental_homogeneous(rem), fundamental(rem));
  auto r = form_equal(fundamental_homogeneous(rem), hilbert_caratheodory(rem));
  EXPECT_EQ(r.detail.verdict, Verdict::Unequal);
  EXPECT_TRUE(r.detail.witness.has_value());
}

TEST(W, MinimalCoefficientsMatchKrupka) {
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  Form w = fundamental_homogeneous(lam);
  Form k = krupka_form(Metric::euclidean(3), 2).rho;
  // (1/L) g g D for the dy1^dy2 word is D^{12}/L.
  EXPECT_TRUE(equal(w.get({Covector::dy(1), Covector::dy(2)}), P("y1_1*y2_2 - y1_2*y2_1") * lam.L.pow(-1)));
  expect_forms_equal(w, k);
}

TEST(ConstructorNames, RoundTrip) {
  for (auto k : {LepageKind::PoincareCartan, LepageKind::Fundamental, LepageKind::Caratheodory,
                 LepageKind::HilbertCaratheodory, LepageKind::W})
    EXPECT_EQ(lepage_kind_from_name(to_string(k)), k);
  EXPECT_FALSE(lepage_kind_from_name("bogus").has_value());
}

TEST(LagrangianOf, Examples) {
  JetChart c(2, 1);
  auto rho = HorizontalNForm::from_coefficients(c, {{{1, 2}, Expr(1)}});
  EXPECT_EQ(lagrangian_of(rho).L, P("y1_1*y2_2 - y1_2*y2_1"));
  EXPECT_TRUE(lagrangian_of(HorizontalNForm(c, Form(2, Frame::jet(2)))).L.is_zero());
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  EXPECT_TRUE(equal(lagrangian_of(krupka_form(Metric::euclidean(3), 2)).L, lam.L));
  EXPECT_THROW(HorizontalNForm(c, one(Covector::dx(1), Frame::jet(2))), PreconditionError);
}

TEST(IsLepage, Examples) {
  JetChart c(2, 1);
  EXPECT_TRUE(is_lepage(HorizontalNForm::from_coefficients(c, {{{1, 2}, Expr(3)}, {{2, 3}, P("y1")}})).yes);
  EXPECT_TRUE(is_lepage(krupka_form(Metric::euclidean(3), 2)).yes);
  auto no = is_lepage(HorizontalNForm::from_coefficients(c, {{{1, 2}, P("y1_1")}}));
  EXPECT_FALSE(no.yes);
  EXPECT_EQ(no.variable, Symbol::y1(1, 1));
  EXPECT_TRUE(no.detail.witness.has_value());
}

TEST(EulerLagrange, Examples) {
  for (const auto& e : euler_lagrange(trivial2())) EXPECT_TRUE(e.is_zero()) << to_string(e);
  auto e1 = euler_lagrange(Lagrangian(JetChart(1, 1), P("y1_1^2/2")));
  EXPECT_EQ(e1[0], P("-y1_11"));
  EXPECT_TRUE(e1[1].is_zero());
}

TEST(ElFormCheck, Examples) {
  JetChart c(2, 1);
  auto cst = el_form_check(HorizontalNForm::from_coefficients(c, {{{1, 3}, Expr(2)}}));
  EXPECT_TRUE(cst.pass);
  EXPECT_TRUE(cst.expected.is_zero());
  EXPECT_TRUE(el_form_check(krupka_form(Metric::euclidean(3), 2)).pass);
  EXPECT_THROW(el_form_check(HorizontalNForm::from_coefficients(c, {{{1, 2}, P("y1_1")}})), PreconditionError);
}

TEST(Property, HorizontalPartIsLagrangian) {
  for (const auto& s : generic_lagrangians()) {
    Lagrangian lam(JetChart(s.n, s.m), P(s.L));
    for (auto k : {LepageKind::PoincareCartan, LepageKind::Fundamental})
      EXPECT_TRUE(check_horizontal_part(construct(k, lam), lam).equal) << s.L << " " << to_string(k);
  }
  for (auto [n, M] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}, std::pair{2, 4}}) {
    Lagrangian lam = minimal_lagrangian(Metric::euclidean(M), n);
    for (auto k : {LepageKind::PoincareCartan, LepageKind::Fundamental, LepageKind::Caratheodory,
                   LepageKind::HilbertCaratheodory, LepageKind::W})
      EXPECT_TRUE(check_horizontal_part(construct(k, lam), lam).equal) << n << M << " " << to_string(k);
  }
}

TEST(Property, LepageProperty) {
  for (const auto& s : generic_lagrangians()) {
    Lagrangian lam(JetChart(s.n, s.m), P(s.L));
    for (auto k : {LepageKind::PoincareCartan, LepageKind::Fundamental})
      EXPECT_TRUE(check_lepage_property(construct(k, lam), lam.chart).pass) << s.L << " " << to_string(k);
  }
  Lagrangian nz(JetChart(2, 1), P("y1_1*y2_2 + y3_1^2 + 3"));
  EXPECT_TRUE(check_lepage_property(caratheodory(nz), nz.chart).pass);
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  for (auto k : {LepageKind::Caratheodory, LepageKind::HilbertCaratheodory, LepageKind::W})
    EXPECT_TRUE(check_lepage_property(construct(k, lam), lam.chart).pass) << to_string(k);
  // dy^1 ^ dy^2 scaled by y1_1 is not Lepage.
  Form bad = P("y1_1") * wedge(one(Covector::dy(1), Frame::jet(2)), one(Covector::dy(2), Frame::jet(2)));
  EXPECT_FALSE(check_lepage_property(bad, JetChart(2, 1)).pass);
}

TEST(Property, LepageFormsHaveHomogeneousLagrangians) {
  JetChart c(2, 1);
  std::vector<HorizontalNForm> forms = {
      krupka_form(Metric::euclidean(3), 2),
      HorizontalNForm::from_coefficients(c, {{{1, 2}, P("y3")}, {{1, 3}, P("sin(y2)")}}),
  };
  for (const auto& rho : forms) {
    ASSERT_TRUE(is_lepage(rho).yes);
    auto lam = lagrangian_of(rho);
    EXPECT_TRUE(zermelo_residuals(lam.L, lam.chart).pass());
  }
}

TEST(Property, PullbackOfWMatchesRho) {
  HorizontalNForm rho = krupka_form(Metric::euclidean(3), 2);
  Form w = fundamental_homogeneous(lagrangian_of(rho));
  std::vector<Immersion> zs = {
      {{P("x1"), P("x2"), P("x1*x2")}},
      {{P("x1 + x2^2/4"), P("x2"), P("sin(x1) + x2")}},
      {{P("x1*x2 + 3"), P("x2 - x1/2"), P("x1^2")}},
  };
  for (const auto& z : zs) expect_forms_equal(pullback_jet(w, z), pullback_jet(rho.rho, z));
}
