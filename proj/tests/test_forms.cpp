#include <gtest/gtest.h>

#include "lepage/error.hpp"
#include "lepage/forms.hpp"
#include "support.hpp"

using namespace lepage;
using lepage::testing::P;

namespace {

const Frame J2 = Frame::jet(2);

Covector dx(int i) { return Covector::dx(i); }
Covector dy(int K) { return Covector::dy(K); }

Form one(Covector c, const char* coef = "1", Frame f = J2) { return Form::one(c, f, P(coef)); }

void expect_forms_equal(const Form& a, const Form& b) {
  auto r = form_equal(a, b);
  EXPECT_TRUE(r.equal) << to_string(a) << "\n vs \n" << to_string(b);
}

}  // namespace

TEST(Wedge, Examples) {
  EXPECT_TRUE(wedge(one(dx(1)), one(dx(1))).is_zero());
  expect_forms_equal(wedge(one(dx(1)), one(dx(2))), -wedge(one(dx(2)), one(dx(1))));
  // omega_1 = dx^2, omega_2 = -dx^1
  expect_forms_equal(omega_j(1, J2), one(dx(2)));
  expect_forms_equal(omega_j(2, J2), one(dx(1), "-1"));
  expect_forms_equal(wedge(one(dx(1)), omega_j(1, J2)), omega0(J2));
  EXPECT_THROW(wedge(one(dx(1)), one(dx(1), "1", Frame::jet(2, Basis::Contact))), PreconditionError);
}

TEST(CovectorNames, RoundTrip) {
  for (Covector c : {dx(1), dy(3), Covector::dy1(2, 1), Covector::dy2(1, 2, 1), Covector::omega(2),
                     Covector::omega1(1, 2), Covector::dw(3), Covector::dw1(3, 2), Covector::omega_t(3)}) {
    auto back = Covector::from_name(c.name());
    ASSERT_TRUE(back.has_value()) << c.name();
    EXPECT_EQ(*back, c);
  }
  EXPECT_FALSE(Covector::from_name("dq1").has_value());
}

TEST(ExtD, Examples) {
  expect_forms_equal(ext_d(one(dx(1), "y1")), wedge(one(dy(1)), one(dx(1))));
  Form om = one(Covector::omega(1), "1", Frame::jet(2, Basis::Contact));
  Form dom = to_basis(ext_d(om), Basis::Coordinate);
  Form expect(2, J2);
  for (int l = 1; l <= 2; ++l) expect.add({dx(l), Covector::dy1(1, l)}, Expr(1));
  expect_forms_equal(dom, expect);
}

TEST(Contract, Examples) {
  for (int j = 1; j <= 2; ++j) expect_forms_equal(contract({{Symbol::x(j), Expr(1)}}, omega0(J2)), omega_j(j, J2));
  Form r = contract({{Symbol::x(1), Expr(1)}}, one(dx(1)));
  EXPECT_EQ(r.get({}), Expr(1));
  EXPECT_THROW(contract({}, Form::scalar(P("y1"), J2)), PreconditionError);
}

TEST(Horizontalize, Examples) {
  expect_forms_equal(horizontalize(one(dy(2))), one(dx(1), "y2_1") + one(dx(2), "y2_2"));
  EXPECT_TRUE(horizontalize(one(Covector::omega(1), "y1", Frame::jet(2, Basis::Contact))).is_zero());
  EXPECT_TRUE(horizontalize(to_basis(one(Covector::omega(1), "y1", Frame::jet(2, Basis::Contact)), Basis::Coordinate))
                  .is_zero());
  Form h = horizontalize(wedge(one(dy(1)), one(dy(2))));
  expect_forms_equal(h, P("y1_1*y2_2 - y1_2*y2_1") * omega0(J2));
}

TEST(ContactComponent, Examples) {
  Form rho = wedge(one(dy(1)), one(dy(2)));
  Form p2 = contact_component(rho, 2);
  Form expect(2, Frame::jet(2, Basis::Contact));
  expect.add({Covector::omega(1), Covector::omega(2)}, Expr(1));
  expect_forms_equal(p2, expect);
  Form hor = P("y1") * omega0(J2);
  expect_forms_equal(to_basis(contact_component(hor, 0), Basis::Coordinate), horizontalize(hor));
  EXPECT_THROW(contact_component(rho, 3), PreconditionError);
}

TEST(BasisConvert, DegreeOneCoefficients) {
  // {A_K, A_i} -> {B_K = A_K, B_i = A_i + A_K y^K_i}
  Form a = one(dy(1), "y3") + one(dy(3), "x1") + one(dx(2), "y1_1");
  Form b = lemma_to_contact(a);
  EXPECT_EQ(b.get({Covector::omega(1)}), P("y3"));
  EXPECT_EQ(b.get({Covector::omega(3)}), P("x1"));
  EXPECT_EQ(b.get({dx(2)}), P("y1_1 + y3*y1_2 + x1*y3_2"));
  EXPECT_EQ(b.get({dx(1)}), P("y3*y1_1 + x1*y3_1"));
}

TEST(BasisConvert, ContactWedgeInCoordinates) {
  Form cw(2, Frame::jet(2, Basis::Contact));
  cw.add({Covector::omega(1), Covector::omega(2)}, Expr(1));
  Form c = lemma_to_coordinate(cw);
  Form expect = wedge(one(dy(1)), one(dy(2)));
  for (int l = 1; l <= 2; ++l) {
    expect -= wedge(one(dy(1)), one(dx(l), l == 1 ? "y2_1" : "y2_2"));
    expect += wedge(one(dy(2)), one(dx(l), l == 1 ? "y1_1" : "y1_2"));
  }
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 2; ++l) {
      std::string coef = "y1_" + std::to_string(k) + "*y2_" + std::to_string(l);
      expect += wedge(one(dx(k), coef.c_str()), one(dx(l)));
    }
  expect_forms_equal(c, expect);
  expect_forms_equal(c, to_basis(cw, Basis::Coordinate));
}

TEST(BasisConvert, LemmaMatchesSubstitution) {
  RandomForm gen(21, true);
  for (int i = 0; i < 30; ++i) {
    Form a = gen(1 + i % 3);
    expect_forms_equal(lemma_to_contact(a), to_basis(a, Basis::Contact));
    Form c = to_basis(a, Basis::Contact);
    expect_forms_equal(lemma_to_coordinate(c), a);
  }
}

TEST(Property, RoundtripDdLeibniz) {
  RandomForm gen(22);
  for (int i = 0; i < 50; ++i) {
    Form a = gen(1 + i % 2), b = gen(1);
    Form back = basis_convert(basis_convert(a, Basis::Contact), Basis::Coordinate);
    expect_forms_equal(back, a);
    EXPECT_TRUE(form_equal(ext_d(ext_d(a)), Form(a.degree() + 2, J2)).equal) << to_string(a);
    Form lhs = ext_d(wedge(a, b));
    Form rhs = wedge(ext_d(a), b) + (a.degree() % 2 ? -wedge(a, ext_d(b)) : wedge(a, ext_d(b)));
    expect_forms_equal(lhs, rhs);
  }
}

TEST(Property, ContractionAntiderivation) {
  RandomForm gen(23);
  RandomExpr coef(24, false);
  for (int i = 0; i < 30; ++i) {
    VectorField X = {{Symbol::x(1), coef.tree(2)}, {Symbol::y(2), coef.tree(2)}, {Symbol::y1(3, 1), coef.tree(2)}};
    Form a = gen(1 + i % 2), b = gen(1);
    Form lhs = contract(X, wedge(a, b));
    Form rhs = wedge(contract(X, a), b) + (a.degree() % 2 ? -wedge(a, contract(X, b)) : wedge(a, contract(X, b)));
    expect_forms_equal(lhs, rhs);
  }
}

TEST(Property, DecompositionCompleteness) {
  RandomForm gen(25);
  for (int i = 0; i < 20; ++i) {
    Form a = gen(2);
    Form sum = to_basis(horizontalize(a), Basis::Contact);
    for (int k = 1; k <= 2; ++k) sum += contact_component(a, k);
    expect_forms_equal(to_basis(sum, Basis::Coordinate), a);
  }
}

TEST(LieDerivative, Examples) {
  EXPECT_TRUE(lie_derivative({{Symbol::x(1), Expr(1)}}, omega0(J2)).is_zero());
  RandomForm gen(26);
  RandomExpr coef(27, false);
  for (int i = 0; i < 15; ++i) {
    VectorField X = {{Symbol::y(1), coef.tree(2)}, {Symbol::x(2), coef.tree(1)}};
    Form a = gen(1), b = gen(1);
    expect_forms_equal(lie_derivative(X, wedge(a, b)),
                       wedge(lie_derivative(X, a), b) + wedge(a, lie_derivative(X, b)));
  }
}

TEST(Pullback, ContactAndHorizontal) {
  Immersion z{{P("x1"), P("x2"), P("sin(x1)*x2 + x1^2")}};
  Form om(1, Frame::jet(2, Basis::Contact));
  om.add({Covector::omega(3)}, Expr(1));
  EXPECT_TRUE(pullback_jet(om, z).is_zero());
  RandomForm gen(28);
  for (int i = 0; i < 10; ++i) {
    Form a = gen(2);
    expect_forms_equal(pullback_jet(horizontalize(a), z), pullback_jet(a, z));
  }
}

TEST(Pullback, GrassmannPrologationOfGraph) {
  AdaptedChart ac(JetChart(2, 1), {1, 2});
  Immersion z{{P("x1"), P("x2"), P("x1*x2")}};
  auto w = grassmann_prolongation(z, ac);
  EXPECT_EQ(w.at(Symbol::w1(3, 1)), P("x2"));
  EXPECT_EQ(w.at(Symbol::w1(3, 2)), P("x1"));
  Form f(1, Frame::grassmann(ac));
  f.add({Covector::dw(3)}, P("w3_1"));
  expect_forms_equal(pullback_grassmann(f, z), one(dx(1), "x2^2") + one(dx(2), "x1*x2"));
}
