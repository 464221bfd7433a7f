#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lepage/charts.hpp"
#include "lepage/equality.hpp"
#include "lepage/forms.hpp"
#include "lepage/homogeneity.hpp"

namespace lepage {

/// lambda = L omega_0 with L over order-1 symbols of `chart`.
struct Lagrangian {
  JetChart chart;
  Expr L;

  Lagrangian(JetChart c, Expr l);
  Frame frame(Basis b = Basis::Coordinate) const { return Frame::jet(chart.n(), b); }
};

/// Theta = L omega_0 + dL/dy^K_j omega^K ^ omega_j (contact basis).
Form poincare_cartan(const Lagrangian& lam);
/// Z_lambda (contact basis); n <= 4.
Form fundamental(const Lagrangian& lam);
/// L * wedge_k (dx^k + L^{-1} dL/dy^K_k omega^K), expanded (contact basis).
Form caratheodory(const Lagrangian& lam);

struct HomogeneityOptions {
  EqualOptions eq = EqualOptions::sampled(50);
  /// Skip the Zermelo precondition (callers that already checked it).
  bool assume_homogeneous = false;
};

/// (1/n!) L^{1-n} dL/dy^{K1}_{j1}...dL/dy^{Kn}_{jn} eps dy^{K1}^...^dy^{Kn}.
Form hilbert_caratheodory(const Lagrangian& lam, const HomogeneityOptions& opts = {});
/// W_lambda = (1/(n!)^2) d^nL eps dy^{K1}^...^dy^{Kn}. With `verify`, also
/// checks W = Z_lambda and throws Error on mismatch.
Form fundamental_homogeneous(const Lagrangian& lam, const HomogeneityOptions& opts = {}, bool verify = false);

enum class LepageKind { PoincareCartan, Fundamental, Caratheodory, HilbertCaratheodory, W };
std::optional<LepageKind> lepage_kind_from_name(const std::string& s);  // pc, fundamental, caratheodory, hc, w
std::string to_string(LepageKind k);
Form construct(LepageKind k, const Lagrangian& lam, const HomogeneityOptions& opts = {});

/// pi^{1,0}-horizontal n-form (1/n!) A_{K1..Kn} dy^{K1}^...^dy^{Kn}, stored as
/// a coordinate-basis form whose sorted-word coefficients are A.
struct HorizontalNForm {
  JetChart chart;
  Form rho;

  HorizontalNForm(JetChart c, Form f);
  static HorizontalNForm from_coefficients(const JetChart& c, const std::map<std::vector<int>, Expr>& A);
};

/// L = (1/n!) A y^{K1}_{j1}...y^{Kn}_{jn} eps^{j1..jn}.
Lagrangian lagrangian_of(const HorizontalNForm& rho);

struct LepageCriterion {
  bool yes = true;
  std::optional<Symbol> variable;  // y^P_s of the first failing condition
  Expr residual;
  EqualResult detail;
};
/// dA/dy^P_s y^{K1}_{j1}...y^{Kn}_{jn} eps^{j1..jn} = 0 for all P, s.
LepageCriterion is_lepage(const HorizontalNForm& rho, const EqualOptions& opts = EqualOptions::sampled(50));

/// E_K = dL/dy^K - d_j dL/dy^K_j on the order-2 chart.
std::vector<Expr> euler_lagrange(const Lagrangian& lam);

struct ElFormCheck {
  bool pass = true;
  Form p1_drho;     // contact basis
  Form expected;    // E_K omega^K ^ omega_0
  FormEqualResult detail;
};
/// Compares p_1(d rho) with E_K(L) omega^K ^ omega_0; throws
/// PreconditionError when rho fails is_lepage.
ElFormCheck el_form_check(const HorizontalNForm& rho, const EqualOptions& opts = {});

struct LepagePropertyResult {
  bool pass = true;
  int directions = 0;
  VectorField failing;
  FormEqualResult detail;
};
/// h(rho) = lambda, order-raised.
FormEqualResult check_horizontal_part(const Form& rho, const Lagrangian& lam, const EqualOptions& opts = {});
/// h(i_xi d rho) = 0 for `directions` random pi^{1,0}-vertical fields xi.
LepagePropertyResult check_lepage_property(const Form& rho, const JetChart& chart, int directions = 20,
                                           std::uint64_t seed = 1, const EqualOptions& opts = {});

}  // namespace lepage
