#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lepage/charts.hpp"
#include "lepage/forms.hpp"
#include "lepage/lepage.hpp"

namespace lepage {

/// Xi = Xi^K d/dy^K on Q, components over y only.
struct FieldSpec {
  std::vector<Expr> xi;

  explicit FieldSpec(std::vector<Expr> components);
  static FieldSpec constant(const std::vector<Rational>& c);
  int dim() const { return static_cast<int>(xi.size()); }
};

struct ProlongedField {
  std::vector<Expr> base;
  VectorField field;  // keyed by y, y_j, y_jl (jet) or w, w^sigma_i (Grassmann)
};

/// Xi^K_j = d_j Xi^K and, for order 2, Xi^K_jl = d_l Xi^K_j.
ProlongedField prolong_jet(const FieldSpec& xi, const JetChart& chart, int order);
/// Xi^sigma_i = Delta_i Xi^sigma - w^sigma_p Delta_i Xi^p in the (i)-chart.
ProlongedField prolong_grassmann(const FieldSpec& xi, const AdaptedChart& ac);

struct NoetherResidual {
  Form reduced;     // Lie derivative in the Grassmann contact basis, omega~ words dropped
  Form horizontal;  // image under horizontalization (symmetric second-order placeholders)
  bool zero = true;
  FormEqualResult detail;
};
/// Lie derivative of a Grassmann-mode form by G^1 Xi, modulo the contact ideal.
NoetherResidual noether_residual(const FieldSpec& xi, const Form& eta, const EqualOptions& opts = {});

/// i_{G^1 Xi} W for Grassmann-mode W, i_{J^1 Xi} W for jet-mode W.
Form noether_current(const FieldSpec& xi, const Form& W);

struct Rect {
  double x0, x1, y0, y1;
};

struct QuadratureRule {
  std::vector<double> nodes, weights;  // on [-1, 1]
};
QuadratureRule gauss_legendre(int order);

/// Composite Gauss-Legendre with cells x cells panels of the given order.
double integrate_rect(const std::function<double(double, double)>& f, const Rect& r, int cells = 16, int order = 4);
/// Integral over {y0 <= y <= y1, lo(y) <= x <= hi(y)}.
double integrate_region(const std::function<double(double, double)>& f, double y0, double y1,
                        const std::function<double(double)>& lo, const std::function<double(double)>& hi,
                        int cells = 16, int order = 4);
/// Counterclockwise line integral of a dx + b dy around the rectangle.
double integrate_boundary(const std::function<double(double, double)>& a, const std::function<double(double, double)>& b,
                          const Rect& r, int cells = 16, int order = 4);

/// Integral of (T^1 zeta)^* (L omega_0) over the rectangle (n = 2).
double action(const Lagrangian& lam, const Immersion& zeta, const Rect& r, int cells = 16, int order = 4);

struct FirstVariationReport {
  double lhs = 0;       // integral of zeta^* L_{G Xi} W
  double el_term = 0;   // integral of E_K(J^2 zeta) Xi^K(zeta)
  double boundary = 0;  // boundary integral of zeta^* i_{G Xi} W
  double difference = 0;
  double relative = 0;  // difference / max(|lhs|, |el|, |boundary|, 1e-300)
  bool pass = false;
};
/// Integral first variation formula for a Lepage form rho with n = 2 on a rectangle.
FirstVariationReport first_variation_check(const HorizontalNForm& rho, const FieldSpec& xi, const Immersion& zeta,
                                           const Rect& omega, double tol = 1e-6, int cells = 16, int order = 4);

/// Xi(y) = A y + b with its closed-form flow.
struct AffineField {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  FieldSpec spec() const;
  /// alpha_t(y) = E(t) y + c(t), returned as (E, c).
  std::pair<std::vector<std::vector<double>>, std::vector<double>> flow(double t) const;
};

/// G^1 alpha applied to a point of the (i)-chart; alpha given by closed-form components in y.
PointAssignment grassmann_act(const std::vector<Expr>& alpha, const AdaptedChart& ac, const PointAssignment& w);
/// Same for an affine map y -> E y + c.
PointAssignment grassmann_act(const std::vector<std::vector<double>>& E, const std::vector<double>& c,
                              const AdaptedChart& ac, const PointAssignment& w);

/// Max deviation between central differences of G^1 alpha_t and prolong_grassmann(Xi).
double flow_consistency_error(const AffineField& f, const AdaptedChart& ac, int samples, std::uint64_t seed = 1,
                              double step = 1e-5);
/// Max componentwise deviation of G^1(alpha o zeta)(x) from G^1 alpha(G^1 zeta(x)).
double functoriality_error(const std::vector<Expr>& alpha, const Immersion& zeta, const AdaptedChart& ac,
                           const std::vector<PointAssignment>& xs);

}  // namespace lepage
