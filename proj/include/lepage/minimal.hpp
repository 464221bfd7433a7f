#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lepage/lepage.hpp"

namespace lepage {

/// Riemannian metric g_KL(y) on Q.
struct Metric {
  std::vector<std::vector<Expr>> g;

  explicit Metric(std::vector<std::vector<Expr>> m);
  static Metric euclidean(int M);
  static Metric diagonal(const std::vector<Expr>& d);
  int dim() const { return static_cast<int>(g.size()); }
  const Expr& at(int K, int L) const { return g[static_cast<std::size_t>(K - 1)][static_cast<std::size_t>(L - 1)]; }
};

/// L = sqrt(det(g_KL y^K_j y^L_k)); n <= 3.
Lagrangian minimal_lagrangian(const Metric& g, int n);
/// omega_lambda = (1/n!)(1/L) g_{K1L1}...g_{KnLn} D^{L1..Ln} dy^{K1}^...^dy^{Kn}.
HorizontalNForm krupka_form(const Metric& g, int n);

struct CoincidenceEntry {
  std::string pair;  // "W-HC", "W-krupka", "HC-krupka"
  FormEqualResult result;
};
struct CoincidenceReport {
  std::vector<CoincidenceEntry> entries;
  bool all_equal() const;
};
/// Pairwise coefficient equality of W_lambda, the Hilbert-Caratheodory form and omega_lambda.
CoincidenceReport verify_coincidence(const Metric& g, int n, const EqualOptions& opts = EqualOptions::sampled(50));

/// Minimal-surface operator (1+u_y^2)u_xx - 2u_x u_y u_xy + (1+u_x^2)u_yy for u over x1, x2.
Expr graph_el_residual(const Expr& u);

struct GraphElCheck {
  std::vector<Expr> el;  // E_K of the Euclidean area Lagrangian along (x1, x2, u)
  Expr mse;              // graph_el_residual(u)
  Expr factor;           // expected E_3 / mse = -(1 + u_x^2 + u_y^2)^(-3/2)
  EqualResult proportional;
  EqualResult tangential;  // E_j + u_j E_3 = 0
  bool pass = false;
};
/// Euler-Lagrange expressions of the minimal Lagrangian (n=2, m=1) restricted to
/// the graph of `u` (default: an opaque u(x1, x2)).
GraphElCheck check_graph_el(const std::optional<Expr>& u = std::nullopt, const EqualOptions& opts = {});

/// Uniform nx x ny grid on [a,b] x [c,d]; node (i,j) sits at (a + i hx, c + j hy).
struct GridField {
  double a = 0, b = 1, c = 0, d = 1;
  int nx = 3, ny = 3;
  std::vector<double> u;  // row-major, index j * nx + i

  GridField(double a, double b, double c, double d, int nx, int ny);
  static GridField sample(const std::function<double(double, double)>& f, double a, double b, double c, double d, int nx,
                          int ny);
  /// Samples an expression over x1, x2.
  static GridField sample(const Expr& f, double a, double b, double c, double d, int nx, int ny);

  double hx() const { return (b - a) / (nx - 1); }
  double hy() const { return (d - c) / (ny - 1); }
  double x(int i) const { return a + i * hx(); }
  double y(int j) const { return c + j * hy(); }
  double& at(int i, int j) { return u[static_cast<std::size_t>(j * nx + i)]; }
  double at(int i, int j) const { return u[static_cast<std::size_t>(j * nx + i)]; }
  bool interior(int i, int j) const { return i > 0 && j > 0 && i < nx - 1 && j < ny - 1; }
  double max_abs_interior() const;

  /// Second-order differences; first derivatives are one-sided on the boundary.
  double ux(int i, int j) const;
  double uy(int i, int j) const;
  double uxx(int i, int j) const;
  double uyy(int i, int j) const;
  double uxy(int i, int j) const;
};

/// Central-difference minimal-surface residual at interior nodes (0 on the boundary).
GridField graph_el_residual(const GridField& u);

struct SolveReport {
  GridField u;
  int iterations = 0;
  bool converged = false;
  double residual = 0;            // max interior residual of the returned field
  std::vector<double> history;    // max interior residual after each iteration, starting with the initial guess
};
/// Damped Newton on the discrete minimal-surface equation; boundary nodes of
/// `boundary` are kept fixed and the interior starts from the harmonic extension.
SolveReport solve_minimal_surface(const GridField& boundary, double tol = 1e-10, int max_iter = 12);

/// Per-cell trapezoid circulation of a 1-form divided by the cell area.
struct CellGrid {
  int nx = 0, ny = 0;  // cell counts
  std::vector<double> v;
  double max_abs() const;
};
struct ConservationResiduals {
  std::array<CellGrid, 3> circulation;  // currents f, g, h
  double h2 = 0;                        // hx * hy
  double max_abs() const;
};
/// Closedness of the graph currents
///   (u_x u_y dx + (1+u_y^2) dy)/L, (-(1+u_x^2) dx - u_x u_y dy)/L, (-u_y dx + u_x dy)/L.
ConservationResiduals conservation_residuals(const GridField& u);

struct ReconstructionReport {
  GridField f, g, h;
  double circulation = 0;  // max normalized circulation
  double rovnice = 0;      // max |u_x f_i + u_y g_i - h_i| over interior nodes and i = x, y
  double el = 0;           // max interior minimal-surface residual
  double gate = 0;         // gate_factor * h^2
  bool closed = false;
  bool pass = false;
};
/// Integrates the currents along the bottom row and then up each column and
/// checks u_x df + u_y dg = dh and the minimal-surface equation.
ReconstructionReport reconstruct_and_check(const GridField& u, double gate_factor = 10);

}  // namespace lepage
