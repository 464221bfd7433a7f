#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lepage/charts.hpp"
#include "lepage/equality.hpp"
#include "lepage/expr.hpp"

namespace lepage {

/// Generators of the exterior algebra, declared in block order:
/// dx < {dy, omega, dw, omega~} < {dy_j, omega_j, dw_i} < dy_jk.
enum class CoKind : std::uint8_t { DX, DY, OMEGA, DW, OMEGA_T, DY1, OMEGA1, DW1, DY2 };

struct Covector {
  CoKind kind = CoKind::DX;
  std::uint8_t i = 0, j = 0, k = 0;

  static Covector dx(int i) { return {CoKind::DX, u8(i), 0, 0}; }
  static Covector dy(int K) { return {CoKind::DY, u8(K), 0, 0}; }
  static Covector dy1(int K, int j) { return {CoKind::DY1, u8(K), u8(j), 0}; }
  static Covector dy2(int K, int j, int k) {
    if (j > k) std::swap(j, k);
    return {CoKind::DY2, u8(K), u8(j), u8(k)};
  }
  static Covector omega(int K) { return {CoKind::OMEGA, u8(K), 0, 0}; }
  static Covector omega1(int K, int j) { return {CoKind::OMEGA1, u8(K), u8(j), 0}; }
  static Covector dw(int K) { return {CoKind::DW, u8(K), 0, 0}; }
  static Covector dw1(int K, int i) { return {CoKind::DW1, u8(K), u8(i), 0}; }
  static Covector omega_t(int s) { return {CoKind::OMEGA_T, u8(s), 0, 0}; }
  /// Differential of a coordinate symbol (x, y, y_j, y_jk, w, w_i).
  static Covector d(Symbol s);

  auto operator<=>(const Covector&) const = default;
  bool is_contact() const { return kind == CoKind::OMEGA || kind == CoKind::OMEGA1 || kind == CoKind::OMEGA_T; }

  /// dx1, dy2, dy2_1, dy2_12, om2, om2_1, dw3, dw3_1, omt3.
  std::string name() const;
  std::string latex() const;
  static std::optional<Covector> from_name(const std::string& s);

 private:
  static std::uint8_t u8(int v) { return static_cast<std::uint8_t>(v); }
};

using Word = std::vector<Covector>;

enum class Basis : std::uint8_t { Coordinate, Contact, GrassCoordinate, GrassContact };
std::string to_string(Basis b);

/// Basis mode plus the chart data the basis rewrites need: base dimension
/// and, for Grassmann modes, the adapted subsequence (i).
struct Frame {
  Basis basis = Basis::Coordinate;
  int n = 1;
  std::vector<int> idx;

  static Frame jet(int n, Basis b = Basis::Coordinate) { return {b, n, {}}; }
  static Frame grassmann(const AdaptedChart& ac, Basis b = Basis::GrassCoordinate) { return {b, ac.n(), ac.idx()}; }
  bool is_grassmann() const { return basis == Basis::GrassCoordinate || basis == Basis::GrassContact; }
  bool operator==(const Frame&) const = default;
};

/// q-form: map from strictly increasing words to nonzero coefficients.
class Form {
 public:
  Form(int degree, Frame frame);
  static Form scalar(const Expr& f, Frame frame);
  static Form one(Covector c, Frame frame, const Expr& coef = Expr(1));

  int degree() const { return degree_; }
  const Frame& frame() const { return frame_; }
  const std::map<Word, Expr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds coef * (w in the given order); w need not be sorted.
  void add(const Word& w, const Expr& coef);
  /// Coefficient of the (possibly unsorted) word, sign included.
  Expr get(const Word& w) const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Expr& f, const Form& a);
  Form operator-() const { return Expr(-1) * *this; }
  Form map_coefficients(const std::function<Expr(const Expr&)>& f) const;

 private:
  int degree_;
  Frame frame_;
  std::map<Word, Expr> terms_;
};

/// Sorts w in place; returns the permutation sign, or 0 on a repeated factor.
int sort_word(Word& w);

Form wedge(const Form& a, const Form& b);
Form wedge_all(const std::vector<Form>& fs, const Frame& frame);

/// omega_0 = dx^1 ^ ... ^ dx^n and omega_j = i_{d/dx^j} omega_0.
Form omega0(const Frame& f);
Form omega_j(int j, const Frame& f);

/// Rewrites every generator into the target basis of the same family.
Form to_basis(const Form& a, Basis target);
/// Lemma-2.8 route for pi^{1,0}-horizontal forms (coordinate <-> contact),
/// falling back to to_basis otherwise.
Form basis_convert(const Form& a, Basis target);
bool is_projectable_horizontal(const Form& a);
Form lemma_to_contact(const Form& a);
Form lemma_to_coordinate(const Form& a);

Form ext_d(const Form& a);

/// X = sum X^s d/ds over coordinate symbols.
using VectorField = std::map<Symbol, Expr>;
Expr pair(const Covector& c, const VectorField& X, const Frame& f);
Form contract(const VectorField& X, const Form& a);
Form lie_derivative(const VectorField& X, const Form& a);

Form horizontalize(const Form& a);
Form contact_component(const Form& a, int k);

/// y^K = zeta^K(x^1..x^n), closed form.
struct Immersion {
  std::vector<Expr> components;
};
/// x-expressions of y^K, y^K_j, y^K_jk along J^2 zeta.
std::map<Symbol, Expr> jet_prolongation(const Immersion& zeta, int n);
/// (T^1 zeta)^* for jet-mode forms; the result is a form in dx only.
Form pullback_jet(const Form& a, const Immersion& zeta);
/// (G^1 zeta)^* for Grassmann-mode forms in the chart of `a`.
Form pullback_grassmann(const Form& a, const Immersion& zeta);
/// w-coordinates of G^1 zeta as functions of x.
std::map<Symbol, Expr> grassmann_prolongation(const Immersion& zeta, const AdaptedChart& ac);
bool is_immersion_at(const Immersion& zeta, int n, const PointAssignment& x);

/// Restricts a GL-invariant pi^{1,0}-horizontal jet form to the (i)-chart of
/// the Grassmann fibration (slice y^{i_a}_j = delta, dy -> dw).
Form to_grassmann(const Form& a, const AdaptedChart& ac);

struct FormEqualResult {
  bool equal = true;
  std::optional<Word> word;  // first mismatching word
  EqualResult detail;
};
FormEqualResult form_equal(const Form& a, const Form& b, const EqualOptions& opts = {});

std::string to_string(const Form& a);
std::string to_latex(const Form& a);

}  // namespace lepage
