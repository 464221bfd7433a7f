#pragma once

#include <map>
#include <vector>

#include "lepage/expr.hpp"
#include "lepage/parser.hpp"
#include "lepage/point.hpp"

namespace lepage {

/// Fibered chart (x^i, y^K, y^K_j[, y^K_jk]) with K = 1..m+n.
class JetChart {
 public:
  JetChart(int n, int m, int order = 2);

  int n() const { return n_; }
  int m() const { return m_; }
  int M() const { return n_ + m_; }
  int order() const { return order_; }

  std::vector<Symbol> base_symbols() const;
  std::vector<Symbol> fiber_symbols() const;
  std::vector<Symbol> jet1_symbols() const;
  std::vector<Symbol> jet2_symbols() const;
  bool contains(const Symbol& s) const;

  /// Accepts x, y and jet symbols of this chart.
  ParseContext parse_context() const;

  friend bool operator==(const JetChart& a, const JetChart& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.order_ == b.order_;
  }

 private:
  int n_, m_, order_;
};

/// (i)-adapted chart (w^i, w^sigma, w^i_j, w^sigma_i) with z^k_i the inverse
/// of the (i)-minor of the velocity matrix.
class AdaptedChart {
 public:
  AdaptedChart(JetChart parent, std::vector<int> subsequence);

  const JetChart& parent() const { return parent_; }
  int n() const { return parent_.n(); }
  int M() const { return parent_.M(); }
  const std::vector<int>& idx() const { return idx_; }
  const std::vector<int>& sigma() const { return sigma_; }
  bool in_idx(int K) const;

  /// w^K, w^i_j, w^sigma_i.
  std::vector<Symbol> w_symbols() const;
  /// w^sigma_i only (the fiber coordinates of the Grassmann chart).
  std::vector<Symbol> grassmann_jet_symbols() const;
  bool contains(const Symbol& s) const;
  /// Accepts the parent's symbols, w-symbols and z-symbols.
  ParseContext parse_context() const;

 private:
  JetChart parent_;
  std::vector<int> idx_, sigma_;
};

struct AdaptedMaps {
  std::map<Symbol, Expr> w_to_y;  // w-symbols in canonical coordinates
  std::map<Symbol, Expr> y_to_w;  // inverse: y^sigma_j = w^sigma_i w^i_j
  std::map<Symbol, Expr> z;       // z^k_i as cofactor / minor determinant
};

Expr formal_derivative(const Expr& f, int i, const JetChart& chart);
Expr adapted_derivative(const Expr& f, int i, const AdaptedChart& ac);
AdaptedMaps to_adapted(const AdaptedChart& ac);
/// The (i)-minor y^{i_a}_j as a matrix of symbols.
std::vector<std::vector<Expr>> minor_matrix(const AdaptedChart& ac);

std::vector<std::vector<int>> increasing_subsequences(int n, int M);
std::vector<std::vector<int>> regular_blocks(const PointAssignment& p, const JetChart& chart);

using GroupElement = std::vector<std::vector<double>>;
double determinant(const GroupElement& a);
PointAssignment gl_act(const PointAssignment& p, const GroupElement& a, const JetChart& chart);

}  // namespace lepage
