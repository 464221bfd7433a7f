#include "lepage/charts.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>

#include "lepage/error.hpp"

namespace lepage {

JetChart::JetChart(int n, int m, int order) : n_(n), m_(m), order_(order) {
  if (n < 1 || m < 1) throw PreconditionError("chart requires n >= 1 and m >= 1");
  if (order != 1 && order != 2) throw UnsupportedOrder("chart order must be 1 or 2");
  if (n + m > 9) throw PreconditionError("chart supports at most 9 fiber coordinates");
}

std::vector<Symbol> JetChart::base_symbols() const {
  std::vector<Symbol> v;
  for (int i = 1; i <= n_; ++i) v.push_back(Symbol::x(i));
  return v;
}

std::vector<Symbol> JetChart::fiber_symbols() const {
  std::vector<Symbol> v;
  for (int K = 1; K <= M(); ++K) v.push_back(Symbol::y(K));
  return v;
}

std::vector<Symbol> JetChart::jet1_symbols() const {
  std::vector<Symbol> v;
  for (int K = 1; K <= M(); ++K)
    for (int j = 1; j <= n_; ++j) v.push_back(Symbol::y1(K, j));
  return v;
}

std::vector<Symbol> JetChart::jet2_symbols() const {
  std::vector<Symbol> v;
  if (order_ < 2) return v;
  for (int K = 1; K <= M(); ++K)
    for (int j = 1; j <= n_; ++j)
      for (int k = j; k <= n_; ++k) v.push_back(Symbol::y2(K, j, k));
  return v;
}

bool JetChart::contains(const Symbol& s) const {
  auto in = [](int v, int hi) { return v >= 1 && v <= hi; };
  switch (s.kind) {
    case SymKind::X: return in(s.i, n_);
    case SymKind::Y: return in(s.i, M());
    case SymKind::Y1: return in(s.i, M()) && in(s.j, n_);
    case SymKind::Y2: return order_ == 2 && in(s.i, M()) && in(s.j, n_) && in(s.k, n_);
    default: return false;
  }
}

ParseContext JetChart::parse_context() const {
  ParseContext ctx;
  JetChart self = *this;
  ctx.symbol_ok = [self](const Symbol& s) { return self.contains(s); };
  return ctx;
}

AdaptedChart::AdaptedChart(JetChart parent, std::vector<int> subsequence)
    : parent_(parent), idx_(std::move(subsequence)) {
  if (static_cast<int>(idx_.size()) != parent_.n())
    throw PreconditionError("adapted subsequence must have n entries");
  for (std::size_t a = 0; a < idx_.size(); ++a) {
    if (idx_[a] < 1 || idx_[a] > parent_.M()) throw PreconditionError("adapted index out of range");
    if (a && idx_[a] <= idx_[a - 1]) throw PreconditionError("adapted subsequence must be increasing");
  }
  if (parent_.n() > 4) throw PreconditionError("adapted charts limited to n <= 4");
  for (int K = 1; K <= parent_.M(); ++K)
    if (!in_idx(K)) sigma_.push_back(K);
}

bool AdaptedChart::in_idx(int K) const { return std::find(idx_.begin(), idx_.end(), K) != idx_.end(); }

std::vector<Symbol> AdaptedChart::w_symbols() const {
  std::vector<Symbol> v;
  for (int K = 1; K <= M(); ++K) v.push_back(Symbol::w(K));
  for (int i : idx_)
    for (int j = 1; j <= n(); ++j) v.push_back(Symbol::w1(i, j));
  for (int s : sigma_)
    for (int i : idx_) v.push_back(Symbol::w1(s, i));
  return v;
}

std::vector<Symbol> AdaptedChart::grassmann_jet_symbols() const {
  std::vector<Symbol> v;
  for (int s : sigma_)
    for (int i : idx_) v.push_back(Symbol::w1(s, i));
  return v;
}

bool AdaptedChart::contains(const Symbol& s) const {
  if (parent_.contains(s)) return true;
  switch (s.kind) {
    case SymKind::W: return s.i >= 1 && s.i <= M();
    case SymKind::W1:
      if (in_idx(s.i)) return s.j >= 1 && s.j <= n();
      return s.i >= 1 && s.i <= M() && in_idx(s.j);
    case SymKind::Z: return s.i >= 1 && s.i <= n() && in_idx(s.j);
    default: return false;
  }
}

ParseContext AdaptedChart::parse_context() const {
  ParseContext ctx;
  AdaptedChart self = *this;
  ctx.symbol_ok = [self](const Symbol& s) { return self.contains(s); };
  return ctx;
}

Expr formal_derivative(const Expr& f, int i, const JetChart& chart) {
  if (i < 1 || i > chart.n()) throw PreconditionError("formal derivative index out of range");
  auto syms = free_symbols(f);
  Expr r;
  for (const auto& s : syms) {
    switch (s.kind) {
      case SymKind::X:
        if (s.i == i) r += diff(f, s);
        break;
      case SymKind::Y:
        r += diff(f, s) * Expr::sym(Symbol::y1(s.i, i));
        break;
      case SymKind::Y1:
        if (chart.order() < 2) throw UnsupportedOrder("formal derivative of a jet1 function needs an order-2 chart");
        r += diff(f, s) * Expr::sym(Symbol::y2(s.i, s.j, i));
        break;
      case SymKind::Y2:
        throw UnsupportedOrder("formal derivative of a jet2 function needs order 3");
      default:
        throw PreconditionError("formal derivative of a non-jet symbol " + s.name());
    }
  }
  return r;
}

Expr adapted_derivative(const Expr& f, int i, const AdaptedChart& ac) {
  if (!ac.in_idx(i)) throw PreconditionError("adapted derivative index not in (i)");
  Expr r = diff(f, Symbol::w(i));
  for (int s : ac.sigma()) {
    Expr d = diff(f, Symbol::w(s));
    if (!d.is_zero()) r += Expr::sym(Symbol::w1(s, i)) * d;
  }
  return r;
}

std::vector<std::vector<Expr>> minor_matrix(const AdaptedChart& ac) {
  std::vector<std::vector<Expr>> m;
  for (int i : ac.idx()) {
    std::vector<Expr> row;
    for (int j = 1; j <= ac.n(); ++j) row.push_back(Expr::sym(Symbol::y1(i, j)));
    m.push_back(std::move(row));
  }
  return m;
}

AdaptedMaps to_adapted(const AdaptedChart& ac) {
  const int n = ac.n();
  auto mm = minor_matrix(ac);
  Expr d = det(mm);
  Expr dinv = d.pow(-1);
  AdaptedMaps out;
  // z^k_{i_a} = (M^{-1})_{k,a} = cofactor(a,k) / det
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < n; ++k) {
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == a) continue;
        std::vector<Expr> row;
        for (int c = 0; c < n; ++c)
          if (c != k) row.push_back(mm[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        minor.push_back(std::move(row));
      }
      Expr cof = det(minor);
      if ((a + k) % 2) cof = -cof;
      out.z[Symbol::z(k + 1, ac.idx()[static_cast<std::size_t>(a)])] = cof * dinv;
    }
  }
  for (int K = 1; K <= ac.M(); ++K) {
    out.w_to_y[Symbol::w(K)] = Expr::sym(Symbol::y(K));
    out.y_to_w[Symbol::y(K)] = Expr::sym(Symbol::w(K));
  }
  for (int i : ac.idx()) {
    for (int j = 1; j <= n; ++j) {
      out.w_to_y[Symbol::w1(i, j)] = Expr::sym(Symbol::y1(i, j));
      out.y_to_w[Symbol::y1(i, j)] = Expr::sym(Symbol::w1(i, j));
    }
  }
  for (int s : ac.sigma()) {
    for (int i : ac.idx()) {
      Expr w;
      for (int j = 1; j <= n; ++j) w += out.z[Symbol::z(j, i)] * Expr::sym(Symbol::y1(s, j));
      out.w_to_y[Symbol::w1(s, i)] = w;
    }
    for (int j = 1; j <= n; ++j) {
      Expr y;
      for (int i : ac.idx()) y += Expr::sym(Symbol::w1(s, i)) * Expr::sym(Symbol::w1(i, j));
      out.y_to_w[Symbol::y1(s, j)] = y;
    }
  }
  return out;
}

std::vector<std::vector<int>> increasing_subsequences(int n, int M) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int K = start; K <= M; ++K) {
      cur.push_back(K);
      self(self, K + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

std::vector<std::vector<int>> regular_blocks(const PointAssignment& p, const JetChart& chart) {
  std::vector<std::vector<int>> out;
  const int n = chart.n();
  for (auto& sub : increasing_subsequences(n, chart.M())) {
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j) m(a, j) = p.at(Symbol::y1(sub[static_cast<std::size_t>(a)], j + 1));
    if (std::abs(m.determinant()) > 1e-12) out.push_back(sub);
  }
  return out;
}

double determinant(const GroupElement& a) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m.determinant();
}

PointAssignment gl_act(const PointAssignment& p, const GroupElement& a, const JetChart& chart) {
  const int n = chart.n();
  if (static_cast<int>(a.size()) != n) throw PreconditionError("group element has wrong size");
  if (determinant(a) <= 0) throw PreconditionError("group element must have positive determinant");
  PointAssignment q = p;
  for (int K = 1; K <= chart.M(); ++K) {
    for (int j = 1; j <= n; ++j) {
      double v = 0;
      for (int l = 1; l <= n; ++l)
        v += p.at(Symbol::y1(K, l)) * a[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(j - 1)];
      q.coords[Symbol::y1(K, j)] = v;
    }
  }
  return q;
}

}  // namespace lepage
