#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lepage/charts.hpp"
#include "lepage/equality.hpp"
#include "lepage/expr.hpp"

namespace lepage {

/// Memoized iterated partial derivatives of one function, keyed by the
/// sorted multiset of differentiation variables.
class DerivativeTable {
 public:
  explicit DerivativeTable(Expr f) : f_(std::move(f)) {}
  const Expr& function() const { return f_; }
  const Expr& get(std::vector<Symbol> vars);

 private:
  Expr f_;
  std::map<std::vector<Symbol>, Expr> memo_;
};

/// All permutations of 1..n with their signs (the nonzero Levi-Civita entries).
struct SignedPermutation {
  std::vector<int> p;
  int sign;
};
const std::vector<SignedPermutation>& signed_permutations(int n);

struct ZermeloEntry {
  int j = 0, l = 0;
  Expr residual;  // (dF/dy^K_j) y^K_l - delta^j_l F
  EqualResult verdict;
};

struct ZermeloReport {
  int n = 0;
  std::vector<ZermeloEntry> entries;  // row-major in (j, l)

  bool pass() const;
  const ZermeloEntry* first_failure() const;
};

ZermeloReport zermelo_residuals(const Expr& F, const JetChart& chart, const EqualOptions& opts = {});

struct EquivarianceResult {
  Verdict verdict = Verdict::Unknown;
  int evaluated = 0;
  std::optional<PointAssignment> witness;
  GroupElement group;
  double lhs = 0, rhs = 0;  // F(p.a), det(a) F(p)
};

/// Samples regular points p and a in GL+_n (a = I + 0.3 R, det a > 0.1) and
/// checks F(p.a) = det(a) F(p).
EquivarianceResult check_equivariance(const Expr& F, const JetChart& chart, int trials, std::uint64_t seed = 1,
                                      double tol = 1e-9);

/// F_G with F(w) = det(w^i_j) F_G; throws PreconditionError when the
/// factorization fails.
Expr grassmann_projection(const Expr& F, const AdaptedChart& ac, const EqualOptions& opts = {});

/// Slice of the (i)-chart: y^{i_a}_j = delta, y^sigma_j = w^sigma_{i_j}, y^K = w^K.
std::map<Symbol, Expr> grassmann_slice(const AdaptedChart& ac);

}  // namespace lepage
