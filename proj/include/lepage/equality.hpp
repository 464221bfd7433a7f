#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "lepage/expr.hpp"
#include "lepage/point.hpp"

namespace lepage {

enum class Verdict { Equal, Unequal, Unknown };

std::string to_string(Verdict v);

struct EqualOptions {
  int trials = 20;
  double tol = 1e-9;
  std::uint64_t seed = 20240601;
  /// Node budget for the symbolic (denominator-clearing) attempt.
  std::size_t symbolic_cap = 200000;
  /// Extra domain guard; points for which it returns false are skipped.
  std::function<bool(const PointAssignment&)> guard;

  static EqualOptions sampled(int n) {
    EqualOptions o;
    o.trials = n;
    return o;
  }
};

struct EqualResult {
  Verdict verdict = Verdict::Unknown;
  std::string method;  // "structural", "symbolic", "numeric"
  std::optional<PointAssignment> witness;
  double lhs = 0.0, rhs = 0.0;
  int evaluated = 0;

  explicit operator bool() const { return verdict == Verdict::Equal; }
};

/// Draws coordinates uniformly from [-2,-0.1] U [0.1,2].
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}
  double value();
  PointAssignment sample(const std::set<Symbol>& syms, const std::set<FuncKey>& funcs);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

bool close(double a, double b, double tol);

EqualResult equal(const Expr& a, const Expr& b, const EqualOptions& opts = {});
inline EqualResult is_zero(const Expr& a, const EqualOptions& opts = {}) { return equal(a, Expr(), opts); }

}  // namespace lepage
