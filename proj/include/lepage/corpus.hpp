#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lepage/forms.hpp"

namespace lepage {

/// Random expression trees over a fixed symbol pool.
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed, bool allow_sqrt = true) : rng_(seed), sqrt_(allow_sqrt) {}

  std::vector<Symbol> pool = {Symbol::y(1), Symbol::y(2), Symbol::y1(1, 1), Symbol::y1(2, 2),
                              Symbol::y1(1, 2), Symbol::x(1)};

  Expr leaf();
  Expr tree(int depth);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool sqrt_;
};

/// Random order-1 coordinate-basis forms over n=2, m=1.
class RandomForm {
 public:
  explicit RandomForm(std::uint64_t seed, bool projectable = false);
  Form operator()(int degree);

 private:
  RandomExpr gen_;
  std::vector<Covector> gens_;
};

}  // namespace lepage
