#include "lepage/corpus.hpp"

namespace lepage {

Expr RandomExpr::leaf() {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) + 1);
  int k = pick(rng_);
  if (k < static_cast<int>(pool.size())) return Expr::sym(pool[static_cast<std::size_t>(k)]);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  return Expr(Rational(num(rng_), den(rng_)));
}

Expr RandomExpr::tree(int depth) {
  if (depth <= 0) return leaf();
  std::uniform_int_distribution<int> op(0, sqrt_ ? 6 : 5);
  switch (op(rng_)) {
    case 0:
    case 1: return tree(depth - 1) + tree(depth - 1);
    case 2: return tree(depth - 1) - tree(depth - 1);
    case 3: return tree(depth - 1) * tree(depth - 1);
    case 4: return tree(depth - 1).pow(2);
    case 5: return leaf();
    default: {
      Expr inner = tree(depth - 2) * tree(depth - 2) + Expr(1);
      return sqrt(inner);
    }
  }
}

RandomForm::RandomForm(std::uint64_t seed, bool projectable) : gen_(seed, false) {
  gen_.pool = {Symbol::x(1), Symbol::y(1), Symbol::y(3), Symbol::y1(1, 1), Symbol::y1(2, 2), Symbol::y1(3, 1)};
  gens_ = {Covector::dx(1), Covector::dx(2), Covector::dy(1), Covector::dy(2), Covector::dy(3)};
  if (!projectable) {
    gens_.push_back(Covector::dy1(1, 2));
    gens_.push_back(Covector::dy1(3, 1));
  }
}

Form RandomForm::operator()(int degree) {
  Form f(degree, Frame::jet(2));
  std::uniform_int_distribution<int> nterms(1, 4);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(gens_.size()) - 1);
  int t = nterms(gen_.rng());
  for (int a = 0; a < t; ++a) {
    Word w;
    for (int d = 0; d < degree; ++d) w.push_back(gens_[static_cast<std::size_t>(pick(gen_.rng()))]);
    f.add(w, gen_.tree(3));
  }
  return f;
}

}  // namespace lepage
