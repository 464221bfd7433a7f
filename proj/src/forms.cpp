#include "lepage/forms.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "lepage/error.hpp"
#include "lepage/parser.hpp"

namespace lepage {

namespace {

std::string idx_str(int i) { return std::to_string(i); }

Expr S(Symbol s) { return Expr::sym(s); }

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

long factorial(int n) {
  long r = 1;
  for (int t = 2; t <= n; ++t) r *= t;
  return r;
}

/// All (positions, sign) permutations of 0..k-1.
std::vector<std::pair<std::vector<int>, int>> permutations(int k) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> out;
  do {
    int inv = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)]) ++inv;
    out.emplace_back(p, inv % 2 ? -1 : 1);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::vector<int>> increasing(int k, int hi) { return increasing_subsequences(k, hi); }

/// All tuples in [1,hi]^k.
std::vector<std::vector<int>> tuples(int k, int hi) {
  std::vector<std::vector<int>> out{{}};
  for (int t = 0; t < k; ++t) {
    std::vector<std::vector<int>> next;
    for (auto& v : out)
      for (int K = 1; K <= hi; ++K) {
        auto w = v;
        w.push_back(K);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

bool same_family(Basis a, Basis b) {
  auto grass = [](Basis x) { return x == Basis::GrassCoordinate || x == Basis::GrassContact; };
  return grass(a) == grass(b);
}

Basis coordinate_of(Basis b) {
  return (b == Basis::GrassContact || b == Basis::GrassCoordinate) ? Basis::GrassCoordinate : Basis::Coordinate;
}

/// Applies an algebra morphism generator-by-generator.
Form morph(const Form& a, const Frame& target, const std::function<Form(const Covector&)>& cov,
           const std::function<Expr(const Expr&)>& coef) {
  std::map<Covector, Form> memo;
  auto image = [&](const Covector& c) -> const Form& {
    auto it = memo.find(c);
    if (it == memo.end()) it = memo.emplace(c, cov(c)).first;
    return it->second;
  };
  Form out(a.degree(), target);
  for (const auto& [w, c] : a.terms()) {
    Form acc = Form::scalar(coef ? coef(c) : c, target);
    for (const auto& g : w) {
      acc = wedge(acc, image(g));
      if (acc.is_zero()) break;
    }
    out += acc;
  }
  return out;
}

int word_max_K(const Form& a) {
  int m = 0;
  for (const auto& [w, c] : a.terms())
    for (const auto& g : w)
      if (g.kind != CoKind::DX) m = std::max(m, static_cast<int>(g.i));
  return m;
}

}  // namespace

Covector Covector::d(Symbol s) {
  switch (s.kind) {
    case SymKind::X: return dx(s.i);
    case SymKind::Y: return dy(s.i);
    case SymKind::Y1: return dy1(s.i, s.j);
    case SymKind::Y2: return dy2(s.i, s.j, s.k);
    case SymKind::W: return dw(s.i);
    case SymKind::W1: return dw1(s.i, s.j);
    default: throw PreconditionError("no differential for symbol " + s.name());
  }
}

std::string Covector::name() const {
  switch (kind) {
    case CoKind::DX: return "dx" + idx_str(i);
    case CoKind::DY: return "dy" + idx_str(i);
    case CoKind::DY1: return "dy" + idx_str(i) + "_" + idx_str(j);
    case CoKind::DY2: return "dy" + idx_str(i) + "_" + idx_str(j) + idx_str(k);
    case CoKind::OMEGA: return "om" + idx_str(i);
    case CoKind::OMEGA1: return "om" + idx_str(i) + "_" + idx_str(j);
    case CoKind::DW: return "dw" + idx_str(i);
    case CoKind::DW1: return "dw" + idx_str(i) + "_" + idx_str(j);
    case CoKind::OMEGA_T: return "omt" + idx_str(i);
  }
  return "?";
}

std::string Covector::latex() const {
  auto up = [](int v) { return "^{" + std::to_string(v) + "}"; };
  auto dn = [](std::string v) { return "_{" + v + "}"; };
  switch (kind) {
    case CoKind::DX: return "dx" + up(i);
    case CoKind::DY: return "dy" + up(i);
    case CoKind::DY1: return "dy" + up(i) + dn(idx_str(j));
    case CoKind::DY2: return "dy" + up(i) + dn(idx_str(j) + idx_str(k));
    case CoKind::OMEGA: return "\\omega" + up(i);
    case CoKind::OMEGA1: return "\\omega" + up(i) + dn(idx_str(j));
    case CoKind::DW: return "dw" + up(i);
    case CoKind::DW1: return "dw" + up(i) + dn(idx_str(j));
    case CoKind::OMEGA_T: return "\\tilde{\\omega}" + up(i);
  }
  return "?";
}

std::optional<Covector> Covector::from_name(const std::string& s) {
  static const std::vector<std::pair<std::string, int>> prefixes = {
      {"omt", 0}, {"om", 1}, {"dx", 2}, {"dy", 3}, {"dw", 4}};
  for (const auto& [p, tag] : prefixes) {
    if (s.rfind(p, 0) != 0) continue;
    std::string rest = s.substr(p.size());
    std::string a, b;
    auto us = rest.find('_');
    a = rest.substr(0, us);
    if (us != std::string::npos) b = rest.substr(us + 1);
    auto digits = [](const std::string& t) {
      return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '1' && c <= '9'; });
    };
    if (a.size() != 1 || !digits(a)) return std::nullopt;
    if (us != std::string::npos && (!digits(b) || b.size() > 2)) return std::nullopt;
    int K = a[0] - '0';
    switch (tag) {
      case 0: return b.empty() ? std::optional(omega_t(K)) : std::nullopt;
      case 1:
        if (b.empty()) return omega(K);
        if (b.size() == 1) return omega1(K, b[0] - '0');
        return std::nullopt;
      case 2: return b.empty() ? std::optional(dx(K)) : std::nullopt;
      case 3:
        if (b.empty()) return dy(K);
        if (b.size() == 1) return dy1(K, b[0] - '0');
        return dy2(K, b[0] - '0', b[1] - '0');
      case 4:
        if (b.empty()) return dw(K);
        if (b.size() == 1) return dw1(K, b[0] - '0');
        return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string to_string(Basis b) {
  switch (b) {
    case Basis::Coordinate: return "coordinate";
    case Basis::Contact: return "contact";
    case Basis::GrassCoordinate: return "grassmann-coordinate";
    case Basis::GrassContact: return "grassmann-contact";
  }
  return "?";
}

int sort_word(Word& w) {
  int sign = 1;
  for (std::size_t a = 1; a < w.size(); ++a) {
    for (std::size_t b = a; b > 0; --b) {
      if (w[b - 1] == w[b]) return 0;
      if (w[b] < w[b - 1]) {
        std::swap(w[b], w[b - 1]);
        sign = -sign;
      } else {
        break;
      }
    }
  }
  for (std::size_t a = 1; a < w.size(); ++a)
    if (w[a] == w[a - 1]) return 0;
  return sign;
}

Form::Form(int degree, Frame frame) : degree_(degree), frame_(std::move(frame)) {
  if (degree < 0) throw PreconditionError("negative form degree");
}

Form Form::scalar(const Expr& f, Frame frame) {
  Form r(0, std::move(frame));
  r.add({}, f);
  return r;
}

Form Form::one(Covector c, Frame frame, const Expr& coef) {
  Form r(1, std::move(frame));
  r.add({c}, coef);
  return r;
}

void Form::add(const Word& w, const Expr& coef) {
  if (static_cast<int>(w.size()) != degree_) throw PreconditionError("word length does not match form degree");
  if (coef.is_zero()) return;
  Word s = w;
  int sign = sort_word(s);
  if (!sign) return;
  auto it = terms_.find(s);
  Expr c = sign > 0 ? coef : -coef;
  if (it == terms_.end()) {
    terms_.emplace(std::move(s), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Expr Form::get(const Word& w) const {
  Word s = w;
  int sign = sort_word(s);
  if (!sign) return Expr();
  auto it = terms_.find(s);
  if (it == terms_.end()) return Expr();
  return sign > 0 ? it->second : -it->second;
}

Form& Form::operator+=(const Form& o) {
  if (o.is_zero()) return *this;
  if (degree_ != o.degree_) throw PreconditionError("adding forms of different degree");
  if (!(frame_ == o.frame_)) throw PreconditionError("adding forms in different bases");
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form operator*(const Expr& f, const Form& a) {
  Form r(a.degree_, a.frame_);
  if (f.is_zero()) return r;
  for (const auto& [w, c] : a.terms_) r.add(w, f * c);
  return r;
}

Form Form::map_coefficients(const std::function<Expr(const Expr&)>& f) const {
  Form r(degree_, frame_);
  for (const auto& [w, c] : terms_) r.add(w, f(c));
  return r;
}

Form wedge(const Form& a, const Form& b) {
  if (!(a.frame() == b.frame())) throw PreconditionError("wedge of forms in different bases");
  Form r(a.degree() + b.degree(), a.frame());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add(w, ca * cb);
    }
  return r;
}

Form wedge_all(const std::vector<Form>& fs, const Frame& frame) {
  Form acc = Form::scalar(Expr(1), frame);
  for (const auto& f : fs) acc = wedge(acc, f);
  return acc;
}

Form omega0(const Frame& f) {
  if (f.is_grassmann()) throw PreconditionError("omega_0 lives on jet frames");
  Word w;
  for (int i = 1; i <= f.n; ++i) w.push_back(Covector::dx(i));
  Form r(f.n, f);
  r.add(w, Expr(1));
  return r;
}

Form omega_j(int j, const Frame& f) { return contract({{Symbol::x(j), Expr(1)}}, omega0(f)); }

Form to_basis(const Form& a, Basis target) {
  const Frame& f = a.frame();
  if (f.basis == target) return a;
  if (!same_family(f.basis, target)) throw PreconditionError("cannot convert between jet and Grassmann bases");
  Frame tf = f;
  tf.basis = target;
  const int n = f.n;
  std::function<Form(const Covector&)> cov;
  if (target == Basis::Contact) {
    cov = [&](const Covector& c) {
      Form r = Form::one(c, tf);
      if (c.kind == CoKind::DY) {
        r = Form::one(Covector::omega(c.i), tf);
        for (int l = 1; l <= n; ++l) r += Form::one(Covector::dx(l), tf, S(Symbol::y1(c.i, l)));
      } else if (c.kind == CoKind::DY1) {
        r = Form::one(Covector::omega1(c.i, c.j), tf);
        for (int l = 1; l <= n; ++l) r += Form::one(Covector::dx(l), tf, S(Symbol::y2(c.i, c.j, l)));
      }
      return r;
    };
  } else if (target == Basis::Coordinate) {
    cov = [&](const Covector& c) {
      Form r = Form::one(c, tf);
      if (c.kind == CoKind::OMEGA) {
        r = Form::one(Covector::dy(c.i), tf);
        for (int l = 1; l <= n; ++l) r -= Form::one(Covector::dx(l), tf, S(Symbol::y1(c.i, l)));
      } else if (c.kind == CoKind::OMEGA1) {
        r = Form::one(Covector::dy1(c.i, c.j), tf);
        for (int l = 1; l <= n; ++l) r -= Form::one(Covector::dx(l), tf, S(Symbol::y2(c.i, c.j, l)));
      }
      return r;
    };
  } else if (target == Basis::GrassContact) {
    cov = [&](const Covector& c) {
      bool sigma = std::find(f.idx.begin(), f.idx.end(), c.i) == f.idx.end();
      if (c.kind != CoKind::DW || !sigma) return Form::one(c, tf);
      Form r = Form::one(Covector::omega_t(c.i), tf);
      for (int i : f.idx) r += Form::one(Covector::dw(i), tf, S(Symbol::w1(c.i, i)));
      return r;
    };
  } else {
    cov = [&](const Covector& c) {
      if (c.kind != CoKind::OMEGA_T) return Form::one(c, tf);
      Form r = Form::one(Covector::dw(c.i), tf);
      for (int i : f.idx) r -= Form::one(Covector::dw(i), tf, S(Symbol::w1(c.i, i)));
      return r;
    };
  }
  return morph(a, tf, cov, nullptr);
}

bool is_projectable_horizontal(const Form& a) {
  for (const auto& [w, c] : a.terms())
    for (const auto& g : w)
      if (g.kind != CoKind::DX && g.kind != CoKind::DY && g.kind != CoKind::OMEGA) return false;
  return !a.frame().is_grassmann();
}

namespace {

/// Shared body of the two coefficient formulas: for every k and every sorted
/// (K; i) index set,
///   out_{K1..Kk i..} = sum_l s^{l-k} C(q-k, q-l) Alt_i[ in_{K1..Kl i_{l+1}..} y^{K_{k+1}}_{i_{k+1}} .. ]
Form lemma_convert(const Form& a, CoKind in_kind, CoKind out_kind, int s, Basis target) {
  const int q = a.degree();
  const int n = a.frame().n;
  const int M = std::max(1, word_max_K(a));
  Frame tf = a.frame();
  tf.basis = target;
  Form out(q, tf);
  auto in_coef = [&](const std::vector<int>& Ks, const std::vector<int>& is) {
    Word w;
    for (int K : Ks) w.push_back({in_kind, static_cast<std::uint8_t>(K), 0, 0});
    for (int i : is) w.push_back(Covector::dx(i));
    return a.get(w);
  };
  for (int k = 0; k <= q; ++k) {
    const int r = q - k;
    auto perms = permutations(r);
    for (const auto& Ks : increasing(k, M)) {
      for (const auto& is : increasing(r, n)) {
        Expr total;
        for (int l = k; l <= q; ++l) {
          long weight = binom(q - k, q - l) * ((l - k) % 2 && s < 0 ? -1 : 1);
          Expr alt;
          for (const auto& [p, sg] : perms) {
            std::vector<int> ip;
            for (int t = 0; t < r; ++t) ip.push_back(is[static_cast<std::size_t>(p[static_cast<std::size_t>(t)])]);
            // ip[0 .. l-k) pair with the summed K's, the rest stay as form indices
            std::vector<int> rest(ip.begin() + (l - k), ip.end());
            Expr inner;
            for (const auto& dummy : tuples(l - k, M)) {
              std::vector<int> KK = Ks;
              KK.insert(KK.end(), dummy.begin(), dummy.end());
              Expr c = in_coef(KK, rest);
              if (c.is_zero()) continue;
              for (int t = 0; t < l - k; ++t)
                c *= S(Symbol::y1(dummy[static_cast<std::size_t>(t)], ip[static_cast<std::size_t>(t)]));
              inner += c;
            }
            alt += sg > 0 ? inner : -inner;
          }
          total += Expr(Rational(weight, factorial(r))) * alt;
        }
        Word w;
        for (int K : Ks) w.push_back({out_kind, static_cast<std::uint8_t>(K), 0, 0});
        for (int i : is) w.push_back(Covector::dx(i));
        out.add(w, total);
      }
    }
  }
  return out;
}

}  // namespace

Form lemma_to_contact(const Form& a) {
  if (a.frame().basis != Basis::Coordinate || !is_projectable_horizontal(a))
    throw PreconditionError("coefficient conversion needs a pi^{1,0}-horizontal coordinate form");
  return lemma_convert(a, CoKind::DY, CoKind::OMEGA, +1, Basis::Contact);
}

Form lemma_to_coordinate(const Form& a) {
  if (a.frame().basis != Basis::Contact || !is_projectable_horizontal(a))
    throw PreconditionError("coefficient conversion needs a pi^{1,0}-horizontal contact form");
  return lemma_convert(a, CoKind::OMEGA, CoKind::DY, -1, Basis::Coordinate);
}

Form basis_convert(const Form& a, Basis target) {
  const Basis from = a.frame().basis;
  if (from == Basis::Coordinate && target == Basis::Contact && is_projectable_horizontal(a)) return lemma_to_contact(a);
  if (from == Basis::Contact && target == Basis::Coordinate && is_projectable_horizontal(a))
    return lemma_to_coordinate(a);
  return to_basis(a, target);
}

Form ext_d(const Form& a) {
  const Basis b = a.frame().basis;
  const Basis cb = coordinate_of(b);
  if (b != cb) return to_basis(ext_d(to_basis(a, cb)), b);
  Form r(a.degree() + 1, a.frame());
  for (const auto& [w, c] : a.terms()) {
    for (const auto& s : free_symbols(c)) {
      Expr dc = diff(c, s);
      if (dc.is_zero()) continue;
      Word ww;
      ww.push_back(Covector::d(s));
      ww.insert(ww.end(), w.begin(), w.end());
      r.add(ww, dc);
    }
  }
  return r;
}

Expr pair(const Covector& c, const VectorField& X, const Frame& f) {
  auto get = [&](Symbol s) {
    auto it = X.find(s);
    return it == X.end() ? Expr() : it->second;
  };
  switch (c.kind) {
    case CoKind::DX: return get(Symbol::x(c.i));
    case CoKind::DY: return get(Symbol::y(c.i));
    case CoKind::DY1: return get(Symbol::y1(c.i, c.j));
    case CoKind::DY2: return get(Symbol::y2(c.i, c.j, c.k));
    case CoKind::DW: return get(Symbol::w(c.i));
    case CoKind::DW1: return get(Symbol::w1(c.i, c.j));
    case CoKind::OMEGA: {
      Expr r = get(Symbol::y(c.i));
      for (int l = 1; l <= f.n; ++l) r -= S(Symbol::y1(c.i, l)) * get(Symbol::x(l));
      return r;
    }
    case CoKind::OMEGA1: {
      Expr r = get(Symbol::y1(c.i, c.j));
      for (int l = 1; l <= f.n; ++l) r -= S(Symbol::y2(c.i, c.j, l)) * get(Symbol::x(l));
      return r;
    }
    case CoKind::OMEGA_T: {
      Expr r = get(Symbol::w(c.i));
      for (int i : f.idx) r -= S(Symbol::w1(c.i, i)) * get(Symbol::w(i));
      return r;
    }
  }
  return Expr();
}

Form contract(const VectorField& X, const Form& a) {
  if (a.degree() == 0) throw PreconditionError("contraction of a 0-form");
  Form r(a.degree() - 1, a.frame());
  for (const auto& [w, c] : a.terms()) {
    for (std::size_t p = 0; p < w.size(); ++p) {
      Expr v = pair(w[p], X, a.frame());
      if (v.is_zero()) continue;
      Word rest;
      for (std::size_t t = 0; t < w.size(); ++t)
        if (t != p) rest.push_back(w[t]);
      r.add(rest, (p % 2 ? -v : v) * c);
    }
  }
  return r;
}

Form lie_derivative(const VectorField& X, const Form& a) {
  Form r = contract(X, ext_d(a));
  if (a.degree() > 0) r += ext_d(contract(X, a));
  return r;
}

Form horizontalize(const Form& a) {
  if (a.frame().is_grassmann()) throw PreconditionError("horizontalization is defined on jet frames");
  const int n = a.frame().n;
  Frame tf = Frame::jet(n, Basis::Coordinate);
  auto cov = [&](const Covector& c) {
    Form r(1, tf);
    switch (c.kind) {
      case CoKind::DX: r.add({c}, Expr(1)); break;
      case CoKind::DY:
        for (int k = 1; k <= n; ++k) r.add({Covector::dx(k)}, S(Symbol::y1(c.i, k)));
        break;
      case CoKind::DY1:
        for (int k = 1; k <= n; ++k) r.add({Covector::dx(k)}, S(Symbol::y2(c.i, c.j, k)));
        break;
      case CoKind::OMEGA:
      case CoKind::OMEGA1: break;
      case CoKind::DY2: throw UnsupportedOrder("horizontalization of dy_jk needs order 3");
      default: throw PreconditionError("unexpected generator in jet form");
    }
    return r;
  };
  return morph(a, tf, cov, nullptr);
}

Form contact_component(const Form& a, int k) {
  if (k < 0 || k > a.degree()) throw PreconditionError("contact component index out of range");
  Basis cb = a.frame().is_grassmann() ? Basis::GrassContact : Basis::Contact;
  Form c = to_basis(a, cb);
  Form r(a.degree(), c.frame());
  for (const auto& [w, coef] : c.terms()) {
    int cnt = static_cast<int>(std::count_if(w.begin(), w.end(), [](const Covector& g) { return g.is_contact(); }));
    if (cnt == k) r.add(w, coef);
  }
  return r;
}

namespace {

struct JetSubstitution {
  std::map<Symbol, Expr> coords;
  std::vector<std::vector<Expr>> d1;  // d1[K][j] = d_j zeta^K
};

JetSubstitution jet_substitution(const Immersion& zeta, int n) {
  JetSubstitution js;
  const int M = static_cast<int>(zeta.components.size());
  js.d1.resize(static_cast<std::size_t>(M));
  for (int K = 1; K <= M; ++K) {
    const Expr& z = zeta.components[static_cast<std::size_t>(K - 1)];
    for (const auto& s : free_symbols(z))
      if (s.kind != SymKind::X || s.i > n) throw PreconditionError("immersion components must depend on x only");
    js.coords[Symbol::y(K)] = z;
    for (int j = 1; j <= n; ++j) {
      Expr dj = diff(z, Symbol::x(j));
      js.d1[static_cast<std::size_t>(K - 1)].push_back(dj);
      js.coords[Symbol::y1(K, j)] = dj;
      for (int k = j; k <= n; ++k) js.coords[Symbol::y2(K, j, k)] = diff(dj, Symbol::x(k));
    }
  }
  return js;
}

Form exact_one_form(const Expr& g, const Frame& tf) {
  Form r(1, tf);
  for (int j = 1; j <= tf.n; ++j) r.add({Covector::dx(j)}, diff(g, Symbol::x(j)));
  return r;
}

}  // namespace

std::map<Symbol, Expr> jet_prolongation(const Immersion& zeta, int n) { return jet_substitution(zeta, n).coords; }

Form pullback_jet(const Form& a, const Immersion& zeta) {
  if (a.frame().is_grassmann()) throw PreconditionError("jet pullback of a Grassmann form");
  const int n = a.frame().n;
  Form c = to_basis(a, Basis::Coordinate);
  JetSubstitution js = jet_substitution(zeta, n);
  Frame tf = Frame::jet(n, Basis::Coordinate);
  auto cov = [&](const Covector& g) {
    switch (g.kind) {
      case CoKind::DX: return Form::one(g, tf);
      case CoKind::DY: return exact_one_form(js.coords.at(Symbol::y(g.i)), tf);
      case CoKind::DY1: return exact_one_form(js.coords.at(Symbol::y1(g.i, g.j)), tf);
      case CoKind::DY2: return exact_one_form(js.coords.at(Symbol::y2(g.i, g.j, g.k)), tf);
      default: throw PreconditionError("unexpected generator in jet form");
    }
  };
  return morph(c, tf, cov, [&](const Expr& e) { return substitute(e, js.coords); });
}

std::map<Symbol, Expr> grassmann_prolongation(const Immersion& zeta, const AdaptedChart& ac) {
  const int n = ac.n();
  if (static_cast<int>(zeta.components.size()) != ac.M())
    throw PreconditionError("immersion has the wrong number of components");
  JetSubstitution js = jet_substitution(zeta, n);
  AdaptedMaps maps = to_adapted(ac);
  std::map<Symbol, Expr> out;
  for (int K = 1; K <= ac.M(); ++K) out[Symbol::w(K)] = js.coords.at(Symbol::y(K));
  for (int s : ac.sigma())
    for (int i : ac.idx()) out[Symbol::w1(s, i)] = substitute(maps.w_to_y.at(Symbol::w1(s, i)), js.coords);
  return out;
}

Form pullback_grassmann(const Form& a, const Immersion& zeta) {
  const Frame& f = a.frame();
  if (!f.is_grassmann()) throw PreconditionError("Grassmann pullback of a jet form");
  const int M = static_cast<int>(zeta.components.size());
  AdaptedChart ac(JetChart(f.n, M - f.n), f.idx);
  auto coords = grassmann_prolongation(zeta, ac);
  Form c = to_basis(a, Basis::GrassCoordinate);
  Frame tf = Frame::jet(f.n, Basis::Coordinate);
  auto cov = [&](const Covector& g) {
    switch (g.kind) {
      case CoKind::DW: return exact_one_form(coords.at(Symbol::w(g.i)), tf);
      case CoKind::DW1: return exact_one_form(coords.at(Symbol::w1(g.i, g.j)), tf);
      default: throw PreconditionError("unexpected generator in Grassmann form");
    }
  };
  return morph(c, tf, cov, [&](const Expr& e) { return substitute(e, coords); });
}

bool is_immersion_at(const Immersion& zeta, int n, const PointAssignment& x) {
  const int M = static_cast<int>(zeta.components.size());
  JetChart chart(n, std::max(1, M - n));
  PointAssignment jets;
  for (int K = 1; K <= M; ++K)
    for (int j = 1; j <= n; ++j)
      jets.set(Symbol::y1(K, j), eval(diff(zeta.components[static_cast<std::size_t>(K - 1)], Symbol::x(j)), x));
  for (int K = M + 1; K <= chart.M(); ++K)
    for (int j = 1; j <= n; ++j) jets.set(Symbol::y1(K, j), 0.0);
  return !regular_blocks(jets, chart).empty();
}

Form to_grassmann(const Form& a, const AdaptedChart& ac) {
  Form c = a.frame().basis == Basis::Contact ? basis_convert(a, Basis::Coordinate) : a;
  if (c.frame().is_grassmann()) return to_basis(c, Basis::GrassCoordinate);
  std::map<Symbol, Expr> slice;
  const int n = ac.n();
  for (int K = 1; K <= ac.M(); ++K) slice[Symbol::y(K)] = S(Symbol::w(K));
  for (std::size_t a_ = 0; a_ < ac.idx().size(); ++a_)
    for (int j = 1; j <= n; ++j) slice[Symbol::y1(ac.idx()[a_], j)] = Expr(static_cast<int>(a_) + 1 == j ? 1 : 0);
  for (int s : ac.sigma())
    for (int j = 1; j <= n; ++j) slice[Symbol::y1(s, j)] = S(Symbol::w1(s, ac.idx()[static_cast<std::size_t>(j - 1)]));
  Frame tf = Frame::grassmann(ac, Basis::GrassCoordinate);
  auto cov = [&](const Covector& g) {
    if (g.kind != CoKind::DY) throw PreconditionError("only dy-forms descend to the Grassmann fibration");
    return Form::one(Covector::dw(g.i), tf);
  };
  return morph(c, tf, cov, [&](const Expr& e) {
    for (const auto& s : free_symbols(e))
      if (s.kind != SymKind::Y && s.kind != SymKind::Y1)
        throw PreconditionError("coefficient depends on " + s.name() + ", not a function on velocities");
    return substitute(e, slice);
  });
}

FormEqualResult form_equal(const Form& a, const Form& b, const EqualOptions& opts) {
  FormEqualResult res;
  if (a.degree() != b.degree()) {
    res.equal = false;
    res.detail.verdict = Verdict::Unequal;
    res.detail.method = "degree";
    return res;
  }
  Form d = a - to_basis(b, a.frame().basis);
  res.detail.verdict = Verdict::Equal;
  res.detail.method = "structural";
  for (const auto& [w, c] : d.terms()) {
    EqualResult r = is_zero(c, opts);
    if (r.verdict != Verdict::Equal) {
      res.equal = false;
      res.word = w;
      res.detail = r;
      return res;
    }
    res.detail = r;
  }
  return res;
}

std::string to_string(const Form& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (const auto& g : w) os << "*" << g.name();
  }
  return os.str();
}

std::string to_latex(const Form& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "\\left(" << to_latex(c) << "\\right)";
    for (std::size_t t = 0; t < w.size(); ++t) os << (t ? " \\wedge " : " \\, ") << w[t].latex();
  }
  return os.str();
}

}  // namespace lepage
