#include "lepage/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "lepage/corpus.hpp"
#include "lepage/error.hpp"
#include "lepage/minimal.hpp"
#include "lepage/parser.hpp"
#include "lepage/variation.hpp"

namespace lepage {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

std::string format_point(const PointAssignment& p) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [s, v] : p.coords) {
    os << (first ? "" : ", ") << s.name() << "=" << v;
    first = false;
  }
  return os.str() + "}";
}

EqualOptions opts_with(int trials, std::uint64_t seed) {
  EqualOptions o = EqualOptions::sampled(trials);
  o.seed = seed;
  return o;
}

Lagrangian trivial_lagrangian() { return Lagrangian(JetChart(2, 1), parse("y1_1*y2_2 - y1_2*y2_1")); }

Lagrangian antisymmetric_control() {
  return Lagrangian(JetChart(2, 2),
                    parse("(y1_1*y2_2 - y2_1*y1_2) + 2*(y3_1*y4_2 - y4_1*y3_2) + (y1_1*y3_2 - y3_1*y1_2)"));
}

FieldSpec unit_field(int M, int K) {
  std::vector<Rational> c(static_cast<std::size_t>(M));
  c[static_cast<std::size_t>(K - 1)] = 1;
  return FieldSpec::constant(c);
}

double scherk(double x, double y) { return std::log(std::cos(x) / std::cos(y)); }

GridField dirichlet(const std::function<double(double, double)>& f, int N) {
  GridField g = GridField::sample(f, -1, 1, -1, 1, N, N);
  for (int j = 1; j < N - 1; ++j)
    for (int i = 1; i < N - 1; ++i) g.at(i, j) = 0;
  return g;
}

void zermelo_suite(Outcome& o, std::uint64_t seed) {
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  auto rep = zermelo_residuals(lam.L, lam.chart, opts_with(20, seed));
  bool symbolic = rep.pass() && rep.entries.size() == 4;
  for (const auto& e : rep.entries) symbolic = symbolic && e.verdict.method != "numeric";
  o.require(symbolic, "minimal Lagrangian residuals not symbolically zero");
  o.detail << "minimal: " << rep.entries.size() << " residuals zero; ";
  for (const char* f : {"y1_1 + 1", "y1_1^2"}) {
    auto r = zermelo_residuals(parse(f), lam.chart, opts_with(20, seed));
    const ZermeloEntry* bad = r.first_failure();
    bool witnessed = bad && bad->verdict.witness.has_value();
    o.require(!r.pass() && witnessed, std::string("control ") + f + " did not fail with a witness");
    if (witnessed)
      o.detail << f << " fails at (" << bad->j << "," << bad->l << "), residual " << to_string(bad->residual) << " at "
               << format_point(*bad->verdict.witness) << "; ";
  }
}

void lepage_suite(Outcome& o, std::uint64_t seed) {
  EqualOptions eq = opts_with(20, seed);
  std::vector<std::pair<std::string, Lagrangian>> lams = {{"minimal(1,1)", minimal_lagrangian(Metric::euclidean(2), 1)},
                                                          {"minimal(2,1)", minimal_lagrangian(Metric::euclidean(3), 2)},
                                                          {"h(dy1^dy2)", trivial_lagrangian()}};
  int checked = 0;
  for (const auto& [name, lam] : lams)
    for (auto k : {LepageKind::PoincareCartan, LepageKind::Fundamental, LepageKind::Caratheodory,
                   LepageKind::HilbertCaratheodory, LepageKind::W}) {
      HomogeneityOptions ho;
      ho.eq = opts_with(50, seed);
      Form rho = construct(k, lam, ho);
      o.require(check_horizontal_part(rho, lam, eq).equal, name + " " + to_string(k) + " h(rho) != lambda");
      o.require(check_lepage_property(rho, lam.chart, 20, seed, eq).pass, name + " " + to_string(k) + " h(i_xi d rho) != 0");
      ++checked;
    }
  o.detail << checked << " constructor outputs checked on 20 vertical fields each; ";
}

void homogeneous_z_equals_w(Outcome& o, std::uint64_t seed) {
  EqualOptions eq = opts_with(20, seed);
  for (int M : {3, 4}) {
    Lagrangian lam = minimal_lagrangian(Metric::euclidean(M), 2);
    o.require(form_equal(fundamental(lam), fundamental_homogeneous(lam), eq).equal,
              "Z != W for minimal m=" + std::to_string(M - 2));
  }
  Lagrangian r = antisymmetric_control();
  auto res = form_equal(fundamental_homogeneous(r), hilbert_caratheodory(r), eq);
  bool witnessed = !res.equal && res.detail.verdict == Verdict::Unequal && res.detail.witness.has_value();
  o.require(witnessed, "antisymmetric control: W and HC not separated by a witness");
  o.detail << "Z = W for minimal m=1,2; ";
  if (witnessed) o.detail << "W != HC at " << format_point(*res.detail.witness) << "; ";
}

void metric_coincidence(Outcome& o, std::uint64_t seed) {
  EqualOptions eq = opts_with(50, seed);
  for (const auto& [name, g] : {std::pair{std::string("euclidean"), Metric::euclidean(3)},
                                std::pair{std::string("diag(exp(y1),1,1)"), Metric::diagonal({parse("exp(y1)"), Expr(1), Expr(1)})}}) {
    auto rep = verify_coincidence(g, 2, eq);
    for (const auto& e : rep.entries) {
      o.require(e.result.equal, name + " " + e.pair);
      o.detail << name << " " << e.pair << " " << to_string(e.result.detail.verdict) << "; ";
    }
  }
}

void euler_lagrange_suite(Outcome& o, std::uint64_t seed) {
  auto r = check_graph_el(std::nullopt, opts_with(20, seed));
  o.require(r.pass, "EL on graphs is not -(1+u_x^2+u_y^2)^(-3/2) times the minimal-surface operator");
  o.detail << "E_3 = -(1+u_x^2+u_y^2)^(-3/2) * MSE (" << r.proportional.method << "); ";
  Lagrangian t = trivial_lagrangian();
  bool zero = true;
  for (const auto& e : euler_lagrange(t)) zero = zero && e.is_zero();
  o.require(zero, "trivial Lagrangian has nonzero E_K");
  Form dz = ext_d(fundamental(t));
  o.require(form_equal(dz, Form(dz.degree(), dz.frame())).equal, "d(Z) != 0 for the trivial Lagrangian");
  o.detail << "trivial: E_K = 0, dZ = 0; ";
}

void exact_solutions(Outcome& o) {
  o.require(is_zero_symbolic(graph_el_residual(parse("3*x1 - 2*x2 + 5"))), "plane residual");
  o.require(is_zero_symbolic(graph_el_residual(parse("log(cos(x1)) - log(cos(x2))"))), "Scherk residual");
  Expr hel = graph_el_residual(parse("atan(x2/x1)"));
  double worst = 0;
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b) {
      PointAssignment p;
      p.set(Symbol::x(1), 1 + a / 99.0);
      p.set(Symbol::x(2), 1 + b / 99.0);
      worst = std::max(worst, std::abs(eval(hel, p)));
    }
  o.require(worst <= 1e-8, "atan(y/x) residual above 1e-8");
  o.detail << "plane and Scherk symbolically 0; atan(y/x) max " << worst << " on 10^4 points; ";
}

void solver_suite(Outcome& o) {
  std::vector<double> errs;
  for (int N : {17, 33, 65}) {
    auto rep = solve_minimal_surface(dirichlet(scherk, N), 1e-10, 12);
    o.require(rep.converged && rep.iterations <= 12, "Newton did not converge on " + std::to_string(N) + "^2");
    double e = 0;
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) e = std::max(e, std::abs(rep.u.at(i, j) - scherk(rep.u.x(i), rep.u.y(j))));
    errs.push_back(e);
    o.detail << N << "^2: " << rep.iterations << " it, res " << rep.residual << ", err " << e << "; ";
  }
  for (std::size_t k = 1; k < errs.size(); ++k) {
    double order = std::log2(errs[k - 1] / errs[k]);
    o.require(order >= 1.9, "observed order below 1.9");
    o.detail << "order " << order << "; ";
  }
}

void conservation_suite(Outcome& o) {
  auto sol = solve_minimal_surface(dirichlet(scherk, 65));
  auto good = reconstruct_and_check(sol.u);
  o.require(good.closed && good.rovnice <= good.gate && good.pass, "converged Scherk solution fails a gate");
  o.detail << "solution: curl " << good.circulation << ", ufg " << good.rovnice << ", gate " << good.gate << "; ";
  auto bowl = reconstruct_and_check(GridField::sample([](double x, double y) { return x * x + y * y; }, -1, 1, -1, 1, 65, 65));
  o.require(!bowl.closed && bowl.rovnice > bowl.gate, "x^2+y^2 passes a gate");
  o.detail << "x^2+y^2: curl " << bowl.circulation << ", ufg " << bowl.rovnice << "; ";
}

void first_variation_suite(Outcome& o) {
  auto r = first_variation_check(krupka_form(Metric::euclidean(3), 2), FieldSpec::constant({1, -2, 3}),
                                 Immersion{{parse("x1"), parse("x2"), parse("x1*x2/10")}}, {0, 1, 0, 1}, 1e-6, 16, 4);
  o.require(r.pass, "relative difference above 1e-6");
  o.detail << "lhs " << r.lhs << ", el " << r.el_term << ", boundary " << r.boundary << ", rel " << r.relative << "; ";
}

void noether_suite(Outcome& o, std::uint64_t seed) {
  EqualOptions eq = opts_with(20, seed);
  for (int m : {1, 2}) {
    AdaptedChart ac(JetChart(2, m), {1, 2});
    Form eta = to_grassmann(krupka_form(Metric::euclidean(m + 2), 2).rho, ac);
    for (int K = 1; K <= m + 2; ++K)
      o.require(noether_residual(unit_field(m + 2, K), eta, eq).zero, "residual for d/dy" + std::to_string(K));
  }
  o.detail << "3 + 4 constant fields invariant; ";
  AdaptedChart ac(JetChart(2, 1), {1, 2});
  Form eta = to_grassmann(krupka_form(Metric::euclidean(3), 2).rho, ac);
  Immersion plane{{parse("x1"), parse("x2"), parse("2*x1 - 3*x2 + 1")}};
  for (int K = 1; K <= 3; ++K) {
    Form dp = ext_d(pullback_grassmann(noether_current(unit_field(3, K), eta), plane));
    bool zero = true;
    for (const auto& [w, c] : dp.terms()) zero = zero && is_zero_symbolic(c);
    o.require(zero, "d of pulled-back current " + std::to_string(K));
  }
  o.detail << "currents closed on the plane; ";
  Lagrangian lam = minimal_lagrangian(Metric::euclidean(3), 2);
  Immersion zeta{{parse("x1"), parse("x2"), parse("sin(x1)*x2 + x1^2/3")}};
  std::map<Symbol, Expr> mu = {{Symbol::x(1), parse("x1 + x2^2/10")}, {Symbol::x(2), parse("x2")}};
  Immersion composed;
  for (const auto& c : zeta.components) composed.components.push_back(substitute(c, mu));
  double a = action(lam, composed, {0, 1, 0, 1});
  Expr f = pullback_jet(lam.L * omega0(lam.frame()), zeta).get({Covector::dx(1), Covector::dx(2)});
  double b = integrate_region(
      [&](double x, double y) {
        PointAssignment p;
        p.set(Symbol::x(1), x);
        p.set(Symbol::x(2), y);
        return eval(f, p);
      },
      0, 1, [](double y) { return y * y / 10; }, [](double y) { return 1 + y * y / 10; });
  o.require(std::abs(a - b) <= 1e-8, "reparametrized area differs");
  o.detail << "area " << a << " vs " << b << "; ";
}

void structural_suite(Outcome& o, std::uint64_t seed) {
  RandomForm gen(seed + 22);
  EqualOptions eq = opts_with(20, seed);
  const Frame J2 = Frame::jet(2);
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    Form a = gen(1 + i % 2), b = gen(1);
    bool good = form_equal(basis_convert(basis_convert(a, Basis::Contact), Basis::Coordinate), a, eq).equal;
    good = good && form_equal(ext_d(ext_d(a)), Form(a.degree() + 2, J2), eq).equal;
    Form rhs = wedge(ext_d(a), b) + (a.degree() % 2 ? -wedge(a, ext_d(b)) : wedge(a, ext_d(b)));
    good = good && form_equal(ext_d(wedge(a, b)), rhs, eq).equal;
    if (good) ++ok;
  }
  o.require(ok == 50, "structural identities");
  o.detail << ok << "/50 forms pass roundtrip, d^2 = 0 and Leibniz; ";
}

struct Spec {
  const char* title;
  double limit;  // seconds, 0 = none
  std::function<void(Outcome&, std::uint64_t)> run;
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s = {
      {"Zermelo suite", 5, zermelo_suite},
      {"Lepage-equivalence suite", 30, lepage_suite},
      {"Z = W for homogeneous Lagrangians, W != HC for the control", 0, homogeneous_z_equals_w},
      {"W, HC and Krupka form coincide for metric Lagrangians", 0, metric_coincidence},
      {"Euler-Lagrange reproduction", 0, euler_lagrange_suite},
      {"exact minimal-surface solutions", 0, [](Outcome& o, std::uint64_t) { exact_solutions(o); }},
      {"solver convergence", 60, [](Outcome& o, std::uint64_t) { solver_suite(o); }},
      {"conservation equivalence", 0, [](Outcome& o, std::uint64_t) { conservation_suite(o); }},
      {"first variation formula", 0, [](Outcome& o, std::uint64_t) { first_variation_suite(o); }},
      {"invariance and Noether currents", 0, noether_suite},
      {"structural identities", 0, structural_suite},
  };
  return s;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kAcceptanceCriteria) throw PreconditionError("no acceptance criterion " + std::to_string(id));
  const Spec& s = specs()[static_cast<std::size_t>(id - 1)];
  CriterionResult r{id, s.title, false, {}, 0};
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    s.run(o, seed);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "error: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s.limit > 0 && r.seconds > s.limit) o.require(false, "runtime limit " + std::to_string(s.limit) + " s");
  r.pass = o.pass;
  r.detail = o.detail.str();
  if (r.detail.size() >= 2 && r.detail.ends_with("; ")) r.detail.resize(r.detail.size() - 2);
  return r;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

}  // namespace lepage
