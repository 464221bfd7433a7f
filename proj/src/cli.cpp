#include "lepage/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lepage/acceptance.hpp"
#include "lepage/parser.hpp"

namespace lepage::cli {

using nlohmann::json;

namespace {

std::string show(const Expr& e) { return to_string(simplify(e)); }
std::string show_latex(const Expr& e) { return to_latex(simplify(e)); }

Form simplified(const Form& f) {
  Form out(f.degree(), f.frame());
  for (const auto& [w, c] : f.terms()) out.add(w, simplify(c));
  return out;
}

Expr parse_in(const json& v, const JetChart& chart, const std::string& where) {
  if (!v.is_string()) throw InputError(where + ": expected a DSL string");
  try {
    return parse(v.get<std::string>(), chart.parse_context());
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<int>();
}

std::vector<Expr> expr_list(const json& v, const JetChart& chart, int size, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != size)
    throw InputError(where + ": expected an array of " + std::to_string(size) + " DSL strings");
  std::vector<Expr> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(parse_in(v[k], chart, where + "[" + std::to_string(k) + "]"));
  return out;
}

Metric load_metric(const json& m, const JetChart& chart) {
  const int M = chart.M();
  if (!m.is_object() || m.size() != 1) throw InputError("metric: expected one of euclidean, diagonal, matrix");
  if (m.contains("euclidean")) {
    if (m["euclidean"] != true) throw InputError("metric.euclidean must be true");
    return Metric::euclidean(M);
  }
  if (m.contains("diagonal")) return Metric::diagonal(expr_list(m["diagonal"], chart, M, "metric.diagonal"));
  if (m.contains("matrix")) {
    const json& rows = m["matrix"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != M) throw InputError("metric.matrix: expected M rows");
    std::vector<std::vector<Expr>> g;
    for (std::size_t r = 0; r < rows.size(); ++r)
      g.push_back(expr_list(rows[r], chart, M, "metric.matrix[" + std::to_string(r) + "]"));
    return Metric(g);
  }
  throw InputError("metric: expected one of euclidean, diagonal, matrix");
}

HorizontalNForm load_form(const json& f, const JetChart& chart) {
  if (!f.is_object() || f.empty()) throw InputError("form: expected an object of \"K1,...,Kn\": coefficient");
  std::map<std::vector<int>, Expr> A;
  for (const auto& [key, val] : f.items()) {
    std::vector<int> K;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        int k = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        K.push_back(k);
      } catch (const std::exception&) {
        throw InputError("form: bad index list \"" + key + "\"");
      }
    }
    if (static_cast<int>(K.size()) != chart.n()) throw InputError("form: \"" + key + "\" needs n indices");
    for (int k : K)
      if (k < 1 || k > chart.M()) throw InputError("form: index out of range in \"" + key + "\"");
    A[K] = parse_in(val, chart, "form[\"" + key + "\"]");
  }
  return HorizontalNForm::from_coefficients(chart, A);
}

}  // namespace

const Lagrangian& Problem::lambda() const {
  if (!lagrangian) throw InputError("problem has no Lagrangian");
  return *lagrangian;
}

Problem load_problem(const json& doc) {
  static const std::set<std::string> known = {"schema", "chart",  "lagrangian", "metric",  "form",
                                              "fields", "immersion", "adapted", "minsurf", "seed"};
  if (!doc.is_object()) throw InputError("problem must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) throw InputError("unknown problem key \"" + k + "\"");
  if (doc.contains("schema") && doc["schema"] != kProblemSchema)
    throw InputError(std::string("unsupported schema, expected ") + kProblemSchema);
  if (!doc.contains("chart")) throw InputError("problem is missing \"chart\"");
  const json& c = doc["chart"];
  if (!c.is_object() || !c.contains("n") || !c.contains("m") || c.size() != 2)
    throw InputError("chart: expected {\"n\": int, \"m\": int}");
  const int n = get_int(c["n"], "chart.n"), m = get_int(c["m"], "chart.m");
  if (n < 1 || n > 4 || m < 1 || n + m > 9) throw InputError("chart: need 1 <= n <= 4, m >= 1, n + m <= 9");

  Problem p;
  try {
    p.chart = JetChart(n, m);
    int sources = static_cast<int>(doc.contains("lagrangian")) + static_cast<int>(doc.contains("metric")) +
                  static_cast<int>(doc.contains("form"));
    if (sources != 1) throw InputError("problem needs exactly one of lagrangian, metric, form");
    if (doc.contains("lagrangian")) p.lagrangian = Lagrangian(p.chart, parse_in(doc["lagrangian"], p.chart, "lagrangian"));
    if (doc.contains("metric")) {
      p.metric = load_metric(doc["metric"], p.chart);
      if (n > 3) throw InputError("metric problems support n <= 3");
      p.lagrangian = minimal_lagrangian(*p.metric, n);
    }
    if (doc.contains("form")) {
      p.form = load_form(doc["form"], p.chart);
      p.lagrangian = lagrangian_of(*p.form);
    }
    if (doc.contains("fields")) {
      const json& fs = doc["fields"];
      if (!fs.is_array()) throw InputError("fields: expected an array");
      for (std::size_t k = 0; k < fs.size(); ++k)
        p.fields.emplace_back(expr_list(fs[k], p.chart, p.chart.M(), "fields[" + std::to_string(k) + "]"));
    }
    if (doc.contains("immersion")) p.immersion = Immersion{expr_list(doc["immersion"], p.chart, p.chart.M(), "immersion")};
    if (doc.contains("adapted")) {
      const json& a = doc["adapted"];
      if (!a.is_array()) throw InputError("adapted: expected an array of n indices");
      for (std::size_t k = 0; k < a.size(); ++k) p.adapted.push_back(get_int(a[k], "adapted"));
      AdaptedChart check(p.chart, p.adapted);
    } else {
      for (int i = 1; i <= n; ++i) p.adapted.push_back(i);
    }
    if (doc.contains("minsurf")) {
      if (!doc["minsurf"].is_object()) throw InputError("minsurf: expected an object");
      p.minsurf = doc["minsurf"];
    }
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw InputError("seed: expected a non-negative integer");
      p.seed = doc["seed"].get<std::uint64_t>();
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return p;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read problem file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return load_problem(doc);
}

json to_json(const Form& f) {
  json terms = json::array();
  for (const auto& [w, c] : f.terms()) {
    json word = json::array();
    for (const auto& g : w) word.push_back(g.name());
    terms.push_back({{"word", word}, {"coeff", show(c)}});
  }
  json j = {{"degree", f.degree()},
            {"mode", f.frame().is_grassmann() ? "grassmann" : "jet"},
            {"basis", to_string(f.frame().basis)},
            {"n", f.frame().n},
            {"terms", terms}};
  if (f.frame().is_grassmann()) j["adapted"] = f.frame().idx;
  return j;
}

json to_json(const PointAssignment& p) {
  json j = json::object();
  for (const auto& [s, v] : p.coords) j[s.name()] = v;
  for (const auto& [k, v] : p.funcs) {
    std::string name = k.name;
    if (!k.derivs.empty()) {
      name += "_";
      for (int d : k.derivs) name += std::to_string(d);
    }
    j[name] = v;
  }
  return j;
}

namespace {

struct Options {
  std::string problem;
  std::string format = "json";
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> trials;
  bool timing = false;
  std::string kind;
  // minsurf
  std::optional<int> grid;
  std::string domain;
  std::string boundary;
  std::optional<int> max_iter;
  std::string csv;
};

struct Result {
  json report = json::object();
  std::string latex;
  int code = 0;
};

struct Context {
  Options opt;
  std::optional<Problem> problem;

  const Problem& need_problem() const {
    if (!problem) throw InputError("this command needs --problem");
    return *problem;
  }
  std::uint64_t seed() const { return opt.seed ? *opt.seed : problem ? problem->seed : 1; }
  EqualOptions eq(int default_trials = 20) const {
    EqualOptions o = EqualOptions::sampled(opt.trials ? *opt.trials : default_trials);
    if (opt.tol) o.tol = *opt.tol;
    o.seed = seed();
    return o;
  }
  HomogeneityOptions hom() const { return {eq(50), false}; }
};

json verdict_json(const EqualResult& r) {
  json j = {{"verdict", to_string(r.verdict)}, {"method", r.method}};
  if (r.witness) {
    j["witness"] = to_json(*r.witness);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
  }
  return j;
}

json form_verdict_json(const FormEqualResult& r) {
  json j = verdict_json(r.detail);
  j["equal"] = r.equal;
  if (r.word) {
    json w = json::array();
    for (const auto& g : *r.word) w.push_back(g.name());
    j["word"] = w;
  }
  return j;
}

std::string latex_display(const std::string& lhs, const std::string& rhs) { return "\\[ " + lhs + " = " + rhs + " \\]\n"; }

Result derive_el(const Context& ctx) {
  const Problem& p = ctx.need_problem();
  const Lagrangian& lam = p.lambda();
  Result r;
  json el = json::array();
  r.latex += latex_display("L", show_latex(lam.L));
  auto E = euler_lagrange(lam);
  for (std::size_t K = 0; K < E.size(); ++K) {
    el.push_back(show(E[K]));
    r.latex += latex_display("E_{" + std::to_string(K + 1) + "}", show_latex(E[K]));
  }
  r.report = {{"verdict", "pass"}, {"lagrangian", show(lam.L)}, {"euler_lagrange", el}};
  return r;
}

Result zermelo_failure(const Lagrangian& lam, const Context& ctx, const std::string& why) {
  Result r;
  r.code = 1;
  r.report = {{"verdict", "fail"}, {"reason", why}};
  auto rep = zermelo_residuals(lam.L, lam.chart, ctx.eq());
  if (const ZermeloEntry* f = rep.first_failure()) {
    r.report["zermelo"] = {{"j", f->j}, {"l", f->l}, {"residual", show(f->residual)}};
    r.report["zermelo"].update(verdict_json(f->verdict));
  }
  r.latex = "% " + why + "\n";
  return r;
}

Result lepage_cmd(const Context& ctx) {
  const Problem& p = ctx.need_problem();
  auto kind = lepage_kind_from_name(ctx.opt.kind);
  if (!kind) throw InputError("--kind must be one of pc, fundamental, caratheodory, hc, w");
  const Lagrangian& lam = p.lambda();
  std::optional<Form> rho;
  try {
    rho = construct(*kind, lam, ctx.hom());
  } catch (const PreconditionError& e) {
    if (*kind == LepageKind::HilbertCaratheodory || *kind == LepageKind::W) return zermelo_failure(lam, ctx, e.what());
    throw InputError(e.what());
  }
  Result r;
  r.report = {{"verdict", "pass"}, {"kind", to_string(*kind)}, {"lagrangian", show(lam.L)}, {"form", to_json(*rho)}};
  r.latex = latex_display("\\rho", to_latex(simplified(*rho)));
  return r;
}

Result check_lepage_cmd(const Context& ctx) {
  const Problem& p = ctx.need_problem();
  Result r;
  bool ok = true;
  if (p.form) {
    auto crit = is_lepage(*p.form, ctx.eq(50));
    json c = {{"is_lepage", crit.yes}};
    if (!crit.yes) {
      c["variable"] = crit.variable ? crit.variable->name() : "";
      c["residual"] = show(crit.residual);
      c["detail"] = verdict_json(crit.detail);
      r.latex += latex_display("\\text{residual}", show_latex(crit.residual));
    } else {
      auto el = el_form_check(*p.form, ctx.eq());
      c["el_form"] = form_verdict_json(el.detail);
      ok = ok && el.pass;
    }
    ok = ok && crit.yes;
    r.report["form"] = c;
    r.latex += std::string("% form is ") + (crit.yes ? "" : "not ") + "a Lepage form\n";
  }
  const Lagrangian& lam = p.lambda();
  std::vector<LepageKind> kinds;
  if (!ctx.opt.kind.empty()) {
    auto k = lepage_kind_from_name(ctx.opt.kind);
    if (!k) throw InputError("--kind must be one of pc, fundamental, caratheodory, hc, w");
    kinds.push_back(*k);
  } else if (!p.form) {
    kinds = {LepageKind::PoincareCartan, LepageKind::Fundamental, LepageKind::Caratheodory,
             LepageKind::HilbertCaratheodory, LepageKind::W};
  }
  bool homogeneous = zermelo_residuals(lam.L, lam.chart, ctx.eq()).pass();
  json checks = json::array();
  for (auto k : kinds) {
    json c = {{"kind", to_string(k)}};
    bool needs_h = k == LepageKind::HilbertCaratheodory || k == LepageKind::W;
    if ((needs_h && !homogeneous) || (lam.chart.n() > 4 && k != LepageKind::PoincareCartan)) {
      c["status"] = "skipped";
      c["reason"] = needs_h ? "Lagrangian is not positive homogeneous" : "n > 4";
      if (!ctx.opt.kind.empty()) ok = false;
      checks.push_back(c);
      continue;
    }
    Form rho = construct(k, lam, ctx.hom());
    auto hp = check_horizontal_part(rho, lam, ctx.eq());
    auto lp = check_lepage_property(rho, lam.chart, 20, ctx.seed(), ctx.eq());
    c["status"] = hp.equal && lp.pass ? "pass" : "fail";
    c["horizontal_part"] = form_verdict_json(hp);
    c["lepage_property"] = {{"pass", lp.pass}, {"directions", lp.directions}};
    if (!lp.pass) c["lepage_property"]["detail"] = form_verdict_json(lp.detail);
    ok = ok && hp.equal && lp.pass;
    r.latex += "% " + to_string(k) + ": " + c["status"].get<std::string>() + "\n";
    checks.push_back(c);
  }
  if (!checks.empty()) r.report["constructors"] = checks;
  r.report["verdict"] = ok ? "pass" : "fail";
  r.code = ok ? 0 : 1;
  return r;
}

Result check_zermelo_cmd(const Context& ctx) {
  const Problem& p = ctx.need_problem();
  const Lagrangian& lam = p.lambda();
  auto rep = zermelo_residuals(lam.L, lam.chart, ctx.eq());
  Result r;
  json entries = json::array();
  for (const auto& e : rep.entries) {
    bool zero = e.verdict.verdict == Verdict::Equal;
    std::string res = zero ? "0" : show(e.residual);
    json j = {{"j", e.j}, {"l", e.l}, {"residual", res}};
    j.update(verdict_json(e.verdict));
    entries.push_back(j);
    r.latex += latex_display("Z_{" + std::to_string(e.j) + std::to_string(e.l) + "}", zero ? "0" : show_latex(e.residual));
  }
  r.report = {{"verdict", rep.pass() ? "pass" : "fail"}, {"residuals", entries}};
  r.code = rep.pass() ? 0 : 1;
  return r;
}

Result noether_cmd(const Context& ctx) {
  const Problem& p = ctx.need_problem();
  if (p.fields.empty()) throw InputError("noether needs \"fields\" in the problem");
  const Lagrangian& lam = p.lambda();
  std::optional<Form> W;
  try {
    W = fundamental_homogeneous(lam, ctx.hom());
  } catch (const PreconditionError& e) {
    return zermelo_failure(lam, ctx, e.what());
  }
  AdaptedChart ac(p.chart, p.adapted);
  Form eta = to_grassmann(*W, ac);
  Result r;
  bool ok = true;
  json out = json::array();
  for (std::size_t k = 0; k < p.fields.size(); ++k) {
    const FieldSpec& xi = p.fields[k];
    json comps = json::array();
    for (const auto& c : xi.xi) comps.push_back(show(c));
    auto res = noether_residual(xi, eta, ctx.eq());
    Form cur = noether_current(xi, eta);
    json j = {{"field", comps}, {"invariant", res.zero}, {"current", to_json(cur)}};
    if (!res.zero) j["residual"] = to_json(res.horizontal);
    r.latex += latex_display("J_{" + std::to_string(k + 1) + "}", to_latex(simplified(cur)));
    if (p.immersion && res.zero) {
      Form d = ext_d(pullback_grassmann(cur, *p.immersion));
      auto closed = form_equal(d, Form(d.degree(), d.frame()), ctx.eq());
      j["closed_along_immersion"] = form_verdict_json(closed);
    }
    ok = ok && res.zero;
    out.push_back(j);
  }
  r.report = {{"verdict", ok ? "pass" : "fail"}, {"adapted", p.adapted}, {"fields", out}};
  r.code = ok ? 0 : 1;
  return r;
}

struct Builtin {
  std::function<double(double, double)> u;
  bool exact;  // u solves the minimal-surface equation
};

std::optional<Builtin> builtin_boundary(const std::string& name) {
  if (name == "scherk") return Builtin{[](double x, double y) { return std::log(std::cos(x) / std::cos(y)); }, true};
  if (name == "plane") return Builtin{[](double x, double y) { return 0.5 * x - 0.25 * y + 1; }, true};
  if (name == "helicoid") return Builtin{[](double x, double y) { return std::atan2(y, x); }, true};
  if (name == "bowl") return Builtin{[](double x, double y) { return x * x + y * y; }, false};
  if (name == "saddle") return Builtin{[](double x, double y) { return x * y; }, false};
  return std::nullopt;
}

std::vector<double> parse_domain(const std::string& s) {
  std::vector<double> d;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      d.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("--domain: expected a,b,c,d");
    }
  }
  if (d.size() != 4 || !(d[1] > d[0]) || !(d[3] > d[2])) throw InputError("--domain: expected a,b,c,d with a<b, c<d");
  return d;
}

/// N x N comma-separated values; only boundary nodes are used.
GridField read_csv_grid(const std::string& path, double a, double b, double c, double d, int N) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read boundary file " + path);
  GridField g(a, b, c, d, N, N);
  auto number = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw InputError(path + ": bad number \"" + tok + "\"");
    }
  };
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(tok);
    rows.push_back(std::move(row));
  }
  const std::size_t nodes = static_cast<std::size_t>(N) * N;
  if (!rows.empty() && rows[0] == std::vector<std::string>{"x", "y", "u"}) {
    // x,y,u rows as written by --csv, x varying fastest
    if (rows.size() != nodes + 1) throw InputError(path + ": expected " + std::to_string(nodes) + " x,y,u rows");
    for (std::size_t k = 0; k < nodes; ++k) {
      if (rows[k + 1].size() != 3) throw InputError(path + ": expected x,y,u on every row");
      g.u[k] = number(rows[k + 1][2]);
    }
    return g;
  }
  if (rows.size() != static_cast<std::size_t>(N)) throw InputError(path + ": expected " + std::to_string(N) + " rows");
  for (int j = 0; j < N; ++j) {
    if (rows[j].size() != static_cast<std::size_t>(N))
      throw InputError(path + ": expected " + std::to_string(N) + " columns");
    for (int i = 0; i < N; ++i) g.at(i, j) = number(rows[j][i]);
  }
  return g;
}

Result minsurf_cmd(const Context& ctx) {
  json cfg = ctx.problem ? ctx.problem->minsurf : json::object();
  auto cfg_num = [&](const char* key, double dflt) {
    if (!cfg.contains(key)) return dflt;
    if (!cfg[key].is_number()) throw InputError(std::string("minsurf.") + key + ": expected a number");
    return cfg[key].get<double>();
  };
  int N = ctx.opt.grid ? *ctx.opt.grid : static_cast<int>(cfg_num("grid", 33));
  double tol = ctx.opt.tol ? *ctx.opt.tol : cfg_num("tol", 1e-10);
  int max_iter = ctx.opt.max_iter ? *ctx.opt.max_iter : static_cast<int>(cfg_num("max_iter", 12));
  std::string boundary = !ctx.opt.boundary.empty()                                 ? ctx.opt.boundary
                         : cfg.contains("boundary") && cfg["boundary"].is_string() ? cfg["boundary"].get<std::string>()
                                                                                   : "scherk";
  std::vector<double> dom = {-1, 1, -1, 1};
  if (!ctx.opt.domain.empty()) {
    dom = parse_domain(ctx.opt.domain);
  } else if (cfg.contains("domain")) {
    if (!cfg["domain"].is_array() || cfg["domain"].size() != 4) throw InputError("minsurf.domain: expected [a,b,c,d]");
    dom = cfg["domain"].get<std::vector<double>>();
  }
  if (N < 4) throw InputError("--grid must be at least 4");
  if (!(tol > 0)) throw InputError("--tol must be positive");
  if (max_iter < 0) throw InputError("--max-iter must be non-negative");

  std::optional<std::function<double(double, double)>> exact;
  GridField g(dom[0], dom[1], dom[2], dom[3], N, N);
  if (auto b = builtin_boundary(boundary)) {
    g = GridField::sample(b->u, dom[0], dom[1], dom[2], dom[3], N, N);
    if (b->exact) exact = b->u;
  } else if (boundary.starts_with("@")) {
    g = read_csv_grid(boundary.substr(1), dom[0], dom[1], dom[2], dom[3], N);
  } else {
    Expr u;
    try {
      u = parse(boundary, JetChart(2, 1).parse_context());
    } catch (const ParseError& e) {
      throw InputError(std::string("--boundary: ") + e.what());
    }
    for (const auto& s : free_symbols(u))
      if (s.kind != SymKind::X) throw InputError("--boundary expression may use x1, x2 only");
    try {
      g = GridField::sample(u, dom[0], dom[1], dom[2], dom[3], N, N);
    } catch (const DomainError& e) {
      throw InputError(std::string("--boundary: ") + e.what());
    }
    if (is_zero_symbolic(graph_el_residual(u)))
      exact = [u](double x, double y) {
        PointAssignment p;
        p.set(Symbol::x(1), x);
        p.set(Symbol::x(2), y);
        return eval(u, p);
      };
  }
  for (double v : g.u)
    if (!std::isfinite(v)) throw InputError("boundary data is not finite on the domain");

  auto sol = solve_minimal_surface(g, tol, max_iter);
  auto cons = conservation_residuals(sol.u);
  auto rec = reconstruct_and_check(sol.u);
  Result r;
  r.report["grid"] = {{"nx", N}, {"ny", N}, {"domain", dom}, {"h", sol.u.hx()}};
  r.report["boundary"] = boundary;
  r.report["convergence"] = {{"converged", sol.converged}, {"iterations", sol.iterations}, {"history", sol.history}};
  r.report["residuals"] = {{"max_interior", sol.residual}};
  r.report["circulations"] = {{"f", cons.circulation[0].max_abs()},
                              {"g", cons.circulation[1].max_abs()},
                              {"h", cons.circulation[2].max_abs()},
                              {"gate", rec.gate}};
  r.report["reconstruction"] = {{"closed", rec.closed}, {"ufg_residual", rec.rovnice}, {"el_residual", rec.el}, {"pass", rec.pass}};
  if (exact) {
    double e = 0;
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) e = std::max(e, std::abs(sol.u.at(i, j) - (*exact)(sol.u.x(i), sol.u.y(j))));
    r.report["max_error_vs_exact"] = e;
  }
  if (!ctx.opt.csv.empty()) {
    std::ofstream csv(ctx.opt.csv);
    if (!csv) throw InputError("cannot write " + ctx.opt.csv);
    csv.precision(17);
    csv << "x,y,u\n";
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) csv << sol.u.x(i) << "," << sol.u.y(j) << "," << sol.u.at(i, j) << "\n";
  }
  bool ok = sol.converged && rec.pass;
  r.report["verdict"] = ok ? "pass" : "fail";
  r.code = ok ? 0 : 1;
  return r;
}

Result selftest_cmd(const Context& ctx) {
  Result r;
  json crit = json::array();
  bool ok = true;
  for (const auto& c : run_acceptance(ctx.seed())) {
    json j = {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}};
    if (ctx.opt.timing) j["seconds"] = c.seconds;
    crit.push_back(j);
    ok = ok && c.pass;
  }
  r.report = {{"verdict", ok ? "pass" : "fail"}, {"criteria", crit}};
  r.code = ok ? 0 : 1;
  return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lepage equivalents, Euler-Lagrange and Noether computations for first-order Lagrangians"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--problem", opt.problem, "problem JSON file");
  app.add_option("--format", opt.format, "json or latex")->check(CLI::IsMember({"json", "latex"}));
  app.add_option("-o,--output", opt.output, "write the report to a file instead of stdout");
  app.add_option("--seed", opt.seed, "RNG seed for sampled equality checks");
  app.add_option("--tol", opt.tol, "relative tolerance for numeric equality (minsurf: residual tolerance)");
  app.add_option("--trials", opt.trials, "sample points for numeric equality")->check(CLI::PositiveNumber);
  app.add_flag("--timing", opt.timing, "include wall-clock timings in the report");

  std::map<std::string, std::function<Result(const Context&)>> handlers = {
      {"derive-el", derive_el},        {"lepage", lepage_cmd},   {"check-lepage", check_lepage_cmd},
      {"check-zermelo", check_zermelo_cmd}, {"noether", noether_cmd}, {"minsurf", minsurf_cmd},
      {"selftest", selftest_cmd}};
  app.add_subcommand("derive-el", "Euler-Lagrange expressions of the Lagrangian")->fallthrough();
  auto* lep = app.add_subcommand("lepage", "construct a Lepage equivalent")->fallthrough();
  lep->add_option("--kind", opt.kind, "pc, fundamental, caratheodory, hc or w")->required();
  auto* chk = app.add_subcommand("check-lepage", "check h(rho) = lambda and the Lepage property")->fallthrough();
  chk->add_option("--kind", opt.kind, "restrict to one constructor");
  app.add_subcommand("check-zermelo", "positive-homogeneity (Zermelo) residuals")->fallthrough();
  app.add_subcommand("noether", "Noether residuals and currents for the problem's vector fields")->fallthrough();
  auto* ms = app.add_subcommand("minsurf", "solve and verify the nonparametric minimal-surface equation")->fallthrough();
  ms->add_option("--grid", opt.grid, "nodes per side")->check(CLI::Range(4, 1025));
  ms->add_option("--domain", opt.domain, "a,b,c,d");
  ms->add_option("--boundary", opt.boundary, "scherk, plane, helicoid, bowl, saddle, an expression in x1, x2, or @FILE.csv");
  ms->add_option("--max-iter", opt.max_iter, "Newton iteration limit");
  ms->add_option("--csv", opt.csv, "dump x,y,u of the solution");
  app.add_subcommand("selftest", "run the acceptance suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  Context ctx{opt, std::nullopt};
  Result res;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (!opt.problem.empty()) ctx.problem = load_problem_file(opt.problem);
    if (opt.format == "latex" && (cmd == "minsurf" || cmd == "selftest"))
      throw InputError("--format latex is not available for " + cmd);
    res = handlers.at(cmd)(ctx);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ExprSizeError& e) {
    err << "expression too large: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  json report = {{"schema", kReportSchema}, {"command", cmd}, {"seed", ctx.seed()}};
  report.update(res.report);
  if (opt.timing)
    report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string text = opt.format == "latex" ? res.latex : report.dump(2) + "\n";
  if (opt.output.empty()) {
    out << text;
  } else {
    std::ofstream f(opt.output);
    if (!f) {
      err << "input error: cannot write " << opt.output << "\n";
      return 2;
    }
    f << text;
  }
  return res.code;
}

}  // namespace lepage::cli
