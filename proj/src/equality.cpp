#include "lepage/equality.hpp"

#include <cmath>

#include "lepage/error.hpp"

namespace lepage {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::Unequal: return "Unequal";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

double PointSampler::value() {
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::bernoulli_distribution sign(0.5);
  double v = mag(rng_);
  return sign(rng_) ? -v : v;
}

PointAssignment PointSampler::sample(const std::set<Symbol>& syms, const std::set<FuncKey>& funcs) {
  PointAssignment p;
  for (const auto& s : syms) p.coords[s] = value();
  for (const auto& f : funcs) p.funcs[f] = value();
  return p;
}

bool close(double a, double b, double tol) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

EqualResult equal(const Expr& a, const Expr& b, const EqualOptions& opts) {
  if (opts.trials < 1 || !(opts.tol > 0)) throw PreconditionError("equal: trials >= 1 and tol > 0 required");
  EqualResult r;
  Expr d = a - b;
  if (d.is_zero()) {
    r.verdict = Verdict::Equal;
    r.method = "structural";
    return r;
  }
  try {
    ScopedNodeCap cap(opts.symbolic_cap);
    if (clear_denominators(d).is_zero()) {
      r.verdict = Verdict::Equal;
      r.method = "symbolic";
      return r;
    }
  } catch (const ExprSizeError&) {
    // fall through to sampling
  }
  r.method = "numeric";
  auto syms = free_symbols(a);
  auto funcs = opaque_functions(a);
  for (const auto& s : free_symbols(b)) syms.insert(s);
  for (const auto& f : opaque_functions(b)) funcs.insert(f);
  PointSampler sampler(opts.seed ^ d.hash());
  EvalOptions eo;
  eo.singular_threshold = 1e-10;
  int attempts = 0;
  while (r.evaluated < opts.trials && attempts < opts.trials * 5) {
    ++attempts;
    PointAssignment p = sampler.sample(syms, funcs);
    if (opts.guard && !opts.guard(p)) continue;
    double va, vb;
    try {
      va = eval(a, p, eo);
      vb = eval(b, p, eo);
    } catch (const DomainError&) {
      continue;
    }
    ++r.evaluated;
    if (!close(va, vb, opts.tol)) {
      r.verdict = Verdict::Unequal;
      r.witness = std::move(p);
      r.lhs = va;
      r.rhs = vb;
      return r;
    }
  }
  r.verdict = r.evaluated > 0 ? Verdict::Equal : Verdict::Unknown;
  return r;
}

}  // namespace lepage
