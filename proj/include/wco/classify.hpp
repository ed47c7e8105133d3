#pragma once

// Decision procedures for the three symmetry classes. Each classifier extracts
// normal-form parameters from g(0), g'(0) and projective LFT matching, checks
// the named algebraic conditions, and cross-checks against the closed-form
// pointwise defect before issuing a verdict:
//   certified-yes  all conditions pass and defect < tol_exact
//   certified-no   some condition fails and defect > tol_reject
//   indeterminate  anything else

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wco/conjugation.hpp"
#include "wco/engine.hpp"
#include "wco/moebius.hpp"
#include "wco/sampling.hpp"
#include "wco/symbols.hpp"

namespace wco {

using ojson = nlohmann::ordered_json;

inline ojson complex_json(cplx z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

inline ojson complex_array_json(std::span<const cplx> v) {
  ojson a = ojson::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

enum class Verdict { certified_yes, certified_no, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_yes: return "certified-yes";
    case Verdict::certified_no: return "certified-no";
    default: return "indeterminate";
  }
}

struct ClassifyOptions {
  SamplePlan plan;
  double tol_exact = 1e-10;
  double tol_reject = 1e-4;
  // When set, the report also carries a section defect at this truncation.
  std::optional<Truncation> section;
};

struct ClassificationReport {
  std::string symmetry_class;
  Verdict verdict = Verdict::indeterminate;
  ojson parameters = ojson::object();
  std::vector<ConditionCheck> conditions;
  DefectResult pointwise;
  std::string section_kind;
  std::optional<double> section_defect;
  std::vector<std::string> notes;

  [[nodiscard]] std::vector<std::string> failed_conditions() const {
    std::vector<std::string> out;
    for (const auto& c : conditions) {
      if (!c.passed) out.push_back(c.name);
    }
    return out;
  }

  [[nodiscard]] bool failed(const std::string& name) const {
    return std::any_of(conditions.begin(), conditions.end(),
                       [&](const ConditionCheck& c) { return c.name == name && !c.passed; });
  }
};

inline Verdict decide(const std::vector<ConditionCheck>& conds, double defect, const ClassifyOptions& opt) {
  const bool ok = all_passed(conds);
  if (ok && defect < opt.tol_exact) return Verdict::certified_yes;
  if (!ok && defect > opt.tol_reject) return Verdict::certified_no;
  return Verdict::indeterminate;
}

namespace detail {

inline void finish(ClassificationReport& rep, const ClassifyOptions& opt) {
  rep.verdict = decide(rep.conditions, rep.pointwise.max_residual, opt);
  if (rep.verdict == Verdict::indeterminate) {
    if (all_passed(rep.conditions)) {
      rep.notes.push_back("conditions hold but the pointwise defect is not below tol_exact");
    } else {
      rep.notes.push_back("a condition fails but the pointwise defect is not above tol_reject");
    }
  }
}

// Factors with w merged per (var, w) and trivial (w = 0) factors dropped.
inline std::vector<KernelFactor> canonical_factors(std::vector<KernelFactor> fs) {
  std::erase_if(fs, [](const KernelFactor& k) { return std::abs(k.w) <= 1e-14; });
  std::sort(fs.begin(), fs.end(), [](const KernelFactor& x, const KernelFactor& y) {
    if (x.var != y.var) return x.var < y.var;
    if (x.w.real() != y.w.real()) return x.w.real() < y.w.real();
    return x.w.imag() < y.w.imag();
  });
  std::vector<KernelFactor> out;
  for (const auto& k : fs) {
    if (!out.empty() && out.back().var == k.var && std::abs(out.back().w - k.w) <= 1e-12) {
      out.back().m += k.m;
    } else {
      out.push_back(k);
    }
  }
  return out;
}

// Compares the symbol's f (up to its constant) against the expected factors.
inline ConditionCheck factor_match(const std::vector<KernelFactor>& actual, const std::vector<KernelFactor>& expected) {
  ConditionCheck c{"f-form", true, 0.0, ""};
  const auto a = canonical_factors(actual);
  const auto e = canonical_factors(expected);
  if (a.size() != e.size()) {
    c.passed = false;
    c.residual = 1.0;
    c.detail = "f has " + std::to_string(a.size()) + " nontrivial kernel factors, expected " + std::to_string(e.size());
    return c;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].var != e[i].var || a[i].m != e[i].m) {
      c.passed = false;
      c.residual = std::max(c.residual, 1.0);
      c.detail = "factor " + std::to_string(i + 1) + " has the wrong variable or exponent";
      continue;
    }
    const double r = std::abs(a[i].w - e[i].w);
    c.residual = std::max(c.residual, r);
    if (r > kRelationTol) {
      c.passed = false;
      c.detail = "factor " + std::to_string(i + 1) + " parameter off by " + std::to_string(r);
    }
  }
  return c;
}

inline ConditionCheck identity_variables(const SymbolPair& sym) {
  ConditionCheck c{"g-var", true, 0.0, ""};
  for (int k = 0; k < sym.dim(); ++k) {
    if (sym.g.coords[static_cast<std::size_t>(k)].var != k) {
      c.passed = false;
      c.residual = 1.0;
      c.detail += (c.detail.empty() ? "" : "; ") + std::string("coordinate ") + std::to_string(k + 1) +
                  " depends on z_" + std::to_string(sym.g.coords[static_cast<std::size_t>(k)].var + 1);
    }
  }
  return c;
}

inline void append(std::vector<ConditionCheck>& out, const std::vector<ConditionCheck>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

inline ojson plan_json(const SamplePlan& p) {
  return ojson{{"count", p.count}, {"radius", p.radius}, {"seed", p.seed}};
}

// g maps the closed polydisk into itself; the residual is the worst margin
// shortfall (infinite when a pole lies in the closed disk).
inline ConditionCheck selfmap_check(const Diagnostics& diag) {
  ConditionCheck c{"g-selfmap", diag.self_map_violations.empty(), 0.0, ""};
  for (double m : diag.self_map_margins) c.residual = std::max(c.residual, -m);
  for (const auto& v : diag.self_map_violations) c.detail += (c.detail.empty() ? "" : "; ") + v;
  return c;
}

inline void section_skipped(ClassificationReport& rep) {
  rep.notes.push_back("section defect skipped: g is not a self-map, so W is not bounded on the space");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Real symmetric

inline ClassificationReport classify_real_symmetric(const SymbolPair& sym, const ClassifyOptions& opt = {}) {
  require_evaluable(sym);
  const auto diag = validate(sym);
  const int d = sym.dim();
  ClassificationReport rep;
  rep.symmetry_class = "realsym";
  rep.conditions.push_back(detail::identity_variables(sym));
  rep.conditions.push_back(detail::selfmap_check(diag));

  std::vector<cplx> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
  ConditionCheck gform{"g-form", true, 0.0, ""};
  bool extracted = true;
  for (int k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const LFT& phi = sym.g.coords[kk].map;
    try {
      a[kk] = eval(phi, 0.0);
      b[kk] = derivative_at(phi, 0.0);
    } catch (const DomainError&) {
      extracted = false;
      gform.passed = false;
      gform.residual = 1.0;
      gform.detail += "coordinate " + std::to_string(k + 1) + " has a pole at 0; ";
      continue;
    }
    if (!(std::abs(a[kk]) < 1.0)) continue;  // reported by her-cond-1
    if (!projectively_equal(phi, real_symmetric_component(a[kk], b[kk]))) {
      gform.passed = false;
      gform.residual = 1.0;
      gform.detail += "coordinate " + std::to_string(k + 1) + " is not of the form a + b z / (1 - conj(a) z); ";
    }
  }
  rep.conditions.push_back(gform);

  const cplx c = sym.f.c;
  rep.parameters["c"] = complex_json(c);
  rep.parameters["a"] = complex_array_json(a);
  rep.parameters["b"] = complex_array_json(b);

  if (extracted) {
    detail::append(rep.conditions, realsym_conditions(c, a, b));
    std::vector<KernelFactor> expected;
    for (int j = 0; j < d; ++j) {
      expected.push_back({std::conj(a[static_cast<std::size_t>(j)]), sym.sp.weight(j) + 2, j});
    }
    rep.conditions.push_back(detail::factor_match(sym.f.factors, expected));
  }

  rep.pointwise = realsym_pointwise_defect(sym, opt.plan);
  if (opt.section && diag.ok()) {
    rep.section_kind = "hermitian";
    rep.section_defect = hermitian_defect(build_matrix(sym, *opt.section));
  } else if (opt.section) {
    detail::section_skipped(rep);
  }
  detail::finish(rep, opt);
  return rep;
}

// ---------------------------------------------------------------------------
// Unitary

inline ClassificationReport classify_unitary(const SymbolPair& sym, const ClassifyOptions& opt = {}) {
  require_evaluable(sym);
  const auto diag = validate(sym);
  const int d = sym.dim();
  ClassificationReport rep;
  rep.symmetry_class = "unitary";
  rep.conditions.push_back(detail::selfmap_check(diag));

  std::vector<int> phi(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) phi[static_cast<std::size_t>(k)] = sym.g.coords[static_cast<std::size_t>(k)].var;

  std::vector<cplx> theta(static_cast<std::size_t>(d)), a(static_cast<std::size_t>(d));
  ConditionCheck gform{"g-form", true, 0.0, ""};
  bool extracted = true;
  for (int k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const LFT& g = sym.g.coords[kk].map;
    try {
      theta[kk] = eval(g, 0.0);
      const double den = std::norm(theta[kk]) - 1.0;
      if (den == 0.0) throw DomainError("|g(0)| = 1");
      a[kk] = derivative_at(g, 0.0) / den;
    } catch (const DomainError&) {
      extracted = false;
      gform.passed = false;
      gform.residual = 1.0;
      gform.detail += "coordinate " + std::to_string(k + 1) + ": parameters cannot be extracted; ";
      continue;
    }
    if (!(std::abs(theta[kk]) < 1.0)) continue;
    if (!projectively_equal(g, unitary_component(a[kk], theta[kk]))) {
      gform.passed = false;
      gform.residual = 1.0;
      gform.detail += "coordinate " + std::to_string(k + 1) + " is not a disk automorphism of the normal form; ";
    }
  }

  cplx c = sym.f.c;
  if (extracted) {
    for (int j = 0; j < d; ++j) {
      const cplx t = theta[static_cast<std::size_t>(j)];
      if (std::abs(t) < 1.0) c /= theta_constant(t, sym.sp.weight(j));
    }
  }
  rep.parameters["c"] = complex_json(c);
  rep.parameters["a"] = complex_array_json(a);
  rep.parameters["theta"] = complex_array_json(theta);
  ojson phij = ojson::array();
  for (int v : phi) phij.push_back(v + 1);
  rep.parameters["phi"] = phij;

  rep.conditions.push_back(gform);
  if (extracted) {
    detail::append(rep.conditions, unitary_conditions(c, a, theta, phi, sym.sp));
    std::vector<KernelFactor> expected;
    for (int j = 0; j < d; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      expected.push_back({a[jj] * std::conj(theta[jj]), sym.sp.weight(j) + 2, phi[jj]});
    }
    rep.conditions.push_back(detail::factor_match(sym.f.factors, expected));
  } else {
    const bool perm = is_permutation(phi, d);
    rep.conditions.push_back({"phi-bijective", perm, perm ? 0.0 : 1.0, ""});
  }

  rep.pointwise = unitary_pointwise_defect(sym, opt.plan);
  if (opt.section && diag.ok()) {
    rep.section_kind = "unitary-block";
    rep.section_defect = unitary_section_residual(build_matrix(sym, *opt.section)).block;
  } else if (opt.section) {
    detail::section_skipped(rep);
  }
  const auto failed = rep.failed_conditions();
  if (failed.size() == 1 && failed.front() == "ell-compat") {
    rep.notes.push_back(
        "ell-compat is the deciding condition: phi maps coordinates of different weights, which the unitary "
        "normal form does not exclude explicitly; the pointwise defect decides whether the identity survives");
  }
  detail::finish(rep, opt);
  return rep;
}

// ---------------------------------------------------------------------------
// C-symmetric

inline ClassificationReport classify_csym(const SymbolPair& sym, const ConjugationParams& cp,
                                          const ClassifyOptions& opt = {}) {
  require_evaluable(sym);
  if (!(sym.sp == cp.space())) throw DimensionError("classify_csym: symbol and conjugation live on different spaces");
  const auto diag = validate(sym);
  const int d = sym.dim();
  ClassificationReport rep;
  rep.symmetry_class = "csym";
  rep.conditions.push_back(detail::identity_variables(sym));
  rep.conditions.push_back(detail::selfmap_check(diag));

  ConditionCheck c1603{"202208121603", true, 0.0, ""};
  ConditionCheck c0907{"cond-202106030907", true, 0.0, ""};
  ConditionCheck caff{"cond-202106030907-affine", true, 0.0, ""};
  ConditionCheck c1558{"202208121558", true, 0.0, ""};
  ConditionCheck c1628{"202208121628", true, 0.0, ""};
  ConditionCheck c0836{"cond-202105210836", true, 0.0, ""};
  ConditionCheck gform{"g-form", true, 0.0, ""};
  bool any_general_u1 = false, any_affine_u1 = false;
  auto fail = [](ConditionCheck& c, int k, double r) {
    c.passed = false;
    c.residual = std::max(c.residual, r);
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("kappa = ") + std::to_string(k + 1);
  };

  ojson branches = ojson::array();
  for (int k = 0; k < d; ++k) {
    const LFT& g = sym.g.coords[static_cast<std::size_t>(k)].map;
    ojson br;
    br["kappa"] = k + 1;
    if (cp.in_u1(k)) {
      const cplx p = cp.p_of(k);
      if (g.is_constant()) {
        const cplx G = g.d != cplx{0.0} ? g.b / g.d : g.a / g.c;
        br["branch"] = "U1-constant";
        br["G"] = complex_json(G);
        const double r = std::abs(G) - 1.0;
        c1603.residual = std::max(c1603.residual, std::max(0.0, r));
        if (!(r < 0.0)) fail(c1603, k, r);
      } else if (g.is_affine()) {
        // psi(u) = A u + B: the relation in projective form reads B = p (1 - A);
        // the self-map inequality is already enforced by validate().
        any_affine_u1 = true;
        const cplx A = g.a / g.d, B = g.b / g.d;
        br["branch"] = "U1-affine";
        br["A"] = complex_json(A);
        br["B"] = complex_json(B);
        const double rel = std::abs(std::conj(p) * B - std::norm(p) * (1.0 - A));
        caff.residual = std::max(caff.residual, rel);
        if (rel > kRelationTol) fail(caff, k, rel);
      } else {
        any_general_u1 = true;
        const U1Coefficients u{g.a / g.c, (g.b * g.c - g.a * g.d) / (g.c * g.c), g.d / g.c};
        br["branch"] = "U1";
        br["G"] = complex_json(u.G);
        br["E"] = complex_json(u.E);
        br["F"] = complex_json(u.F);
        const double rel = u1_relation_residual(u, p);
        c0907.residual = std::max(c0907.residual, rel);
        if (rel > kRelationTol) fail(c0907, k, rel);
        const double ineq = u1_inequality_residual(u);
        c1558.residual = std::max(c1558.residual, ineq);
        if (ineq > kConditionSlack) fail(c1558, k, ineq);
      }
    } else {
      const cplx q = cp.q_of(k);
      cplx alpha, beta;
      try {
        alpha = eval(g, 0.0);
        beta = derivative_at(g, 0.0) / q;
      } catch (const DomainError&) {
        fail(gform, k, 1.0);
        br["branch"] = "U2-unextractable";
        branches.push_back(br);
        continue;
      }
      br["alpha"] = complex_json(alpha);
      br["beta"] = complex_json(beta);
      if (g.is_constant()) {
        br["branch"] = "U2-constant";
        const double r = std::abs(alpha) - 1.0;
        c1628.residual = std::max(c1628.residual, std::max(0.0, r));
        if (!(r < 0.0)) fail(c1628, k, r);
      } else {
        br["branch"] = "U2";
        if (!projectively_equal(g, u2_component({alpha, beta}, q))) fail(gform, k, 1.0);
        const double ineq = u2_inequality_residual({alpha, beta});
        c0836.residual = std::max(c0836.residual, ineq);
        if (ineq > kConditionSlack) fail(c0836, k, ineq);
      }
    }
    branches.push_back(br);
  }
  rep.conditions.push_back(gform);
  rep.conditions.insert(rep.conditions.end(), {c1603, c0907, c1558, c1628, c0836});
  if (any_affine_u1) rep.conditions.push_back(caff);
  if (any_general_u1) {
    rep.notes.push_back("U1 relation evaluated with p read as p_kappa on its left-hand side");
  }
  if (any_affine_u1) {
    rep.notes.push_back(
        "affine U1 coordinate: the form G + E/(u + F) has no affine member, so the relation is checked in "
        "projective form (A u + B with B = p (1 - A))");
  }

  Point w;
  bool kernel_ok = true;
  try {
    w = csym_kernel_point(cp, sym.g);
    for (const auto& x : w) kernel_ok = kernel_ok && std::abs(x) < 1.0;
  } catch (const DomainError&) {
    kernel_ok = false;
  }
  if (kernel_ok) {
    std::vector<KernelFactor> expected;
    for (int j = 0; j < d; ++j) expected.push_back({std::conj(w[static_cast<std::size_t>(j)]), sym.sp.weight(j) + 2, j});
    rep.conditions.push_back(detail::factor_match(sym.f.factors, expected));
    rep.parameters["w"] = complex_array_json(w);
  } else {
    rep.conditions.push_back({"f-form", false, 1.0, "kernel point conj(omega(g(r))) is not in the polydisk"});
  }
  rep.parameters["c_tilde"] = complex_json(sym.f.c);
  rep.parameters["branches"] = branches;

  rep.pointwise = csym_pointwise_defect(sym, cp, opt.plan);
  detail::finish(rep, opt);
  return rep;
}

// ---------------------------------------------------------------------------
// Real symmetric -> C-symmetric with U2 = all coordinates

struct CsymParameters {
  ConjugationParams cp;
  std::vector<CsymCoefficients> coeffs;
  cplx c_tilde;
};

inline CsymParameters realsym_to_conjugation(double c, std::span<const cplx> a, std::span<const double> b,
                                             const SpaceParams& sp) {
  sp.validate();
  if (static_cast<int>(a.size()) != sp.d || static_cast<int>(b.size()) != sp.d) {
    throw DimensionError("realsym_to_conjugation: a and b need d entries");
  }
  std::vector<cplx> bc(b.begin(), b.end());
  const auto conds = realsym_conditions(c, a, bc);
  if (!all_passed(conds)) throw ParameterError("realsym_to_conjugation: " + failed_names(conds));
  std::vector<int> u2(static_cast<std::size_t>(sp.d));
  std::vector<cplx> q(static_cast<std::size_t>(sp.d));
  std::vector<CsymCoefficients> coeffs;
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    u2[jj] = j;
    if (a[jj] == cplx{0.0}) {
      q[jj] = 1.0;
      coeffs.emplace_back(U2Coefficients{0.0, b[jj]});
    } else {
      q[jj] = std::conj(a[jj]) / a[jj];
      coeffs.emplace_back(U2Coefficients{a[jj], a[jj] * b[jj] / std::conj(a[jj])});
    }
  }
  return {ConjugationParams(sp, {}, u2, {}, q), std::move(coeffs), cplx{c}};
}

// ---------------------------------------------------------------------------
// Functional-equation residuals
//   A: psi'(u)(1 - u conj(psi(z)))^2 - conj(psi'(z))(1 - psi(u) conj(z))^2
//   B: psi'(y)(1 - theta y psi(x))^2 - psi'(x)(1 - theta psi(y) x)^2
//   C: w'(y) psi'(u)[1 - u w(psi(y))]^2 - w'(psi(y)) psi'(y)[1 - w(y) psi(u)]^2,  w = omega_p

enum class EquationKind { A, B, C };

struct FunctionalEquation {
  EquationKind kind = EquationKind::A;
  LFT psi;
  cplx theta{1.0};  // kind B, unimodular
  cplx p{0.5};      // kind C, 0 < |p| < 1
};

struct EquationResidual {
  double max_residual = 0.0;
  int samples = 0;
  int resamples = 0;
  std::vector<std::string> notes;
};

inline EquationResidual functional_equation_residual(const FunctionalEquation& eq, const SamplePlan& plan) {
  plan.validate();
  require_wellformed(eq.psi);
  if (eq.kind == EquationKind::B && std::abs(std::abs(eq.theta) - 1.0) > 1e-12) {
    throw ParameterError("kind B needs a unimodular theta");
  }
  LFT om;
  if (eq.kind == EquationKind::C) om = omega_p(eq.p);

  auto residual = [&](cplx x, cplx y) -> double {
    const LFT& s = eq.psi;
    switch (eq.kind) {
      case EquationKind::A: {
        const cplx z = x, u = y;
        const cplx l = derivative_at(s, u) * std::pow(1.0 - u * std::conj(eval(s, z)), 2);
        const cplx r = std::conj(derivative_at(s, z)) * std::pow(1.0 - eval(s, u) * std::conj(z), 2);
        return std::abs(l - r);
      }
      case EquationKind::B: {
        const cplx l = derivative_at(s, y) * std::pow(1.0 - eq.theta * y * eval(s, x), 2);
        const cplx r = derivative_at(s, x) * std::pow(1.0 - eq.theta * eval(s, y) * x, 2);
        return std::abs(l - r);
      }
      default: {
        const cplx u = x;
        const cplx py = eval(s, y);
        const cplx l = derivative_at(om, y) * derivative_at(s, u) * std::pow(1.0 - u * eval(om, py), 2);
        const cplx r = derivative_at(om, py) * derivative_at(s, y) * std::pow(1.0 - eval(om, y) * eval(s, u), 2);
        return std::abs(l - r);
      }
    }
  };

  Rng rng(plan.seed);
  EquationResidual out;
  const int max_attempts = 10 * plan.count;
  for (int attempt = 0; out.samples < plan.count; ++attempt) {
    if (attempt >= max_attempts) {
      throw DomainError("functional equation: too many pole hits while sampling");
    }
    const cplx x = rng.in_disk(plan.radius);
    const cplx y = rng.in_disk(plan.radius);
    try {
      const double r = residual(x, y);
      out.max_residual = std::isnan(r) ? INFINITY : std::max(out.max_residual, r);
      ++out.samples;
    } catch (const DomainError& e) {
      ++out.resamples;
      out.notes.push_back(std::string("resampled: ") + e.what());
    }
  }
  return out;
}

}  // namespace wco
