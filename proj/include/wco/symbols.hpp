#pragma once

// Structured symbol pairs (f, g) for W h = f * (h o g).
//
// f is a constant times a product of kernel-type factors (1 - w z_var)^-m and
// every output coordinate of g is a linear fractional map of a single input
// variable. This covers all the normal forms of the real symmetric, unitary
// and C-symmetric classes; any structured pair can be evaluated, expanded and
// put through the defect functionals, whether or not it is in a normal form.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wco/bergman.hpp"
#include "wco/conjugation.hpp"
#include "wco/moebius.hpp"
#include "wco/series.hpp"
#include "wco/types.hpp"

namespace wco {

// (1 - w z_var)^-m with var 0-based.
struct KernelFactor {
  cplx w{0.0};
  int m = 1;
  int var = 0;
};

struct WeightSymbol {
  cplx c{1.0};
  std::vector<KernelFactor> factors;
};

// Output coordinate: x -> map(z_var).
struct MapComponent {
  int var = 0;
  LFT map;
};

struct MapSymbol {
  std::vector<MapComponent> coords;
};

struct SymbolPair {
  WeightSymbol f;
  MapSymbol g;
  SpaceParams sp;

  [[nodiscard]] int dim() const { return sp.d; }
};

inline SymbolPair identity_symbol(const SpaceParams& sp) {
  SymbolPair s{{}, {}, sp};
  for (int j = 0; j < sp.d; ++j) s.g.coords.push_back({j, LFT::identity()});
  return s;
}

// One named algebraic condition with its residual: for equalities the absolute
// defect, for inequalities lhs - rhs (so <= slack passes).
struct ConditionCheck {
  std::string name;
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

inline bool all_passed(const std::vector<ConditionCheck>& v) {
  return std::all_of(v.begin(), v.end(), [](const ConditionCheck& c) { return c.passed; });
}

inline std::string failed_names(const std::vector<ConditionCheck>& v) {
  std::string out;
  for (const auto& c : v) {
    if (c.passed) continue;
    if (!out.empty()) out += ", ";
    out += c.name + " (residual " + std::to_string(c.residual) + (c.detail.empty() ? "" : "; " + c.detail) + ")";
  }
  return out;
}

inline constexpr double kConditionSlack = 1e-12;
inline constexpr double kRelationTol = 1e-10;

// ---------------------------------------------------------------------------
// Evaluation

inline cplx eval_f(const SymbolPair& sym, std::span<const cplx> z) {
  require_in_polydisk(z, sym.dim(), "eval_f");
  cplx v = sym.f.c;
  for (const auto& fac : sym.f.factors) {
    v /= std::pow(1.0 - fac.w * z[static_cast<std::size_t>(fac.var)], fac.m);
  }
  return v;
}

inline Point eval_g(const SymbolPair& sym, std::span<const cplx> z) {
  require_in_polydisk(z, sym.dim(), "eval_g");
  Point out;
  out.reserve(sym.g.coords.size());
  for (const auto& c : sym.g.coords) out.push_back(eval(c.map, z[static_cast<std::size_t>(c.var)]));
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Diagnostics {
  std::vector<std::string> violations;           // structural problems: the pair cannot be evaluated
  std::vector<std::string> self_map_violations;  // g does not map the polydisk into itself
  std::vector<double> self_map_margins;          // one per output coordinate

  [[nodiscard]] bool ok() const { return violations.empty() && self_map_violations.empty(); }
  [[nodiscard]] bool evaluable() const { return violations.empty(); }
};

inline Diagnostics validate(const SymbolPair& sym) {
  Diagnostics diag;
  const int d = sym.dim();
  try {
    sym.sp.validate();
  } catch (const ParameterError& e) {
    diag.violations.emplace_back(e.what());
    return diag;
  }
  for (std::size_t k = 0; k < sym.f.factors.size(); ++k) {
    const auto& fac = sym.f.factors[k];
    const std::string tag = "f factor " + std::to_string(k + 1);
    if (fac.var < 0 || fac.var >= d) diag.violations.push_back(tag + ": variable index out of range");
    if (fac.m < 1) diag.violations.push_back(tag + ": exponent must be >= 1");
    if (!(std::abs(fac.w) < 1.0)) diag.violations.push_back(tag + ": |w| = " + std::to_string(std::abs(fac.w)) + " is not < 1");
  }
  if (static_cast<int>(sym.g.coords.size()) != d) {
    diag.violations.push_back("g has " + std::to_string(sym.g.coords.size()) + " coordinates, expected " + std::to_string(d));
  }
  for (std::size_t k = 0; k < sym.g.coords.size(); ++k) {
    const auto& c = sym.g.coords[k];
    const std::string tag = "g coordinate " + std::to_string(k + 1);
    if (c.var < 0 || c.var >= d) diag.violations.push_back(tag + ": variable index out of range");
    if (c.map.c == cplx{0.0} && c.map.d == cplx{0.0}) {
      diag.violations.push_back(tag + ": undefined map (c = d = 0)");
      diag.self_map_margins.push_back(-INFINITY);
      continue;
    }
    const auto v = is_self_map(c.map);
    diag.self_map_margins.push_back(v.margin);
    if (!v.is_self_map) {
      diag.self_map_violations.push_back(tag + ": not a self-map of the disk (margin " + std::to_string(v.margin) + ")");
    }
  }
  return diag;
}

inline void require_valid(const SymbolPair& sym) {
  const auto diag = validate(sym);
  if (!diag.ok()) {
    std::string msg = "invalid symbol:";
    for (const auto& v : diag.violations) msg += " [" + v + "]";
    for (const auto& v : diag.self_map_violations) msg += " [" + v + "]";
    throw ParameterError(msg);
  }
}

// Weaker check for the closed-form functionals: f analytic on the polydisk and
// every g coordinate a well-formed LFT, but g need not be a self-map.
inline void require_evaluable(const SymbolPair& sym) {
  const auto diag = validate(sym);
  if (!diag.evaluable()) {
    std::string msg = "invalid symbol:";
    for (const auto& v : diag.violations) msg += " [" + v + "]";
    throw ParameterError(msg);
  }
}

// ---------------------------------------------------------------------------
// Series expansion

// Caches the one-variable pieces of W z^alpha = c * prod_j (F_j * prod_{kappa: v(kappa)=j} phi_kappa^alpha_kappa)(z_j),
// where F_j collects the f factors in variable j. Every piece is a one-variable
// series, so each column is a tensor product.
class SymbolExpander {
 public:
  SymbolExpander(const SymbolPair& sym, Truncation trunc) : sym_(sym), trunc_(std::move(trunc)) {
    require_valid(sym_);
    if (trunc_.dim() != sym_.dim()) throw DimensionError("symbol expansion: truncation dimension differs from d");
    const int d = sym_.dim();
    f_parts_.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) f_parts_.push_back(PowerSeries::constant(Truncation({cap(j)}), 1.0));
    for (const auto& fac : sym_.f.factors) {
      auto& part = f_parts_[static_cast<std::size_t>(fac.var)];
      part = mul(part, neg_binomial_series(fac.w, fac.m, cap(fac.var)));
    }
    powers_.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const auto& comp = sym_.g.coords[static_cast<std::size_t>(k)];
      const int n = cap(comp.var);
      const PowerSeries base = lft_series(comp.map, n);
      auto& pw = powers_[static_cast<std::size_t>(k)];
      pw.push_back(PowerSeries::constant(Truncation({n}), 1.0));
      for (int e = 1; e <= trunc_.caps[static_cast<std::size_t>(k)]; ++e) pw.push_back(mul(pw.back(), base));
    }
  }

  [[nodiscard]] const Truncation& trunc() const { return trunc_; }

  [[nodiscard]] PowerSeries series_of_f() const { return scale(tensor_product(f_parts_, trunc_), sym_.f.c); }

  // Taylor expansion of W z^alpha = f * prod_kappa g_kappa^alpha_kappa.
  [[nodiscard]] PowerSeries column(const MultiIndex& alpha) const {
    if (!trunc_.contains(alpha)) throw ParameterError("W z^alpha: index " + index_string(alpha) + " outside truncation");
    std::vector<PowerSeries> parts = f_parts_;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      if (alpha[k] == 0) continue;
      auto& part = parts[static_cast<std::size_t>(sym_.g.coords[k].var)];
      part = mul(part, powers_[k][static_cast<std::size_t>(alpha[k])]);
    }
    return scale(tensor_product(parts, trunc_), sym_.f.c);
  }

 private:
  [[nodiscard]] int cap(int j) const { return trunc_.caps[static_cast<std::size_t>(j)]; }

  SymbolPair sym_;
  Truncation trunc_;
  std::vector<PowerSeries> f_parts_;
  std::vector<std::vector<PowerSeries>> powers_;
};

inline PowerSeries series_of_f(const SymbolPair& sym, const Truncation& trunc) {
  return SymbolExpander(sym, trunc).series_of_f();
}

inline PowerSeries series_of_Wg_alpha(const SymbolPair& sym, const MultiIndex& alpha, const Truncation& trunc) {
  return SymbolExpander(sym, trunc).column(alpha);
}

// ---------------------------------------------------------------------------
// Real symmetric normal form: f = c K_a, g_k(z) = a_k + b_k z_k / (1 - conj(a_k) z_k)

inline LFT real_symmetric_component(cplx a, cplx b) {
  return {b - std::norm(a), a, -std::conj(a), cplx{1.0}};
}

inline std::vector<ConditionCheck> realsym_conditions(cplx c, std::span<const cplx> a, std::span<const cplx> b) {
  ConditionCheck cond1{"her-cond-1", true, 0.0, ""};
  double worst_im = std::abs(c.imag());
  std::string detail;
  if (std::abs(c.imag()) > kConditionSlack * std::max(1.0, std::abs(c))) detail += "c not real; ";
  double worst_disk = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(b[k].imag()) > kConditionSlack * std::max(1.0, std::abs(b[k]))) {
      detail += "b_" + std::to_string(k + 1) + " not real; ";
    }
    worst_im = std::max(worst_im, std::abs(b[k].imag()));
    if (!(std::abs(a[k]) < 1.0)) detail += "a_" + std::to_string(k + 1) + " outside the disk; ";
    worst_disk = std::max(worst_disk, std::abs(a[k]) - 1.0);
  }
  cond1.passed = detail.empty();
  cond1.residual = std::max(worst_im, std::max(0.0, worst_disk));
  cond1.detail = detail.empty() ? "" : detail.substr(0, detail.size() - 2);

  ConditionCheck cond2{"her-cond-2", true, -INFINITY, ""};
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double lhs = std::abs(a[k] * (b[k] - std::norm(a[k]) + 1.0)) + std::abs(b[k]);
    const double rhs = 1.0 - std::norm(a[k]);
    const double r = lhs - rhs;
    if (r > cond2.residual) cond2.residual = r;
    if (r > kConditionSlack) {
      cond2.passed = false;
      cond2.detail += (cond2.detail.empty() ? "" : "; ") + std::string("violated at kappa = ") + std::to_string(k + 1);
    }
  }
  if (a.empty()) cond2.residual = 0.0;
  return {cond1, cond2};
}

// Builds the normal-form pair without checking the coefficient conditions
// (only analyticity of f is needed); used for perturbation studies.
inline SymbolPair real_symmetric_form(cplx c, std::span<const cplx> a, std::span<const cplx> b, const SpaceParams& sp) {
  sp.validate();
  if (static_cast<int>(a.size()) != sp.d || static_cast<int>(b.size()) != sp.d) {
    throw DimensionError("real symmetric form: a and b need d entries");
  }
  SymbolPair s{{c, {}}, {}, sp};
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    if (!(std::abs(a[jj]) < 1.0)) throw ParameterError("real symmetric form: |a_" + std::to_string(j + 1) + "| must be < 1");
    s.f.factors.push_back({std::conj(a[jj]), sp.weight(j) + 2, j});
    s.g.coords.push_back({j, real_symmetric_component(a[jj], b[jj])});
  }
  return s;
}

inline SymbolPair real_symmetric_symbol(double c, std::span<const cplx> a, std::span<const double> b,
                                        const SpaceParams& sp) {
  std::vector<cplx> bc(b.begin(), b.end());
  const auto conds = realsym_conditions(c, a, bc);
  if (!all_passed(conds)) throw ParameterError("real symmetric symbol: " + failed_names(conds));
  return real_symmetric_form(c, a, bc, sp);
}

// ---------------------------------------------------------------------------
// Unitary normal form:
//   f(z) = c prod_j (1 - |theta_j|^2)^(1 + ell_j/2) / (1 - a_j conj(theta_j) z_phi(j))^(ell_j + 2)
//   g_k(z) = a_k (conj(a_k) theta_k - z_phi(k)) / (1 - a_k conj(theta_k) z_phi(k))

inline LFT unitary_component(cplx a, cplx theta) {
  return {-a, a * std::conj(a) * theta, -a * std::conj(theta), cplx{1.0}};
}

inline bool is_permutation(std::span<const int> phi, int d) {
  if (static_cast<int>(phi.size()) != d) return false;
  std::vector<int> seen(static_cast<std::size_t>(d), 0);
  for (int v : phi) {
    if (v < 0 || v >= d || seen[static_cast<std::size_t>(v)]++) return false;
  }
  return true;
}

inline std::vector<ConditionCheck> unitary_conditions(cplx c, std::span<const cplx> a, std::span<const cplx> theta,
                                                      std::span<const int> phi, const SpaceParams& sp) {
  std::vector<ConditionCheck> out;
  out.push_back({"phi-bijective", is_permutation(phi, sp.d), is_permutation(phi, sp.d) ? 0.0 : 1.0, ""});
  const double rc = std::abs(std::abs(c) - 1.0);
  out.push_back({"c-unimodular", rc <= kConditionSlack, rc, ""});
  double ra = 0.0;
  for (const auto& x : a) ra = std::max(ra, std::abs(std::abs(x) - 1.0));
  out.push_back({"a-unimodular", ra <= kConditionSlack, ra, ""});
  double rt = -INFINITY;
  for (const auto& t : theta) rt = std::max(rt, std::abs(t) - 1.0);
  out.push_back({"theta-in-polydisk", rt < 0.0, std::max(0.0, rt), ""});
  ConditionCheck compat{"ell-compat", true, 0.0, ""};
  if (out[0].passed) {
    for (int k = 0; k < sp.d; ++k) {
      const int pk = phi[static_cast<std::size_t>(k)];
      if (sp.weight(pk) != sp.weight(k)) {
        compat.passed = false;
        compat.residual = std::max(compat.residual, static_cast<double>(std::abs(sp.weight(pk) - sp.weight(k))));
        compat.detail += (compat.detail.empty() ? "" : "; ") + std::string("ell_") + std::to_string(pk + 1) +
                         " != ell_" + std::to_string(k + 1);
      }
    }
  }
  out.push_back(compat);
  return out;
}

// Unchecked builder: only analyticity of f and a valid permutation are required.
inline SymbolPair unitary_form(cplx c, std::span<const cplx> a, std::span<const cplx> theta, std::span<const int> phi,
                               const SpaceParams& sp) {
  sp.validate();
  if (static_cast<int>(a.size()) != sp.d || static_cast<int>(theta.size()) != sp.d) {
    throw DimensionError("unitary form: a and theta need d entries");
  }
  if (!is_permutation(phi, sp.d)) throw ParameterError("unitary form: phi is not a permutation of the coordinates");
  SymbolPair s{{c, {}}, {}, sp};
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    if (!(std::abs(theta[jj]) < 1.0)) throw ParameterError("unitary form: theta must lie in the polydisk");
    s.f.c *= theta_constant(theta[jj], sp.weight(j));
    s.f.factors.push_back({a[jj] * std::conj(theta[jj]), sp.weight(j) + 2, phi[jj]});
    s.g.coords.push_back({phi[jj], unitary_component(a[jj], theta[jj])});
  }
  return s;
}

inline SymbolPair unitary_symbol(cplx c, std::span<const cplx> a, std::span<const cplx> theta, std::span<const int> phi,
                                 const SpaceParams& sp) {
  const auto conds = unitary_conditions(c, a, theta, phi, sp);
  if (!all_passed(conds)) throw ParameterError("unitary symbol: " + failed_names(conds));
  return unitary_form(c, a, theta, phi, sp);
}

// psi_theta = K_theta / ||K_theta|| paired with the coordinatewise involutions
// (theta_j - z_j) / (1 - conj(theta_j) z_j).
inline SymbolPair involution_symbol(std::span<const cplx> theta, const SpaceParams& sp) {
  sp.validate();
  require_in_polydisk(theta, sp.d, "involution_symbol");
  SymbolPair s{{cplx{1.0}, {}}, {}, sp};
  for (int j = 0; j < sp.d; ++j) {
    const cplx t = theta[static_cast<std::size_t>(j)];
    // 1 / ||K_theta|| = prod_j (1 - |theta_j|^2)^((ell_j + 2) / 2)
    s.f.c *= std::exp(0.5 * (sp.weight(j) + 2) * std::log1p(-std::norm(t)));
    s.f.factors.push_back({std::conj(t), sp.weight(j) + 2, j});
    s.g.coords.push_back({j, LFT{cplx{-1.0}, t, -std::conj(t), cplx{1.0}}});
  }
  return s;
}

// ---------------------------------------------------------------------------
// C-symmetric normal form

// U1 coordinate: G + E / (u + F); E = 0 means the constant G.
struct U1Coefficients {
  cplx G{0.0};
  cplx E{0.0};
  cplx F{0.0};
};

// U2 coordinate: alpha + beta q u / (1 - alpha q u).
struct U2Coefficients {
  cplx alpha{0.0};
  cplx beta{0.0};
};

using CsymCoefficients = std::variant<U1Coefficients, U2Coefficients>;

inline LFT u1_component(const U1Coefficients& k) {
  if (k.E == cplx{0.0}) return LFT::constant(k.G);
  return {k.G, k.G * k.F + k.E, cplx{1.0}, k.F};
}

inline LFT u2_component(const U2Coefficients& k, cplx q) {
  return {(k.beta - k.alpha * k.alpha) * q, k.alpha, -k.alpha * q, cplx{1.0}};
}

// Residual of p - G|p|^2 = -F|p|^2 + (GF + E) conj(p), p the coordinate's p_kappa.
inline double u1_relation_residual(const U1Coefficients& k, cplx p) {
  const double pp = std::norm(p);
  return std::abs(p - k.G * pp - (-k.F * pp + (k.G * k.F + k.E) * std::conj(p)));
}

inline double u1_inequality_residual(const U1Coefficients& k) {
  return std::abs((k.G * k.F + k.E) * std::conj(k.F) - k.G) + std::abs(k.E) - (std::norm(k.F) - 1.0);
}

inline double u2_inequality_residual(const U2Coefficients& k) {
  return std::abs(k.alpha + std::conj(k.alpha) * (k.beta - k.alpha * k.alpha)) + std::abs(k.beta) -
         (1.0 - std::norm(k.alpha));
}

inline std::vector<ConditionCheck> csym_conditions(const ConjugationParams& cp, std::span<const CsymCoefficients> coeffs) {
  ConditionCheck c1603{"202208121603", true, 0.0, ""};
  ConditionCheck c0907{"cond-202106030907", true, 0.0, ""};
  ConditionCheck c1558{"202208121558", true, -INFINITY, ""};
  ConditionCheck c1628{"202208121628", true, 0.0, ""};
  ConditionCheck c0836{"cond-202105210836", true, -INFINITY, ""};
  ConditionCheck kind{"branch-kind", true, 0.0, ""};
  bool any_1558 = false, any_0836 = false;
  auto fail = [](ConditionCheck& c, int k) {
    c.passed = false;
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("kappa = ") + std::to_string(k + 1);
  };
  for (int k = 0; k < cp.dim(); ++k) {
    const auto& co = coeffs[static_cast<std::size_t>(k)];
    if (cp.in_u1(k)) {
      const auto* u = std::get_if<U1Coefficients>(&co);
      if (!u) {
        fail(kind, k);
        continue;
      }
      if (u->E == cplx{0.0}) {
        const double r = std::abs(u->G) - 1.0;
        c1603.residual = std::max(c1603.residual, std::max(0.0, r));
        if (!(r < 0.0)) fail(c1603, k);
      } else {
        const double rel = u1_relation_residual(*u, cp.p_of(k));
        c0907.residual = std::max(c0907.residual, rel);
        if (rel > kRelationTol) fail(c0907, k);
        const double ineq = u1_inequality_residual(*u);
        any_1558 = true;
        c1558.residual = std::max(c1558.residual, ineq);
        if (ineq > kConditionSlack) fail(c1558, k);
      }
    } else {
      const auto* u = std::get_if<U2Coefficients>(&co);
      if (!u) {
        fail(kind, k);
        continue;
      }
      if (u->beta == cplx{0.0}) {
        const double r = std::abs(u->alpha) - 1.0;
        c1628.residual = std::max(c1628.residual, std::max(0.0, r));
        if (!(r < 0.0)) fail(c1628, k);
      } else {
        const double ineq = u2_inequality_residual(*u);
        any_0836 = true;
        c0836.residual = std::max(c0836.residual, ineq);
        if (ineq > kConditionSlack) fail(c0836, k);
      }
    }
  }
  if (!any_1558) c1558.residual = 0.0;
  if (!any_0836) c0836.residual = 0.0;
  if (!kind.passed) kind.residual = 1.0;
  return {kind, c1603, c0907, c1558, c1628, c0836};
}

// The kernel parameter of f: conj(omega(g(r))), r_j = p_j on U1 and 0 on U2.
inline Point csym_kernel_point(const ConjugationParams& cp, const MapSymbol& g) {
  const Point r = cp.reference_point();
  Point w(r.size());
  for (int j = 0; j < cp.dim(); ++j) {
    const auto& comp = g.coords[static_cast<std::size_t>(j)];
    const cplx gj = eval(comp.map, r[static_cast<std::size_t>(comp.var)]);
    w[static_cast<std::size_t>(j)] = std::conj(eval(cp.omega_lft(j), gj));
  }
  return w;
}

// Unchecked builder for f = c_tilde K_{conj(omega(g(r)))} with g from the
// per-coordinate coefficients (v = identity).
inline SymbolPair csym_form(const ConjugationParams& cp, std::span<const CsymCoefficients> coeffs, cplx c_tilde) {
  if (static_cast<int>(coeffs.size()) != cp.dim()) throw DimensionError("csym form: need one coefficient set per coordinate");
  SymbolPair s{{c_tilde, {}}, {}, cp.space()};
  for (int k = 0; k < cp.dim(); ++k) {
    const auto& co = coeffs[static_cast<std::size_t>(k)];
    if (cp.in_u1(k)) {
      const auto* u = std::get_if<U1Coefficients>(&co);
      if (!u) throw ParameterError("csym form: coordinate " + std::to_string(k + 1) + " is in U1 but has U2 coefficients");
      s.g.coords.push_back({k, u1_component(*u)});
    } else {
      const auto* u = std::get_if<U2Coefficients>(&co);
      if (!u) throw ParameterError("csym form: coordinate " + std::to_string(k + 1) + " is in U2 but has U1 coefficients");
      s.g.coords.push_back({k, u2_component(*u, cp.q_of(k))});
    }
  }
  const Point w = csym_kernel_point(cp, s.g);
  for (int j = 0; j < cp.dim(); ++j) {
    const cplx wj = w[static_cast<std::size_t>(j)];
    if (!(std::abs(wj) < 1.0)) {
      throw ParameterError("csym form: kernel point coordinate " + std::to_string(j + 1) + " outside the disk");
    }
    s.f.factors.push_back({std::conj(wj), cp.space().weight(j) + 2, j});
  }
  return s;
}

inline SymbolPair csym_symbol(const ConjugationParams& cp, std::span<const CsymCoefficients> coeffs, cplx c_tilde) {
  if (static_cast<int>(coeffs.size()) != cp.dim()) throw DimensionError("csym symbol: need one coefficient set per coordinate");
  const auto conds = csym_conditions(cp, coeffs);
  if (!all_passed(conds)) throw ParameterError("csym symbol: " + failed_names(conds));
  return csym_form(cp, coeffs, c_tilde);
}

}  // namespace wco
