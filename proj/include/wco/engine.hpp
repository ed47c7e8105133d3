#pragma once

// Operator realization for structured symbols: matrix sections in the
// orthonormal monomial basis, an independent series path for W h, the adjoint
// action on kernels, and the closed-form pointwise defect functionals.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "wco/bergman.hpp"
#include "wco/conjugation.hpp"
#include "wco/parallel.hpp"
#include "wco/sampling.hpp"
#include "wco/series.hpp"
#include "wco/symbols.hpp"
#include "wco/types.hpp"

namespace wco {

// M(beta, alpha) = <W e_alpha, e_beta> with e_alpha = z^alpha / ||z^alpha||;
// rows and columns follow basis_enumerate(trunc).
struct OperatorSection {
  SpaceParams sp;
  Truncation trunc;
  Eigen::MatrixXcd M;
};

inline OperatorSection build_matrix(const SymbolPair& sym, const Truncation& trunc) {
  const SymbolExpander ex(sym, trunc);
  const auto basis = basis_enumerate(trunc);
  const auto norms = basis_norms(trunc, sym.sp);
  const auto n = static_cast<Eigen::Index>(basis.size());
  OperatorSection sec{sym.sp, trunc, Eigen::MatrixXcd::Zero(n, n)};
  parallel_for(basis.size(), [&](std::size_t a) {
    const PowerSeries col = ex.column(basis[a]);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      sec.M(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = col.coeffs()[b] * (norms[b] / norms[a]);
    }
  });
  return sec;
}

// f * (h o g) truncated to h's truncation, built from series arithmetic
// (powers of the lifted g components) rather than the expander.
inline PowerSeries apply_operator(const SymbolPair& sym, const PowerSeries& h) {
  require_valid(sym);
  if (h.dim() != sym.dim()) throw DimensionError("apply_operator: series dimension differs from d");
  const Truncation& t = h.trunc();
  const int d = sym.dim();

  PowerSeries f = PowerSeries::constant(t, sym.f.c);
  for (const auto& fac : sym.f.factors) {
    const int cap = t.caps[static_cast<std::size_t>(fac.var)];
    f = mul(f, lift(neg_binomial_series(fac.w, fac.m, cap), fac.var, d, t));
  }

  std::vector<std::vector<PowerSeries>> powers(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const auto& comp = sym.g.coords[static_cast<std::size_t>(k)];
    const PowerSeries gk = lift(lft_series(comp.map, t.caps[static_cast<std::size_t>(comp.var)]), comp.var, d, t);
    auto& pw = powers[static_cast<std::size_t>(k)];
    pw.push_back(PowerSeries::constant(t, 1.0));
    for (int e = 1; e <= t.caps[static_cast<std::size_t>(k)]; ++e) pw.push_back(mul(pw.back(), gk));
  }

  PowerSeries comp(t);
  for_each_index(t, [&](std::size_t k, const MultiIndex& alpha) {
    const cplx coef = h.coeffs()[k];
    if (coef == cplx{0.0}) return;
    PowerSeries term = PowerSeries::constant(t, coef);
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (alpha[j] > 0) term = mul(term, powers[j][static_cast<std::size_t>(alpha[j])]);
    }
    comp = add(comp, term);
  });
  return mul(f, comp);
}

struct AdjointCheck {
  // max_alpha |<W* K_z, e_alpha> - <conj(f(z)) K_{g(z)}, e_alpha>| over the section
  double coefficient_residual = 0.0;
  // |sum_alpha <W* K_z, e_alpha> e_alpha(u) - conj(f(z)) K_{g(z)}(u)|, truncated in alpha
  double pointwise_residual = 0.0;
};

// Checks W* K_z = conj(f(z)) K_{g(z)} through the matrix entries:
// <W* K_z, e_alpha> = sum_beta conj(M(beta, alpha)) <K_z, e_beta>. Columns are
// indexed by trunc; the beta sum runs over row_trunc (default 3x caps) so the
// row truncation does not dominate the residual.
inline AdjointCheck adjoint_kernel_check(const SymbolPair& sym, std::span<const cplx> z, std::span<const cplx> u,
                                         const Truncation& trunc, const Truncation* row_trunc = nullptr) {
  require_in_polydisk(z, sym.dim(), "adjoint_kernel_check");
  require_in_polydisk(u, sym.dim(), "adjoint_kernel_check");
  if (trunc.dim() != sym.dim()) throw DimensionError("adjoint_kernel_check: truncation dimension differs from d");
  Truncation rows = trunc;
  if (row_trunc) {
    rows = *row_trunc;
  } else {
    for (auto& c : rows.caps) c *= 3;
  }
  for (int j = 0; j < sym.dim(); ++j) {
    if (rows.caps[static_cast<std::size_t>(j)] < trunc.caps[static_cast<std::size_t>(j)]) {
      throw ParameterError("adjoint_kernel_check: row truncation smaller than the section");
    }
  }
  const SymbolExpander ex(sym, rows);
  const auto cols = basis_enumerate(trunc);
  const auto row_norms = basis_norms(rows, sym.sp);

  // <K_z, e_beta> = conj(z^beta) / ||z^beta||
  const PowerSeries kz = kernel_coeffs(z, rows, sym.sp);
  std::vector<cplx> kz_on(kz.size());
  for (std::size_t b = 0; b < kz.size(); ++b) kz_on[b] = kz.coeffs()[b] * row_norms[b];

  const cplx fz = eval_f(sym, z);
  const Point gz = eval_g(sym, z);

  std::vector<cplx> lhs(cols.size()), rhs(cols.size());
  parallel_for(cols.size(), [&](std::size_t a) {
    const MultiIndex& alpha = cols[a];
    const double na = std::sqrt(monomial_norm_sq(alpha, sym.sp));
    const PowerSeries col = ex.column(alpha);
    cplx acc{0.0};
    for (std::size_t b = 0; b < col.size(); ++b) acc += std::conj(col.coeffs()[b] * (row_norms[b] / na)) * kz_on[b];
    lhs[a] = acc;
    cplx ga{1.0};
    for (std::size_t j = 0; j < alpha.size(); ++j) ga *= std::pow(gz[j], alpha[j]);
    rhs[a] = std::conj(fz * ga) / na;
  });

  AdjointCheck out;
  cplx approx{0.0};
  for (std::size_t a = 0; a < cols.size(); ++a) {
    out.coefficient_residual = std::max(out.coefficient_residual, std::abs(lhs[a] - rhs[a]));
    const double na = std::sqrt(monomial_norm_sq(cols[a], sym.sp));
    cplx ua{1.0};
    for (std::size_t j = 0; j < cols[a].size(); ++j) ua *= std::pow(u[j], cols[a][j]);
    approx += lhs[a] * ua / na;
  }
  out.pointwise_residual = std::abs(approx - std::conj(fz) * kernel_eval(gz, u, sym.sp));
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise defects

struct DefectResult {
  double max_residual = 0.0;
  std::size_t worst_sample = 0;
  int samples = 0;
};

namespace detail {

template <typename Fn>
DefectResult sampled_max(const SamplePlan& plan, int d, Fn&& residual) {
  const auto pairs = sample_pairs(plan, d);
  std::vector<double> r(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) { r[i] = residual(pairs[i].z, pairs[i].u); });
  DefectResult out;
  out.samples = static_cast<int>(pairs.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    // NaN (a pole hit) counts as the worst possible residual.
    if (std::isnan(r[i]) || r[i] > out.max_residual) {
      out.max_residual = std::isnan(r[i]) ? INFINITY : r[i];
      out.worst_sample = i;
      if (std::isnan(r[i])) break;
    }
  }
  return out;
}

// The closed forms below skip the polydisk check on purpose: when g is not a
// self-map, g(z) may leave the polydisk while the identities stay well defined
// away from poles.

inline cplx kernel_formula(std::span<const cplx> z, std::span<const cplx> u, const SpaceParams& sp) {
  cplx v{1.0};
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    v /= std::pow(1.0 - u[jj] * std::conj(z[jj]), sp.weight(j) + 2);
  }
  return v;
}

inline cplx theta_formula(const ConjugationParams& cp, std::span<const cplx> z) {
  cplx v{1.0};
  for (int j : cp.u1()) {
    const cplx p = cp.p_of(j);
    const int l = cp.space().weight(j);
    v *= theta_constant(p, l) / std::pow(1.0 - std::conj(p) * z[static_cast<std::size_t>(j)], l + 2);
  }
  return v;
}

inline Point conj_omega_formula(const ConjugationParams& cp, std::span<const cplx> z) {
  Point w(z.size());
  for (int j = 0; j < cp.dim(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    w[jj] = std::conj(eval(cp.omega_lft(j), z[jj]));
  }
  return w;
}

// g(z) with any pole hit turned into NaN so the sample scores as a failure.
inline Point eval_g_or_nan(const SymbolPair& sym, std::span<const cplx> z) {
  try {
    return eval_g(sym, z);
  } catch (const DomainError&) {
    return Point(z.size(), cplx(NAN, NAN));
  }
}

}  // namespace detail

// The defect functionals accept any evaluable pair (g need not be a
// self-map), so perturbations of the normal forms can be measured directly.

// max |conj(f(z)) K_{g(z)}(u) - f(u) K_z(g(u))|
inline DefectResult realsym_pointwise_defect(const SymbolPair& sym, const SamplePlan& plan) {
  require_evaluable(sym);
  const auto& sp = sym.sp;
  return detail::sampled_max(plan, sym.dim(), [&](const Point& z, const Point& u) {
    const cplx lhs = std::conj(eval_f(sym, z)) * detail::kernel_formula(detail::eval_g_or_nan(sym, z), u, sp);
    const cplx rhs = eval_f(sym, u) * detail::kernel_formula(z, detail::eval_g_or_nan(sym, u), sp);
    return std::abs(lhs - rhs);
  });
}

// max |conj(f(z)) f(u) K_{g(z)}(g(u)) - K_z(u)|
inline DefectResult unitary_pointwise_defect(const SymbolPair& sym, const SamplePlan& plan) {
  require_evaluable(sym);
  const auto& sp = sym.sp;
  return detail::sampled_max(plan, sym.dim(), [&](const Point& z, const Point& u) {
    const cplx lhs = std::conj(eval_f(sym, z)) * eval_f(sym, u) *
                     detail::kernel_formula(detail::eval_g_or_nan(sym, z), detail::eval_g_or_nan(sym, u), sp);
    return std::abs(lhs - kernel_eval(z, u, sp));
  });
}

// With z' = conj(omega(z)):
// max |conj(theta(z)) theta(g(z')) f(z') K_{conj(omega(g(z')))}(u) - f(u) K_z(g(u))|
inline DefectResult csym_pointwise_defect(const SymbolPair& sym, const ConjugationParams& cp, const SamplePlan& plan) {
  require_evaluable(sym);
  if (!(sym.sp == cp.space())) throw DimensionError("csym defect: symbol and conjugation live on different spaces");
  const auto& sp = sym.sp;
  return detail::sampled_max(plan, sym.dim(), [&](const Point& z, const Point& u) {
    const Point zp = conj_omega(cp, z);
    const Point gzp = detail::eval_g_or_nan(sym, zp);
    Point w;
    try {
      w = detail::conj_omega_formula(cp, gzp);
    } catch (const DomainError&) {
      return static_cast<double>(NAN);
    }
    const cplx lhs = std::conj(theta_weight_eval(cp, z)) * detail::theta_formula(cp, gzp) * eval_f(sym, zp) *
                     detail::kernel_formula(w, u, sp);
    const cplx rhs = eval_f(sym, u) * detail::kernel_formula(z, detail::eval_g_or_nan(sym, u), sp);
    return std::abs(lhs - rhs);
  });
}

// ---------------------------------------------------------------------------
// Section diagnostics

inline double hermitian_defect(const OperatorSection& sec) { return (sec.M - sec.M.adjoint()).norm(); }

struct UnitaryResidual {
  double raw = 0.0;    // ||M* M - I||_F on the full section
  double block = 0.0;  // same, restricted to indices with every alpha_j <= cap_j / 2
};

inline UnitaryResidual unitary_section_residual(const OperatorSection& sec) {
  const Eigen::MatrixXcd G = sec.M.adjoint() * sec.M;
  const auto n = G.rows();
  UnitaryResidual out;
  out.raw = (G - Eigen::MatrixXcd::Identity(n, n)).norm();
  std::vector<Eigen::Index> keep;
  for_each_index(sec.trunc, [&](std::size_t k, const MultiIndex& a) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (2 * a[j] > sec.trunc.caps[j]) return;
    }
    keep.push_back(static_cast<Eigen::Index>(k));
  });
  double acc = 0.0;
  for (auto i : keep) {
    for (auto j : keep) acc += std::norm(G(i, j) - (i == j ? 1.0 : 0.0));
  }
  out.block = std::sqrt(acc);
  return out;
}

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest singular value by power iteration on M* M from the all-ones vector.
inline NormEstimate norm_estimate(const OperatorSection& sec, double tol = 1e-10, int max_iter = 10000) {
  const auto n = sec.M.cols();
  NormEstimate out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd w = sec.M.adjoint() * (sec.M * v);
    const double next = w.norm();
    out.iterations = it;
    if (next == 0.0) {
      lambda = 0.0;
      out.converged = true;
      break;
    }
    v = w / next;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      out.converged = true;
      break;
    }
    lambda = next;
  }
  out.value = std::sqrt(lambda);
  return out;
}

}  // namespace wco
