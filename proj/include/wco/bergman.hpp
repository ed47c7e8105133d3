#pragma once

// Weighted Bergman space of the polydisk with integer weights ell_j >= 0:
// analytic functions square-integrable against
//     prod_j (1 + ell_j) (1 - |z_j|^2)^ell_j dA(z_j),
// dA the area measure normalized to A(D) = 1. Monomials are orthogonal and
//     ||z^alpha||^2 = prod_j alpha_j! (ell_j + 1)! / (alpha_j + ell_j + 1)!,
// the reproducing kernel is K_z(u) = prod_j (1 - u_j conj(z_j))^-(ell_j + 2).
//
// The quadrature routines compute the same inner products directly from the
// weighted area integral; they never touch the closed-form norms and serve as
// the independent check on them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wco/series.hpp"
#include "wco/types.hpp"

namespace wco {

struct SpaceParams {
  int d = 1;
  std::vector<int> ell{0};

  SpaceParams() = default;
  SpaceParams(int dim, std::vector<int> weights) : d(dim), ell(std::move(weights)) { validate(); }

  static SpaceParams unweighted(int dim) { return SpaceParams(dim, std::vector<int>(static_cast<std::size_t>(dim), 0)); }

  void validate() const {
    if (d < 1) throw ParameterError("space dimension must be >= 1");
    if (static_cast<int>(ell.size()) != d) {
      throw ParameterError("weight vector has " + std::to_string(ell.size()) + " entries, expected d = " +
                           std::to_string(d));
    }
    for (int l : ell) {
      if (l < 0) throw ParameterError("weights ell_j must be non-negative");
    }
  }

  [[nodiscard]] int weight(int j) const { return ell[static_cast<std::size_t>(j)]; }

  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

// alpha! (ell+1)! / (alpha+ell+1)! = prod_{k=1}^{ell+1} k / (alpha + k).
inline double monomial_norm_sq_1d(int alpha, int ell) {
  double v = 1.0;
  for (int k = 1; k <= ell + 1; ++k) v *= static_cast<double>(k) / (alpha + k);
  return v;
}

inline double monomial_norm_sq(const MultiIndex& alpha, const SpaceParams& sp) {
  if (static_cast<int>(alpha.size()) != sp.d) throw DimensionError("monomial_norm_sq: index length differs from d");
  double v = 1.0;
  for (int j = 0; j < sp.d; ++j) v *= monomial_norm_sq_1d(alpha[static_cast<std::size_t>(j)], sp.weight(j));
  return v;
}

inline std::vector<MultiIndex> basis_enumerate(const Truncation& trunc) {
  std::vector<MultiIndex> out;
  out.reserve(trunc.size());
  for_each_index(trunc, [&](std::size_t, const MultiIndex& a) { out.push_back(a); });
  return out;
}

// ||z^alpha|| for every alpha of trunc, in basis order.
inline std::vector<double> basis_norms(const Truncation& trunc, const SpaceParams& sp) {
  std::vector<double> out;
  out.reserve(trunc.size());
  for_each_index(trunc, [&](std::size_t, const MultiIndex& a) { out.push_back(std::sqrt(monomial_norm_sq(a, sp))); });
  return out;
}

inline void require_in_polydisk(std::span<const cplx> z, int d, const char* what) {
  if (static_cast<int>(z.size()) != d) {
    throw DimensionError(std::string(what) + ": point has " + std::to_string(z.size()) + " coordinates, expected " +
                         std::to_string(d));
  }
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!(std::abs(z[j]) < 1.0)) {
      throw DomainError(std::string(what) + ": coordinate " + std::to_string(j + 1) + " = " + to_string(z[j]) +
                        " is not inside the unit disk");
    }
  }
}

inline cplx kernel_eval(std::span<const cplx> z, std::span<const cplx> u, const SpaceParams& sp) {
  require_in_polydisk(z, sp.d, "kernel_eval");
  require_in_polydisk(u, sp.d, "kernel_eval");
  cplx v{1.0};
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    v /= std::pow(1.0 - u[jj] * std::conj(z[jj]), sp.weight(j) + 2);
  }
  return v;
}

// Taylor expansion of u -> K_z(u).
inline PowerSeries kernel_coeffs(std::span<const cplx> z, const Truncation& trunc, const SpaceParams& sp) {
  require_in_polydisk(z, sp.d, "kernel_coeffs");
  if (trunc.dim() != sp.d) throw DimensionError("kernel_coeffs: truncation dimension differs from d");
  std::vector<PowerSeries> factors;
  factors.reserve(static_cast<std::size_t>(sp.d));
  for (int j = 0; j < sp.d; ++j) {
    factors.push_back(neg_binomial_series(std::conj(z[static_cast<std::size_t>(j)]), sp.weight(j) + 2,
                                          trunc.caps[static_cast<std::size_t>(j)]));
  }
  return tensor_product(factors, trunc);
}

// <x, y> = sum_alpha x_alpha conj(y_alpha) ||z^alpha||^2 over the common truncation.
inline cplx inner_product(const PowerSeries& x, const PowerSeries& y, const SpaceParams& sp) {
  require_same_dim(x, y, "inner_product");
  if (x.dim() != sp.d) throw DimensionError("inner_product: series dimension differs from d");
  const Truncation t = min_truncation(x.trunc(), y.trunc());
  cplx acc{0.0};
  for_each_index(t, [&](std::size_t, const MultiIndex& a) {
    acc += x[a] * std::conj(y[a]) * monomial_norm_sq(a, sp);
  });
  return acc;
}

inline double norm(const PowerSeries& x, const SpaceParams& sp) { return std::sqrt(inner_product(x, x, sp).real()); }

// Orthonormal-basis coordinates: x_alpha ||z^alpha||.
inline std::vector<cplx> orthonormal_coords(const PowerSeries& x, const SpaceParams& sp) {
  std::vector<cplx> out(x.size());
  for_each_index(x.trunc(), [&](std::size_t k, const MultiIndex& a) {
    out[k] = x.coeffs()[k] * std::sqrt(monomial_norm_sq(a, sp));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature oracle

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

namespace detail {

// (P_n(x), P_n'(x)) by the three-term recurrence.
inline std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

// Newton iteration on P_n from the usual cosine initial guesses, mapped to [0, 1].
inline GaussLegendre gauss_legendre_unit(int n) {
  if (n < 1) throw ParameterError("Gauss-Legendre rule needs at least one node");
  GaussLegendre r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = detail::legendre(n, x).second;
    const auto ii = static_cast<std::size_t>(i);
    r.nodes[ii] = 0.5 * (1.0 - x);
    r.weights[ii] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2 / ((1 - x^2) P'^2), halved for [0, 1]
  }
  return r;
}

// Tensor grid for the weighted area integral. Radial variable is t = r^2 so the
// integrand of a polynomial pair is polynomial in t; angular nodes are uniform.
struct QuadratureGrid {
  GaussLegendre radial;
  int angular_count = 0;

  static QuadratureGrid make(int radial_nodes, int angular_nodes) {
    if (angular_nodes < 1) throw ParameterError("angular node count must be positive");
    return {gauss_legendre_unit(radial_nodes), angular_nodes};
  }

  [[nodiscard]] int radial_count() const { return static_cast<int>(radial.nodes.size()); }
};

namespace detail {

// One-variable quadrature moments Q[a][b] = sum_nodes w z^a conj(z)^b with the
// weight (1 + ell)(1 - t)^ell folded into w.
inline std::vector<std::vector<cplx>> moment_matrix(int deg_x, int deg_y, int ell, const QuadratureGrid& grid) {
  std::vector<std::vector<cplx>> q(static_cast<std::size_t>(deg_x) + 1,
                                   std::vector<cplx>(static_cast<std::size_t>(deg_y) + 1, cplx{0.0}));
  const int na = grid.angular_count;
  const int top = std::max(deg_x, deg_y);
  std::vector<cplx> zp(static_cast<std::size_t>(top) + 1);
  for (int i = 0; i < grid.radial_count(); ++i) {
    const double t = grid.radial.nodes[static_cast<std::size_t>(i)];
    const double r = std::sqrt(t);
    const double wr = grid.radial.weights[static_cast<std::size_t>(i)] * (1.0 + ell) * std::pow(1.0 - t, ell) / na;
    for (int k = 0; k < na; ++k) {
      const cplx z = std::polar(r, 2.0 * std::numbers::pi * k / na);
      zp[0] = 1.0;
      for (int n = 1; n <= top; ++n) zp[static_cast<std::size_t>(n)] = zp[static_cast<std::size_t>(n) - 1] * z;
      for (int a = 0; a <= deg_x; ++a) {
        for (int b = 0; b <= deg_y; ++b) {
          q[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
              wr * zp[static_cast<std::size_t>(a)] * std::conj(zp[static_cast<std::size_t>(b)]);
        }
      }
    }
  }
  return q;
}

}  // namespace detail

// Tensor-product quadrature of the weighted area integral of x conj(y). The
// grid sum factorizes over variables, so it is accumulated through
// per-variable moment matrices rather than point values on the full grid.
inline cplx quad_inner_product(const PowerSeries& x, const PowerSeries& y, const SpaceParams& sp,
                               const QuadratureGrid& grid) {
  require_same_dim(x, y, "quad_inner_product");
  if (x.dim() != sp.d) throw DimensionError("quad_inner_product: series dimension differs from d");
  int max_deg = 0;
  for (int j = 0; j < sp.d; ++j) {
    max_deg = std::max({max_deg, x.trunc().caps[static_cast<std::size_t>(j)], y.trunc().caps[static_cast<std::size_t>(j)]});
  }
  int max_ell = 0;
  for (int l : sp.ell) max_ell = std::max(max_ell, l);
  if (grid.angular_count < 2 * max_deg + 1) {
    throw ParameterError("quadrature under-resolved: angular_count " + std::to_string(grid.angular_count) +
                         " < 2 * max degree + 1 = " + std::to_string(2 * max_deg + 1));
  }
  // Radial integrand t^deg (1 - t)^ell has degree <= max_deg + max_ell.
  if (2 * grid.radial_count() - 1 < max_deg + max_ell) {
    throw ParameterError("quadrature under-resolved: " + std::to_string(grid.radial_count()) +
                         " radial nodes cannot integrate degree " + std::to_string(max_deg + max_ell));
  }

  std::vector<std::vector<std::vector<cplx>>> q;
  for (int j = 0; j < sp.d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    q.push_back(detail::moment_matrix(x.trunc().caps[jj], y.trunc().caps[jj], sp.weight(j), grid));
  }
  cplx acc{0.0};
  for_each_index(x.trunc(), [&](std::size_t kx, const MultiIndex& a) {
    const cplx xa = x.coeffs()[kx];
    if (xa == cplx{0.0}) return;
    for_each_index(y.trunc(), [&](std::size_t ky, const MultiIndex& b) {
      const cplx yb = y.coeffs()[ky];
      if (yb == cplx{0.0}) return;
      cplx w{1.0};
      for (std::size_t j = 0; j < a.size(); ++j) w *= q[j][static_cast<std::size_t>(a[j])][static_cast<std::size_t>(b[j])];
      acc += xa * std::conj(yb) * w;
    });
  });
  return acc;
}

}  // namespace wco
