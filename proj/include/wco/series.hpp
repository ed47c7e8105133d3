#pragma once

// Dense truncated power series in d complex variables.
//
// Storage is a row-major tensor with extent caps[j] + 1 along variable j, so
// the flat index of a multi-index is its position in lexicographic order (the
// first variable is the most significant digit). Binary operations work on the
// componentwise-minimum truncation of their operands, and products only ever
// accumulate coefficients whose per-variable degree stays within that
// truncation: low-order coefficients are exact regardless of the cap.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wco/moebius.hpp"
#include "wco/types.hpp"

namespace wco {

using MultiIndex = std::vector<int>;

struct Truncation {
  std::vector<int> caps;

  Truncation() = default;
  explicit Truncation(std::vector<int> c) : caps(std::move(c)) {
    for (int v : caps) {
      if (v < 0) throw ParameterError("truncation caps must be non-negative");
    }
  }
  static Truncation uniform(int d, int cap) { return Truncation(std::vector<int>(static_cast<std::size_t>(d), cap)); }

  [[nodiscard]] int dim() const { return static_cast<int>(caps.size()); }
  [[nodiscard]] std::size_t size() const {
    std::size_t n = 1;
    for (int v : caps) n *= static_cast<std::size_t>(v) + 1;
    return n;
  }
  [[nodiscard]] bool contains(const MultiIndex& alpha) const {
    if (alpha.size() != caps.size()) return false;
    for (std::size_t j = 0; j < caps.size(); ++j) {
      if (alpha[j] < 0 || alpha[j] > caps[j]) return false;
    }
    return true;
  }

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

inline Truncation min_truncation(const Truncation& x, const Truncation& y) {
  if (x.dim() != y.dim()) throw DimensionError("truncations of different dimension");
  std::vector<int> c(x.caps.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = std::min(x.caps[j], y.caps[j]);
  return Truncation(std::move(c));
}

inline std::string index_string(const MultiIndex& alpha) {
  std::string s = "(";
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(alpha[j]);
  }
  return s + ")";
}

class PowerSeries {
 public:
  PowerSeries() = default;

  explicit PowerSeries(Truncation trunc)
      : trunc_(std::move(trunc)), coeffs_(trunc_.size(), cplx{0.0}) {
    if (trunc_.dim() < 1) throw DimensionError("power series needs at least one variable");
  }

  PowerSeries(Truncation trunc, std::vector<cplx> coeffs) : trunc_(std::move(trunc)), coeffs_(std::move(coeffs)) {
    if (trunc_.dim() < 1) throw DimensionError("power series needs at least one variable");
    if (coeffs_.size() != trunc_.size()) {
      throw DimensionError("coefficient array size " + std::to_string(coeffs_.size()) + " does not match truncation size " +
                           std::to_string(trunc_.size()));
    }
  }

  static PowerSeries constant(const Truncation& trunc, cplx value) {
    PowerSeries s(trunc);
    s.coeffs_[0] = value;
    return s;
  }

  [[nodiscard]] int dim() const { return trunc_.dim(); }
  [[nodiscard]] const Truncation& trunc() const { return trunc_; }
  [[nodiscard]] std::span<const cplx> coeffs() const { return coeffs_; }
  [[nodiscard]] std::span<cplx> coeffs() { return coeffs_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  [[nodiscard]] std::size_t flat_index(const MultiIndex& alpha) const {
    if (!trunc_.contains(alpha)) {
      throw ParameterError("multi-index " + index_string(alpha) + " outside truncation");
    }
    std::size_t k = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      k = k * (static_cast<std::size_t>(trunc_.caps[j]) + 1) + static_cast<std::size_t>(alpha[j]);
    }
    return k;
  }

  [[nodiscard]] MultiIndex multi_index(std::size_t flat) const {
    MultiIndex alpha(trunc_.caps.size());
    for (std::size_t j = alpha.size(); j-- > 0;) {
      const auto ext = static_cast<std::size_t>(trunc_.caps[j]) + 1;
      alpha[j] = static_cast<int>(flat % ext);
      flat /= ext;
    }
    return alpha;
  }

  [[nodiscard]] cplx operator[](const MultiIndex& alpha) const { return coeffs_[flat_index(alpha)]; }
  cplx& operator[](const MultiIndex& alpha) { return coeffs_[flat_index(alpha)]; }

  // Coefficient at alpha, or 0 when alpha lies beyond the stored truncation.
  [[nodiscard]] cplx coeff_or_zero(const MultiIndex& alpha) const {
    return trunc_.contains(alpha) ? coeffs_[flat_index(alpha)] : cplx{0.0};
  }

 private:
  Truncation trunc_;
  std::vector<cplx> coeffs_;
};

// Calls fn(flat_index, alpha) for every multi-index of trunc in lexicographic order.
template <typename Fn>
void for_each_index(const Truncation& trunc, Fn&& fn) {
  MultiIndex alpha(trunc.caps.size(), 0);
  const std::size_t n = trunc.size();
  for (std::size_t k = 0; k < n; ++k) {
    fn(k, static_cast<const MultiIndex&>(alpha));
    for (std::size_t j = alpha.size(); j-- > 0;) {
      if (++alpha[j] <= trunc.caps[j]) break;
      alpha[j] = 0;
    }
  }
}

inline PowerSeries monomial(int d, const MultiIndex& alpha, const Truncation& trunc) {
  if (static_cast<int>(alpha.size()) != d || trunc.dim() != d) {
    throw DimensionError("monomial: index length and truncation must both equal d = " + std::to_string(d));
  }
  PowerSeries s(trunc);
  s[alpha] = 1.0;  // throws with the index report when alpha exceeds the caps
  return s;
}

// Copy of s on a smaller truncation.
inline PowerSeries restrict_to(const PowerSeries& s, const Truncation& trunc) {
  if (s.dim() != trunc.dim()) throw DimensionError("restrict_to: dimension mismatch");
  if (s.trunc() == trunc) return s;
  PowerSeries out(trunc);
  for_each_index(trunc, [&](std::size_t k, const MultiIndex& alpha) { out.coeffs()[k] = s.coeff_or_zero(alpha); });
  return out;
}

inline void require_same_dim(const PowerSeries& x, const PowerSeries& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(x.dim()) + " vs " +
                         std::to_string(y.dim()) + ")");
  }
}

inline PowerSeries add(const PowerSeries& x, const PowerSeries& y) {
  require_same_dim(x, y, "add");
  const Truncation t = min_truncation(x.trunc(), y.trunc());
  PowerSeries out = restrict_to(x, t);
  const PowerSeries yr = restrict_to(y, t);
  for (std::size_t k = 0; k < out.size(); ++k) out.coeffs()[k] += yr.coeffs()[k];
  return out;
}

inline PowerSeries scale(const PowerSeries& s, cplx lambda) {
  PowerSeries out = s;
  for (auto& c : out.coeffs()) c *= lambda;
  return out;
}

inline PowerSeries mul(const PowerSeries& x, const PowerSeries& y) {
  require_same_dim(x, y, "mul");
  const Truncation t = min_truncation(x.trunc(), y.trunc());
  const PowerSeries xr = restrict_to(x, t);
  const PowerSeries yr = restrict_to(y, t);
  PowerSeries out(t);
  const std::size_t n = t.size();
  const std::size_t d = t.caps.size();

  std::vector<MultiIndex> idx;
  idx.reserve(n);
  for_each_index(t, [&](std::size_t, const MultiIndex& a) { idx.push_back(a); });

  auto xc = xr.coeffs();
  auto yc = yr.coeffs();
  auto oc = out.coeffs();
  for (std::size_t i = 0; i < n; ++i) {
    if (xc[i] == cplx{0.0}) continue;
    const MultiIndex& a = idx[i];
    for (std::size_t k = 0; k < n; ++k) {
      if (yc[k] == cplx{0.0}) continue;
      const MultiIndex& b = idx[k];
      bool inside = true;
      for (std::size_t j = 0; j < d; ++j) {
        if (a[j] + b[j] > t.caps[j]) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      oc[i + k] += xc[i] * yc[k];  // flat indices add when no digit carries
    }
  }
  return out;
}

inline PowerSeries pow(const PowerSeries& s, int k) {
  if (k < 0) throw ParameterError("pow: negative exponent");
  PowerSeries result = PowerSeries::constant(s.trunc(), 1.0);
  PowerSeries base = s;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return result;
}

// Series in one variable with Taylor coefficients through degree n.
inline PowerSeries one_variable(std::vector<cplx> coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  return PowerSeries(Truncation({n}), std::move(coeffs));
}

// Embeds a one-variable series as a function of coordinate var of C^d.
inline PowerSeries lift(const PowerSeries& s, int var, int d, const Truncation& trunc) {
  if (s.dim() != 1) throw DimensionError("lift: source must be a one-variable series");
  if (var < 0 || var >= d) {
    throw ParameterError("lift: variable index " + std::to_string(var) + " out of range for d = " + std::to_string(d));
  }
  if (trunc.dim() != d) throw DimensionError("lift: truncation dimension differs from d");
  PowerSeries out(trunc);
  MultiIndex alpha(static_cast<std::size_t>(d), 0);
  const int top = std::min(trunc.caps[static_cast<std::size_t>(var)], s.trunc().caps[0]);
  for (int n = 0; n <= top; ++n) {
    alpha[static_cast<std::size_t>(var)] = n;
    out[alpha] = s.coeffs()[static_cast<std::size_t>(n)];
  }
  return out;
}

// Product of one-variable series, the j-th acting on variable j; trunc caps
// each factor at its own variable's cap.
inline PowerSeries tensor_product(const std::vector<PowerSeries>& factors, const Truncation& trunc) {
  if (static_cast<int>(factors.size()) != trunc.dim()) {
    throw DimensionError("tensor_product: need one factor per variable");
  }
  for (const auto& f : factors) {
    if (f.dim() != 1) throw DimensionError("tensor_product: factors must be one-variable series");
  }
  PowerSeries out(trunc);
  for_each_index(trunc, [&](std::size_t k, const MultiIndex& alpha) {
    cplx v{1.0};
    for (std::size_t j = 0; j < alpha.size() && v != cplx{0.0}; ++j) {
      const auto& f = factors[j];
      v *= alpha[j] <= f.trunc().caps[0] ? f.coeffs()[static_cast<std::size_t>(alpha[j])] : cplx{0.0};
    }
    out.coeffs()[k] = v;
  });
  return out;
}

namespace detail {

// Horner along variable `var`, recursing into the slices of the remaining ones.
inline cplx horner(const cplx* data, const std::vector<int>& caps, std::size_t var, std::span<const cplx> z,
                   std::size_t slab) {
  const std::size_t ext = static_cast<std::size_t>(caps[var]) + 1;
  const std::size_t sub = slab / ext;
  cplx acc{0.0};
  for (std::size_t n = ext; n-- > 0;) {
    const cplx inner = var + 1 == caps.size() ? data[n] : horner(data + n * sub, caps, var + 1, z, sub);
    acc = acc * z[var] + inner;
  }
  return acc;
}

}  // namespace detail

inline cplx eval(const PowerSeries& s, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != s.dim()) throw DimensionError("eval: point dimension differs from series");
  return detail::horner(s.coeffs().data(), s.trunc().caps, 0, z, s.size());
}

inline cplx eval(const PowerSeries& s, cplx x) { return eval(s, std::span<const cplx>(&x, 1)); }

// (1 - w x)^(-m) = sum_n C(n+m-1, n) w^n x^n through degree n_max, using the
// ratio c_{n+1} / c_n = w (n+m) / (n+1).
inline PowerSeries neg_binomial_series(cplx w, int m, int n_max) {
  if (m < 1) throw ParameterError("neg_binomial_series: exponent must be >= 1");
  if (n_max < 0) throw ParameterError("neg_binomial_series: negative degree");
  std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  for (int n = 0; n < n_max; ++n) {
    c[static_cast<std::size_t>(n) + 1] = c[static_cast<std::size_t>(n)] * w * (static_cast<double>(n + m) / (n + 1));
  }
  return one_variable(std::move(c));
}

// Taylor expansion of (a x + b) / (c x + d) about 0 through degree n_max.
inline PowerSeries lft_series(const LFT& phi, int n_max) {
  if (phi.d == cplx{0.0}) throw DomainError("lft_series: pole at the origin (d = 0)");
  if (n_max < 0) throw ParameterError("lft_series: negative degree");
  const cplx ratio = -phi.c / phi.d;
  std::vector<cplx> out(static_cast<std::size_t>(n_max) + 1);
  cplx geo = 1.0 / phi.d;  // coefficient of x^n in 1 / (c x + d)
  cplx prev{0.0};
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] = phi.b * geo + phi.a * prev;
    prev = geo;
    geo *= ratio;
  }
  return one_variable(std::move(out));
}

}  // namespace wco
