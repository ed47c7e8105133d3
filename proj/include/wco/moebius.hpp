#pragma once

// Linear fractional transforms x -> (a x + b) / (c x + d) on the complex plane.
//
// Maps are stored unnormalized; two coefficient vectors describe the same map
// exactly when they are proportional, so equality is a rank-one test rather
// than a coefficient comparison. A map with ad - bc = 0 (and c, d not both 0)
// is the constant b/d (or a/c); those are admitted because the constant-map
// branches of the symmetric normal forms need them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "wco/types.hpp"

namespace wco {

struct LFT {
  cplx a{1.0};
  cplx b{0.0};
  cplx c{0.0};
  cplx d{1.0};

  static LFT identity() { return {}; }
  static LFT constant(cplx k) { return {cplx{0.0}, k, cplx{0.0}, cplx{1.0}}; }

  [[nodiscard]] cplx det() const { return a * d - b * c; }

  // Scale-aware degeneracy test: |ad - bc| relative to the coefficient size.
  [[nodiscard]] bool is_constant(double tol = 1e-14) const {
    const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    return std::abs(det()) <= tol * s * s;
  }

  [[nodiscard]] bool is_affine(double tol = 1e-14) const {
    return std::abs(c) <= tol * std::abs(d);
  }
};

inline void require_wellformed(const LFT& phi) {
  if (phi.c == cplx{0.0} && phi.d == cplx{0.0}) {
    throw ParameterError("LFT with c = d = 0 is undefined everywhere");
  }
}

inline cplx eval(const LFT& phi, cplx x) {
  const cplx den = phi.c * x + phi.d;
  if (den == cplx{0.0}) {
    throw DomainError("LFT pole hit at x = " + to_string(x));
  }
  return (phi.a * x + phi.b) / den;
}

inline cplx derivative_at(const LFT& phi, cplx x) {
  const cplx den = phi.c * x + phi.d;
  if (den == cplx{0.0}) {
    throw DomainError("LFT pole hit at x = " + to_string(x));
  }
  return phi.det() / (den * den);
}

// outer(inner(x)), i.e. the matrix product [outer] * [inner].
inline LFT compose(const LFT& outer, const LFT& inner) {
  return {outer.a * inner.a + outer.b * inner.c, outer.a * inner.b + outer.b * inner.d,
          outer.c * inner.a + outer.d * inner.c, outer.c * inner.b + outer.d * inner.d};
}

inline LFT inverse(const LFT& phi) {
  if (phi.is_constant()) {
    throw ParameterError("constant LFT has no inverse");
  }
  return {phi.d, -phi.b, -phi.c, phi.a};
}

// Rank-one test on the coefficient vectors: every 2x2 minor of
// [[a b c d], [a' b' c' d']] must vanish relative to the vector norms.
inline bool projectively_equal(const LFT& x, const LFT& y, double tol = 1e-10) {
  const cplx u[4] = {x.a, x.b, x.c, x.d};
  const cplx v[4] = {y.a, y.b, y.c, y.d};
  double nu = 0.0, nv = 0.0;
  for (int i = 0; i < 4; ++i) {
    nu = std::max(nu, std::abs(u[i]));
    nv = std::max(nv, std::abs(v[i]));
  }
  if (nu == 0.0 || nv == 0.0) return nu == nv;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (std::abs(u[i] * v[j] - u[j] * v[i]) > tol * nu * nv) return false;
    }
  }
  return true;
}

struct SelfMapVerdict {
  bool is_self_map = false;
  double margin = 0.0;  // (|d|^2 - |c|^2) - (|b conj(d) - a conj(c)| + |ad - bc|)
};

inline constexpr double kSelfMapSlack = 1e-12;

// Exact criterion for x -> (ax+b)/(cx+d) to map the unit disk into itself.
// Boundary cases (automorphisms) have margin 0 and are accepted within slack.
// Constant maps need a strictly positive margin: a unimodular constant does
// not land in the open disk.
inline SelfMapVerdict is_self_map(const LFT& phi) {
  require_wellformed(phi);
  const double rhs = std::norm(phi.d) - std::norm(phi.c);
  const double lhs = std::abs(phi.b * std::conj(phi.d) - phi.a * std::conj(phi.c)) + std::abs(phi.det());
  SelfMapVerdict v;
  v.margin = rhs - lhs;
  v.is_self_map = phi.is_constant() ? v.margin > 0.0 : v.margin >= -kSelfMapSlack;
  return v;
}

// z -> (conj(p)/p) (p - z) / (1 - conj(p) z), the involutive automorphism
// vanishing at p.
inline LFT omega_p(cplx p) {
  const double r = std::abs(p);
  if (!(r > 0.0) || !(r < 1.0)) {
    throw ParameterError("omega_p requires 0 < |p| < 1, got p = " + to_string(p));
  }
  const cplx pb = std::conj(p);
  return {-pb / p, pb, -pb, cplx{1.0}};
}

}  // namespace wco
