#pragma once

// Seeded generators for feasible normal-form parameters, plus small
// independent oracles used across the test binaries.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wco/classify.hpp"
#include "wco/conjugation.hpp"
#include "wco/sampling.hpp"
#include "wco/symbols.hpp"

namespace wco::test {

inline SpaceParams random_space(Rng& rng, int d) {
  std::vector<int> ell(static_cast<std::size_t>(d));
  for (auto& l : ell) l = static_cast<int>(rng.uniform() * 3.0);
  return SpaceParams(d, ell);
}

inline PowerSeries random_polynomial(Rng& rng, int d, int degree, const Truncation& trunc) {
  PowerSeries h(trunc);
  for_each_index(trunc, [&](std::size_t k, const MultiIndex& a) {
    int total = 0;
    for (int x : a) total += x;
    if (total <= degree) h.coeffs()[k] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  });
  (void)d;
  return h;
}

// ---------------------------------------------------------------------------
// Real symmetric

struct RealSymDraw {
  double c;
  std::vector<cplx> a;
  std::vector<double> b;
};

// b real with |a(b - |a|^2 + 1)| + |b| <= 1 - |a|^2; b = 0 is always feasible.
inline double feasible_b(Rng& rng, cplx a) {
  const double room = 1.0 - std::norm(a);
  for (;;) {
    const double b = rng.uniform(-1.0, 1.0);
    if (std::abs(a * (b - std::norm(a) + 1.0)) + std::abs(b) <= room) return b;
  }
}

inline RealSymDraw draw_realsym(Rng& rng, int d, double a_max = 0.6) {
  RealSymDraw r;
  r.c = rng.uniform(-2.0, 2.0);
  for (int j = 0; j < d; ++j) {
    const cplx a = rng.uniform() < 0.15 ? cplx{0.0} : rng.in_disk(a_max);
    r.a.push_back(a);
    r.b.push_back(rng.uniform() < 0.1 ? 0.0 : feasible_b(rng, a));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Unitary

struct UnitaryDraw {
  cplx c;
  std::vector<cplx> a, theta;
  std::vector<int> phi;
};

// phi permutes only coordinates of equal weight.
inline UnitaryDraw draw_unitary(Rng& rng, const SpaceParams& sp, double theta_max = 0.8) {
  UnitaryDraw u;
  u.c = rng.on_circle();
  for (int j = 0; j < sp.d; ++j) {
    u.a.push_back(rng.on_circle());
    u.theta.push_back(rng.in_disk(theta_max));
    u.phi.push_back(j);
  }
  for (int j = sp.d - 1; j > 0; --j) {
    const int k = static_cast<int>(rng.uniform() * (j + 1));
    if (sp.weight(j) == sp.weight(k)) std::swap(u.phi[static_cast<std::size_t>(j)], u.phi[static_cast<std::size_t>(k)]);
  }
  return u;
}

// ---------------------------------------------------------------------------
// C-symmetric

enum class Branch { u1_constant, u1_general, u2_constant, u2_general };

// E from the U1 relation: (p - G|p|^2 + F|p|^2 - G F conj(p)) / conj(p).
inline cplx u1_E(cplx G, cplx F, cplx p) {
  const double pp = std::norm(p);
  return (p - G * pp + F * pp - G * F * std::conj(p)) / std::conj(p);
}

inline U1Coefficients draw_u1_general(Rng& rng, cplx p) {
  for (;;) {
    U1Coefficients k;
    k.G = rng.in_disk(1.0);
    do {
      k.F = rng.in_disk(3.0);
    } while (std::abs(k.F) <= 1.05);
    k.E = u1_E(k.G, k.F, p);
    if (std::abs(k.E) > 1e-3 && u1_inequality_residual(k) <= 0.0) return k;
  }
}

inline U2Coefficients draw_u2_general(Rng& rng) {
  for (;;) {
    U2Coefficients k{rng.in_disk(0.6), rng.in_disk(1.0)};
    if (std::abs(k.beta) > 1e-3 && u2_inequality_residual(k) <= 0.0) return k;
  }
}

inline cplx draw_p(Rng& rng) {
  for (;;) {
    const cplx p = rng.in_disk(0.8);
    if (std::abs(p) >= 0.1) return p;
  }
}

struct CsymDraw {
  ConjugationParams cp;
  std::vector<CsymCoefficients> coeffs;
  cplx c_tilde;
  std::vector<Branch> branches;
};

// Branches are chosen per coordinate; forced[j] overrides the random choice.
inline CsymDraw draw_csym(Rng& rng, const SpaceParams& sp, const std::vector<Branch>& forced = {}) {
  std::vector<Branch> br(static_cast<std::size_t>(sp.d));
  for (int j = 0; j < sp.d; ++j) {
    br[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j) < forced.size()
                                          ? forced[static_cast<std::size_t>(j)]
                                          : static_cast<Branch>(static_cast<int>(rng.uniform() * 4.0));
  }
  std::vector<int> u1, u2;
  std::vector<cplx> p, q;
  for (int j = 0; j < sp.d; ++j) {
    const Branch b = br[static_cast<std::size_t>(j)];
    if (b == Branch::u1_constant || b == Branch::u1_general) {
      u1.push_back(j);
      p.push_back(draw_p(rng));
    } else {
      u2.push_back(j);
      q.push_back(rng.on_circle());
    }
  }
  ConjugationParams cp(sp, u1, u2, p, q);
  std::vector<CsymCoefficients> coeffs;
  for (int j = 0; j < sp.d; ++j) {
    switch (br[static_cast<std::size_t>(j)]) {
      case Branch::u1_constant: coeffs.emplace_back(U1Coefficients{rng.in_disk(0.9), 0.0, 0.0}); break;
      case Branch::u1_general: coeffs.emplace_back(draw_u1_general(rng, cp.p_of(j))); break;
      case Branch::u2_constant: coeffs.emplace_back(U2Coefficients{rng.in_disk(0.9), 0.0}); break;
      case Branch::u2_general: coeffs.emplace_back(draw_u2_general(rng)); break;
    }
  }
  const cplx c_tilde(rng.uniform(-2, 2), rng.uniform(-2, 2));
  return {cp, coeffs, c_tilde, br};
}

// ---------------------------------------------------------------------------
// Oracles

// alpha! (ell+1)! / (alpha+ell+1)! through lgamma, independent of the product form.
inline double norm_sq_oracle(int alpha, int ell) {
  return std::exp(std::lgamma(alpha + 1.0) + std::lgamma(ell + 2.0) - std::lgamma(alpha + ell + 2.0));
}

// Coefficient n of (1 - w x)^-m: binom(n + m - 1, n) w^n via lgamma.
inline cplx neg_binomial_oracle(cplx w, int m, int n) {
  const double binom = std::exp(std::lgamma(n + m + 0.0) - std::lgamma(n + 1.0) - std::lgamma(m + 0.0));
  return binom * std::pow(w, n);
}

// max |phi| over n boundary samples refined by golden-section search around
// the best sample; infinity if the pole lies in the closed disk.
inline double boundary_sup(const LFT& phi, int n = 4096) {
  if (phi.c != cplx{0.0} && std::abs(phi.d) <= std::abs(phi.c)) return INFINITY;
  auto val = [&](double t) { return std::abs(eval(phi, std::polar(1.0, t))); };
  double best = -1.0, bt = 0.0;
  const double h = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    const double v = val(i * h);
    if (v > best) {
      best = v;
      bt = i * h;
    }
  }
  double lo = bt - h, hi = bt + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    if (val(m1) > val(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::max(best, val(0.5 * (lo + hi)));
}

}  // namespace wco::test
