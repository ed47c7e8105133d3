#pragma once

// The antilinear conjugations
//     (C h)(z) = theta(z) * conj(h(conj(omega(z))))
// built from a partition {U1, U2} of the coordinates: on U1 coordinate j,
// omega_j is the involutive automorphism vanishing at p_j and theta carries the
// factor (1 - |p_j|^2)^(1 + ell_j/2) / (1 - conj(p_j) z_j)^(ell_j + 2); on U2
// coordinate j, omega_j(z) = q_j z with |q_j| = 1 and theta is trivial.
//
// On Taylor coefficients, C h = theta * sum_alpha conj(h_alpha) omega^alpha,
// which is a separable linear map per variable applied to conj(h). U2-only
// conjugations preserve degree and are exact on truncated series; U1
// coordinates spread degree, so results on U1 carry a truncation tail.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wco/bergman.hpp"
#include "wco/moebius.hpp"
#include "wco/series.hpp"
#include "wco/types.hpp"

namespace wco {

class ConjugationParams {
 public:
  ConjugationParams() = default;

  // U1 / U2 hold 0-based coordinate indices; p is aligned with U1, q with U2.
  ConjugationParams(SpaceParams sp, std::vector<int> u1, std::vector<int> u2, std::vector<cplx> p, std::vector<cplx> q)
      : sp_(std::move(sp)), u1_(std::move(u1)), u2_(std::move(u2)), p_(std::move(p)), q_(std::move(q)) {
    validate();
  }

  [[nodiscard]] const SpaceParams& space() const { return sp_; }
  [[nodiscard]] int dim() const { return sp_.d; }
  [[nodiscard]] const std::vector<int>& u1() const { return u1_; }
  [[nodiscard]] const std::vector<int>& u2() const { return u2_; }
  [[nodiscard]] const std::vector<cplx>& p() const { return p_; }
  [[nodiscard]] const std::vector<cplx>& q() const { return q_; }

  [[nodiscard]] bool in_u1(int j) const { return slot_[static_cast<std::size_t>(j)] >= 0; }
  // p_j for j in U1.
  [[nodiscard]] cplx p_of(int j) const { return p_[static_cast<std::size_t>(slot_[static_cast<std::size_t>(j)])]; }
  // q_j for j in U2.
  [[nodiscard]] cplx q_of(int j) const { return q_[static_cast<std::size_t>(-slot_[static_cast<std::size_t>(j)] - 1)]; }

  // omega_j as a linear fractional map.
  [[nodiscard]] LFT omega_lft(int j) const {
    if (in_u1(j)) return omega_p(p_of(j));
    return {q_of(j), cplx{0.0}, cplx{0.0}, cplx{1.0}};
  }

  // The point r with r_j = p_j on U1 and 0 on U2.
  [[nodiscard]] Point reference_point() const {
    Point r(static_cast<std::size_t>(sp_.d), cplx{0.0});
    for (std::size_t k = 0; k < u1_.size(); ++k) r[static_cast<std::size_t>(u1_[k])] = p_[k];
    return r;
  }

 private:
  void validate() {
    sp_.validate();
    const int d = sp_.d;
    if (u1_.size() != p_.size()) throw ParameterError("conjugation: |U1| and the length of p differ");
    if (u2_.size() != q_.size()) throw ParameterError("conjugation: |U2| and the length of q differ");
    slot_.assign(static_cast<std::size_t>(d), 0);
    std::vector<int> seen(static_cast<std::size_t>(d), 0);
    auto mark = [&](int j) {
      if (j < 0 || j >= d) throw ParameterError("conjugation: coordinate index " + std::to_string(j + 1) + " out of range");
      if (seen[static_cast<std::size_t>(j)]++) {
        throw ParameterError("conjugation: coordinate " + std::to_string(j + 1) + " listed twice in U1/U2");
      }
    };
    for (std::size_t k = 0; k < u1_.size(); ++k) {
      mark(u1_[k]);
      slot_[static_cast<std::size_t>(u1_[k])] = static_cast<int>(k);
      const double r = std::abs(p_[k]);
      if (!(r > 0.0) || !(r < 1.0)) {
        throw ParameterError("conjugation: p entries need 0 < |p| < 1, got " + to_string(p_[k]));
      }
    }
    for (std::size_t k = 0; k < u2_.size(); ++k) {
      mark(u2_[k]);
      slot_[static_cast<std::size_t>(u2_[k])] = -static_cast<int>(k) - 1;
      if (std::abs(std::abs(q_[k]) - 1.0) > 1e-12) {
        throw ParameterError("conjugation: q entries must be unimodular, got " + to_string(q_[k]));
      }
    }
    for (int j = 0; j < d; ++j) {
      if (!seen[static_cast<std::size_t>(j)]) {
        throw ParameterError("conjugation: U1 and U2 do not cover coordinate " + std::to_string(j + 1));
      }
    }
  }

  SpaceParams sp_;
  std::vector<int> u1_, u2_;
  std::vector<cplx> p_, q_;
  std::vector<int> slot_;  // >= 0: index into p; < 0: -(index into q) - 1
};

// (1 - |p|^2)^(1 + ell/2), a positive real.
inline double theta_constant(cplx p, int ell) {
  return std::exp((1.0 + 0.5 * ell) * std::log1p(-std::norm(p)));
}

inline cplx theta_weight_eval(const ConjugationParams& cp, std::span<const cplx> z) {
  require_in_polydisk(z, cp.dim(), "theta_weight_eval");
  cplx v{1.0};
  for (int j : cp.u1()) {
    const cplx p = cp.p_of(j);
    const int l = cp.space().weight(j);
    v *= theta_constant(p, l) / std::pow(1.0 - std::conj(p) * z[static_cast<std::size_t>(j)], l + 2);
  }
  return v;
}

inline Point omega_eval(const ConjugationParams& cp, std::span<const cplx> z) {
  require_in_polydisk(z, cp.dim(), "omega_eval");
  Point w(z.size());
  for (int j = 0; j < cp.dim(); ++j) w[static_cast<std::size_t>(j)] = eval(cp.omega_lft(j), z[static_cast<std::size_t>(j)]);
  return w;
}

// conj(omega(z)), the point whose kernel C K_z is proportional to.
inline Point conj_omega(const ConjugationParams& cp, std::span<const cplx> z) {
  Point w = omega_eval(cp, z);
  for (auto& x : w) x = std::conj(x);
  return w;
}

struct ConjugationResult {
  PowerSeries series;
  // Largest coefficient magnitude on the outer shell of the output truncation
  // (some alpha_j at its cap); zero for U2-only conjugations, which are exact.
  double tail_estimate = 0.0;
};

namespace detail {

// out[beta] = sum_alpha in[alpha] prod_j maps[j][alpha_j][beta_j].
inline PowerSeries separable_transform(const PowerSeries& in, const std::vector<std::vector<std::vector<cplx>>>& maps,
                                       const Truncation& out_trunc) {
  const int d = in.dim();
  std::vector<std::size_t> ext_in(static_cast<std::size_t>(d)), ext_out(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    ext_in[static_cast<std::size_t>(j)] = static_cast<std::size_t>(in.trunc().caps[static_cast<std::size_t>(j)]) + 1;
    ext_out[static_cast<std::size_t>(j)] = static_cast<std::size_t>(out_trunc.caps[static_cast<std::size_t>(j)]) + 1;
  }
  std::vector<cplx> cur(in.coeffs().begin(), in.coeffs().end());
  // Layout after step j: out extents for variables < j, in extents for >= j.
  for (int j = 0; j < d; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    std::size_t lead = 1;
    for (std::size_t i = 0; i < jj; ++i) lead *= ext_out[i];
    std::size_t trail = 1;
    for (std::size_t i = jj + 1; i < static_cast<std::size_t>(d); ++i) trail *= ext_in[i];
    std::vector<cplx> next(lead * ext_out[jj] * trail, cplx{0.0});
    const auto& m = maps[jj];
    for (std::size_t L = 0; L < lead; ++L) {
      for (std::size_t a = 0; a < ext_in[jj]; ++a) {
        const cplx* src = &cur[(L * ext_in[jj] + a) * trail];
        for (std::size_t b = 0; b < ext_out[jj]; ++b) {
          const cplx w = m[a][b];
          if (w == cplx{0.0}) continue;
          cplx* dst = &next[(L * ext_out[jj] + b) * trail];
          for (std::size_t t = 0; t < trail; ++t) dst[t] += w * src[t];
        }
      }
    }
    cur = std::move(next);
  }
  return PowerSeries(out_trunc, std::move(cur));
}

}  // namespace detail

// Action of C on a truncated series; the output is truncated to out_trunc.
inline ConjugationResult apply(const ConjugationParams& cp, const PowerSeries& h, const Truncation& out_trunc) {
  if (h.dim() != cp.dim() || out_trunc.dim() != cp.dim()) throw DimensionError("conjugation apply: dimension mismatch");
  std::vector<std::vector<std::vector<cplx>>> maps(static_cast<std::size_t>(cp.dim()));
  for (int j = 0; j < cp.dim(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const int cap_in = h.trunc().caps[jj];
    const int cap_out = out_trunc.caps[jj];
    auto& m = maps[jj];
    m.assign(static_cast<std::size_t>(cap_in) + 1, std::vector<cplx>(static_cast<std::size_t>(cap_out) + 1, cplx{0.0}));
    if (!cp.in_u1(j)) {
      const cplx q = cp.q_of(j);
      cplx qa{1.0};
      for (int a = 0; a <= std::min(cap_in, cap_out); ++a) {
        m[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = qa;
        qa *= q;
      }
      continue;
    }
    const cplx p = cp.p_of(j);
    const int l = cp.space().weight(j);
    PowerSeries row = scale(neg_binomial_series(std::conj(p), l + 2, cap_out), theta_constant(p, l));
    const PowerSeries om = lft_series(omega_p(p), cap_out);
    for (int a = 0; a <= cap_in; ++a) {
      for (int b = 0; b <= cap_out; ++b) m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = row.coeffs()[static_cast<std::size_t>(b)];
      row = mul(row, om);
    }
  }
  PowerSeries conj_h = h;
  for (auto& c : conj_h.coeffs()) c = std::conj(c);

  ConjugationResult res{detail::separable_transform(conj_h, maps, out_trunc), 0.0};
  if (!cp.u1().empty()) {
    for_each_index(out_trunc, [&](std::size_t k, const MultiIndex& a) {
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == out_trunc.caps[j]) {
          res.tail_estimate = std::max(res.tail_estimate, std::abs(res.series.coeffs()[k]));
          break;
        }
      }
    });
  }
  return res;
}

inline ConjugationResult apply(const ConjugationParams& cp, const PowerSeries& h) { return apply(cp, h, h.trunc()); }

struct KernelImage {
  cplx scalar;  // theta(z), not conjugated
  Point point;  // conj(omega(z))
};

// C K_z = theta(z) K_{conj(omega(z))}.
inline KernelImage kernel_image(const ConjugationParams& cp, std::span<const cplx> z) {
  return {theta_weight_eval(cp, z), conj_omega(cp, z)};
}

}  // namespace wco
