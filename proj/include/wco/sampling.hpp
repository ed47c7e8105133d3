#pragma once

// Seeded sample plans for the pointwise defect functionals.
//
// Uniform doubles are taken from the top 53 bits of std::mt19937_64, whose
// output sequence is fixed by the standard, so a plan yields the same points
// on every conforming platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wco/types.hpp"

namespace wco {

struct SamplePlan {
  int count = 100;
  double radius = 0.8;
  std::uint64_t seed = 42;

  void validate() const {
    if (count < 1) throw ParameterError("sample plan: count must be >= 1");
    if (!(radius > 0.0) || !(radius <= 0.9)) {
      throw ParameterError("sample plan: radius must lie in (0, 0.9], got " + std::to_string(radius));
    }
  }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in the disk of the given radius (area measure).
  cplx in_disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    const double t = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, t);
  }

  cplx on_circle() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

  Point in_polydisk(int d, double radius) {
    Point z(static_cast<std::size_t>(d));
    for (auto& x : z) x = in_disk(radius);
    return z;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct SamplePair {
  Point z;
  Point u;
};

// count pairs (z, u) in the radius-polydisk, drawn sequentially from the seed.
inline std::vector<SamplePair> sample_pairs(const SamplePlan& plan, int d) {
  plan.validate();
  Rng rng(plan.seed);
  std::vector<SamplePair> out;
  out.reserve(static_cast<std::size_t>(plan.count));
  for (int i = 0; i < plan.count; ++i) {
    Point z = rng.in_polydisk(d, plan.radius);
    Point u = rng.in_polydisk(d, plan.radius);
    out.push_back({std::move(z), std::move(u)});
  }
  return out;
}

}  // namespace wco
