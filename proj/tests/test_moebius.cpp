#include <gtest/gtest.h>

#include "support.hpp"
#include "wco/moebius.hpp"

using namespace wco;

TEST(Moebius, EvalAndDerivativeMatchDirectFormulas) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const LFT phi{rng.in_disk(2), rng.in_disk(2), rng.in_disk(0.5), cplx(1.0) + rng.in_disk(0.2)};
    const cplx x = rng.in_disk(0.9);
    const cplx v = (phi.a * x + phi.b) / (phi.c * x + phi.d);
    EXPECT_LT(std::abs(eval(phi, x) - v), 1e-13);
    const double h = 1e-6;
    const cplx fd = (eval(phi, x + h) - eval(phi, x - h)) / (2 * h);
    EXPECT_LT(std::abs(derivative_at(phi, x) - fd), 1e-6);
  }
}

TEST(Moebius, PoleThrowsDomainError) {
  const LFT phi{1.0, 0.0, 1.0, -0.5};
  EXPECT_THROW(eval(phi, 0.5), DomainError);
  EXPECT_THROW(derivative_at(phi, 0.5), DomainError);
}

TEST(Moebius, ComposeAndInverse) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const LFT f{rng.in_disk(1), rng.in_disk(1), rng.in_disk(0.3), 1.0};
    const LFT g{rng.in_disk(1), rng.in_disk(1), rng.in_disk(0.3), 1.0};
    const cplx x = rng.in_disk(0.5);
    EXPECT_LT(std::abs(eval(compose(f, g), x) - eval(f, eval(g, x))), 1e-12);
    if (!f.is_constant()) {
      EXPECT_TRUE(projectively_equal(compose(f, inverse(f)), LFT::identity()));
    }
  }
  EXPECT_THROW(inverse(LFT::constant(0.3)), ParameterError);
}

TEST(Moebius, ProjectiveEquality) {
  const LFT f{1.0, 2.0, 3.0, 4.0};
  const LFT g{cplx(0, 2), cplx(0, 4), cplx(0, 6), cplx(0, 8)};
  EXPECT_TRUE(projectively_equal(f, g));
  EXPECT_FALSE(projectively_equal(f, LFT{1.0, 2.0, 3.0, 4.1}));
}

TEST(Moebius, SelfMapExamples) {
  EXPECT_FALSE(is_self_map(LFT{2.0, 0.0, 0.0, 1.0}).is_self_map);  // 2z
  EXPECT_TRUE(is_self_map(LFT{0.5, 0.0, 0.0, 1.0}).is_self_map);
  const auto om = is_self_map(omega_p(0.5));
  EXPECT_TRUE(om.is_self_map);
  EXPECT_NEAR(om.margin, 0.0, 1e-15);
  // constants: inside accepted, unimodular rejected
  EXPECT_TRUE(is_self_map(LFT::constant(0.9)).is_self_map);
  EXPECT_FALSE(is_self_map(LFT::constant(1.0)).is_self_map);
  EXPECT_THROW(is_self_map(LFT{1.0, 1.0, 0.0, 0.0}), ParameterError);
}

// omega_p itself is not an involution (the rotation p-bar/p gets in the way);
// x -> conj(omega_p(x)) is.
TEST(Moebius, ConjugatedOmegaIsInvolution) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const cplx p = test::draw_p(rng);
    const LFT w = omega_p(p);
    EXPECT_LT(std::abs(eval(w, p)), 1e-15);
    const cplx x = rng.in_disk(0.9);
    EXPECT_LT(std::abs(std::conj(eval(w, std::conj(eval(w, x)))) - x), 1e-13);
  }
  EXPECT_THROW(omega_p(0.0), ParameterError);
  EXPECT_THROW(omega_p(1.0), ParameterError);
}

TEST(Moebius, SelfMapCriterionAgreesWithBoundarySampling) {
  Rng rng(4);
  int checked = 0;
  while (checked < 300) {
    const LFT phi{rng.in_disk(1.2), rng.in_disk(1.2), rng.in_disk(0.8), 1.0};
    const auto v = is_self_map(phi);
    if (std::abs(v.margin) <= 1e-6) continue;
    EXPECT_EQ(v.is_self_map, test::boundary_sup(phi) <= 1.0) << "margin " << v.margin;
    ++checked;
  }
}
