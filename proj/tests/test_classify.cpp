#include <gtest/gtest.h>

#include "support.hpp"
#include "wco/classify.hpp"

using namespace wco;

namespace {

const SpaceParams kD1(1, {0});

}  // namespace

TEST(Classify, RealSymmetricExamples) {
  ClassifyOptions opt;
  opt.section = Truncation({8});
  const auto yes = classify_real_symmetric(real_symmetric_symbol(2.0, std::vector<cplx>{0.0}, std::vector<double>{0.5}, kD1), opt);
  EXPECT_EQ(yes.verdict, Verdict::certified_yes);
  ASSERT_TRUE(yes.section_defect.has_value());
  EXPECT_EQ(*yes.section_defect, 0.0);

  const auto imag_c = classify_real_symmetric(real_symmetric_form(cplx(0, 1), std::vector<cplx>{0.0}, std::vector<cplx>{0.5}, kD1));
  EXPECT_EQ(imag_c.verdict, Verdict::certified_no);
  EXPECT_TRUE(imag_c.failed("her-cond-1"));
  EXPECT_GT(imag_c.pointwise.max_residual, 1e-2);

  const auto boundary = classify_real_symmetric(real_symmetric_symbol(1.0, std::vector<cplx>{0.0}, std::vector<double>{1.0}, kD1));
  EXPECT_EQ(boundary.verdict, Verdict::certified_yes);
}

TEST(Classify, RealSymmetricFormMismatch) {
  // v non-identity
  const SpaceParams sp(2, {0, 0});
  SymbolPair s = real_symmetric_symbol(1.0, std::vector<cplx>{0.0, 0.0}, std::vector<double>{0.5, 0.3}, sp);
  std::swap(s.g.coords[0].var, s.g.coords[1].var);
  const auto r = classify_real_symmetric(s);
  EXPECT_EQ(r.verdict, Verdict::certified_no);
  EXPECT_TRUE(r.failed("g-var"));

  // f with the wrong kernel point
  SymbolPair t = real_symmetric_symbol(1.0, std::vector<cplx>{cplx(0.2, 0.1)}, std::vector<double>{0.3}, kD1);
  t.f.factors[0].w += 0.1;
  const auto rt = classify_real_symmetric(t);
  EXPECT_EQ(rt.verdict, Verdict::certified_no);
  EXPECT_TRUE(rt.failed("f-form"));
}

TEST(Classify, RealSymmetricPerturbations) {
  Rng rng(60);
  for (int i = 0; i < 20; ++i) {
    const auto sp = test::random_space(rng, 1);
    const auto r = test::draw_realsym(rng, 1, 0.6);
    // b off the real line
    const std::vector<cplx> bi{cplx(r.b[0], 0.05)};
    const auto rb = classify_real_symmetric(real_symmetric_form(r.c, r.a, bi, sp));
    EXPECT_EQ(rb.verdict, Verdict::certified_no);
    EXPECT_TRUE(rb.failed("her-cond-1"));
  }
  // her-cond-2: push b past the inequality
  const cplx a(0.3, 0.2);
  const double room = 1.0 - std::norm(a);
  double bmax = 0.0;
  for (double b = 0.0; b < 1.0; b += 1e-5) {
    if (std::abs(a * (b - std::norm(a) + 1.0)) + b <= room) bmax = b;
  }
  const SymbolPair s = real_symmetric_form(1.0, std::vector<cplx>{a}, std::vector<cplx>{bmax + 0.05}, kD1);
  const auto rs = classify_real_symmetric(s, {.plan = {}, .section = Truncation({6})});
  EXPECT_TRUE(rs.failed("her-cond-2"));
  EXPECT_TRUE(rs.failed("g-selfmap"));
  // the kernel identity itself still holds, so no certificate either way
  EXPECT_LT(rs.pointwise.max_residual, 1e-10);
  EXPECT_EQ(rs.verdict, Verdict::indeterminate);
  EXPECT_FALSE(rs.section_defect.has_value());
}

TEST(Classify, UnitaryExamples) {
  const auto triv = classify_unitary(unitary_symbol(1.0, std::vector<cplx>{1.0}, std::vector<cplx>{0.0}, std::vector<int>{0}, kD1));
  EXPECT_EQ(triv.verdict, Verdict::certified_yes);
  EXPECT_EQ(triv.pointwise.max_residual, 0.0);
  EXPECT_EQ(classify_unitary(involution_symbol(Point{0.4}, kD1)).verdict, Verdict::certified_yes);

  const SpaceParams mixed(2, {0, 1});
  const auto ce = classify_unitary(
      unitary_form(1.0, std::vector<cplx>{1.0, 1.0}, std::vector<cplx>{cplx(0.2, 0.1), cplx(-0.3, 0.2)}, std::vector<int>{1, 0}, mixed));
  EXPECT_EQ(ce.verdict, Verdict::certified_no);
  EXPECT_EQ(ce.failed_conditions(), std::vector<std::string>{"ell-compat"});
  EXPECT_GT(ce.pointwise.max_residual, 1e-4);
  EXPECT_FALSE(ce.notes.empty());

  const auto small_c = classify_unitary(unitary_form(0.9, std::vector<cplx>{1.0}, std::vector<cplx>{0.3}, std::vector<int>{0}, kD1));
  EXPECT_EQ(small_c.verdict, Verdict::certified_no);
  EXPECT_TRUE(small_c.failed("c-unimodular"));
}

TEST(Classify, UnitaryParameterRecovery) {
  Rng rng(61);
  for (int i = 0; i < 30; ++i) {
    const auto sp = test::random_space(rng, 1 + i % 2);
    const auto u = test::draw_unitary(rng, sp);
    const auto rep = classify_unitary(unitary_symbol(u.c, u.a, u.theta, u.phi, sp));
    EXPECT_EQ(rep.verdict, Verdict::certified_yes);
    const auto& p = rep.parameters;
    EXPECT_NEAR(p["c"]["re"].get<double>(), u.c.real(), 1e-12);
    EXPECT_NEAR(p["c"]["im"].get<double>(), u.c.imag(), 1e-12);
    for (int j = 0; j < sp.d; ++j) {
      EXPECT_NEAR(p["theta"][j]["re"].get<double>(), u.theta[static_cast<std::size_t>(j)].real(), 1e-12);
      EXPECT_NEAR(p["a"][j]["im"].get<double>(), u.a[static_cast<std::size_t>(j)].imag(), 1e-12);
      EXPECT_EQ(p["phi"][j].get<int>(), u.phi[static_cast<std::size_t>(j)] + 1);
    }
  }
}

TEST(Classify, CsymExamples) {
  const ConjugationParams u2(kD1, {}, {0}, {}, {1.0});
  const std::vector<CsymCoefficients> k{U2Coefficients{0.3, 0.2}};
  const auto s = csym_symbol(u2, k, 1.0);
  EXPECT_EQ(classify_csym(s, u2).verdict, Verdict::certified_yes);

  SymbolPair off = s;
  off.f.factors[0].w += 0.1;
  const auto r = classify_csym(off, u2);
  EXPECT_EQ(r.verdict, Verdict::certified_no);
  EXPECT_TRUE(r.failed("f-form"));
  EXPECT_GT(r.pointwise.max_residual, 1e-4);

  Rng rng(62);
  const auto d = test::draw_csym(rng, kD1, {test::Branch::u1_general});
  const auto rep = classify_csym(csym_symbol(d.cp, d.coeffs, d.c_tilde), d.cp);
  EXPECT_EQ(rep.verdict, Verdict::certified_yes);
  ASSERT_FALSE(rep.notes.empty());
  EXPECT_NE(rep.notes.front().find("p_kappa"), std::string::npos);

  EXPECT_THROW(classify_csym(s, ConjugationParams(SpaceParams(1, {2}), {}, {0}, {}, {1.0})), DimensionError);
}

TEST(Classify, CsymAffineU1Coordinate) {
  const cplx p(0.4, 0.2), A(0.3, 0.1);
  const ConjugationParams cp(kD1, {0}, {}, {p}, {});
  SymbolPair s = identity_symbol(kD1);
  s.g.coords[0].map = LFT{A, p * (1.0 - A), 0.0, 1.0};
  const auto w = csym_kernel_point(cp, s.g);
  s.f.factors.push_back({std::conj(w[0]), 2, 0});
  const auto rep = classify_csym(s, cp);
  EXPECT_EQ(rep.verdict, Verdict::certified_yes);
  EXPECT_LT(rep.pointwise.max_residual, 1e-10);

  s.g.coords[0].map.b += 0.05;
  s.f.factors[0].w = std::conj(csym_kernel_point(cp, s.g)[0]);
  const auto bad = classify_csym(s, cp);
  EXPECT_EQ(bad.verdict, Verdict::certified_no);
  EXPECT_TRUE(bad.failed("cond-202106030907-affine"));
}

TEST(Classify, CsymScalarInvariance) {
  Rng rng(63);
  for (int i = 0; i < 20; ++i) {
    const auto sp = test::random_space(rng, 1 + i % 2);
    const auto d = test::draw_csym(rng, sp);
    for (cplx lam : {cplx(0.0, 1.0), cplx(-2.5, 0.7)}) {
      const auto s = csym_symbol(d.cp, d.coeffs, d.c_tilde * lam);
      EXPECT_LT(csym_pointwise_defect(s, d.cp, {}).max_residual, 1e-10);
    }
    const auto r = test::draw_realsym(rng, sp.d);
    const auto rs = real_symmetric_symbol(r.c * -3.0, r.a, r.b, sp);
    EXPECT_LT(realsym_pointwise_defect(rs, {}).max_residual, 1e-10);
  }
}

TEST(Classify, CorollaryMapping) {
  const auto z = realsym_to_conjugation(2.0, std::vector<cplx>{0.0}, std::vector<double>{0.5}, kD1);
  EXPECT_EQ(z.cp.q_of(0), cplx(1.0));
  const auto& k0 = std::get<U2Coefficients>(z.coeffs[0]);
  EXPECT_EQ(k0.alpha, cplx(0.0));
  EXPECT_EQ(k0.beta, cplx(0.5));

  const cplx a(0.3, 0.4);
  const auto m = realsym_to_conjugation(1.0, std::vector<cplx>{a}, std::vector<double>{0.1}, kD1);
  EXPECT_NEAR(std::abs(m.cp.q_of(0)), 1.0, 1e-15);
  const auto& k1 = std::get<U2Coefficients>(m.coeffs[0]);
  EXPECT_NEAR(std::abs(k1.beta), 0.1, 1e-15);
  const auto s = csym_symbol(m.cp, m.coeffs, m.c_tilde);
  EXPECT_EQ(classify_csym(s, m.cp).verdict, Verdict::certified_yes);
  EXPECT_THROW(realsym_to_conjugation(1.0, std::vector<cplx>{0.5}, std::vector<double>{2.0}, kD1), ParameterError);
}

TEST(Classify, FunctionalEquationExamples) {
  const SamplePlan plan;
  FunctionalEquation a{EquationKind::A, real_symmetric_component(cplx(0.2, 0.3), 0.4)};
  EXPECT_LT(functional_equation_residual(a, plan).max_residual, 1e-12);
  a.psi = real_symmetric_component(cplx(0.2, 0.3), cplx(0, 0.5));
  EXPECT_GT(functional_equation_residual(a, plan).max_residual, 1e-3);
  a.psi = LFT::constant(0.4);
  EXPECT_EQ(functional_equation_residual(a, plan).max_residual, 0.0);

  const cplx th = std::polar(1.0, 0.7);
  const FunctionalEquation b{EquationKind::B, u2_component({cplx(0.2, 0.1), cplx(0.3, -0.2)}, th), th};
  EXPECT_LT(functional_equation_residual(b, plan).max_residual, 1e-12);
  EXPECT_THROW(functional_equation_residual(FunctionalEquation{EquationKind::B, LFT{}, 0.5}, plan), ParameterError);

  Rng rng(64);
  const cplx p = test::draw_p(rng);
  const FunctionalEquation c{EquationKind::C, u1_component(test::draw_u1_general(rng, p)), 1.0, p};
  EXPECT_LT(functional_equation_residual(c, plan).max_residual, 1e-12);
}

TEST(Classify, FunctionalEquationResamplesAtPoles) {
  // pole at x = 0.5 inside the sampling disk
  const FunctionalEquation a{EquationKind::A, LFT{1.0, 0.0, -2.0, 1.0}};
  SamplePlan plan;
  plan.count = 20;
  const auto r = functional_equation_residual(a, plan);
  EXPECT_EQ(r.samples, 20);
}
