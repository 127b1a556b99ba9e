#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thinlayer/forms.hpp"

using namespace thinlayer;

namespace {

FormContext context(int nb, int nv, double eps) {
  BaseGrid2D b(1.0, 1.0, nb, nb);
  auto coeff = CoefficientFields::constant(b, -5.0, 0.2, 1.0, 0.5);
  for (int iy = 0; iy <= nb; ++iy)
    for (int ix = 0; ix <= nb; ++ix)
      if (b.x(ix) < 0.5) coeff.alpha.values[b.index(ix, iy)] = 2.0;
  return {b, SplitGrid::uniform(nv), coeff, eps};
}

LayerField smooth_u(const FormContext& c) {
  return LayerField::sample(c.base, c.vertical, [](double x, double y, double z, Side s) {
    const double h = std::cos(oracle::pi * x) * (1.0 + y * y);
    return s == Side::left ? h * std::cos(oracle::pi * (z + 1.0)) + 1.0 : 0.5 * h - std::cos(oracle::pi * (z - 1.0));
  });
}

LayerField smooth_v(const FormContext& c) {
  return LayerField::sample(c.base, c.vertical, [](double x, double y, double z, Side s) {
    return s == Side::left ? std::cos(2.0 * oracle::pi * y) * (1.0 + x) * std::cos(oracle::pi * z)
                           : x * x * (2.0 - x) * std::cos(oracle::pi * z);
  });
}

}  // namespace

TEST(Forms, GradientPartsAreSymmetricSurfaceIsNot) {
  auto c = context(6, 6, 0.5);
  const auto u = smooth_u(c);
  const auto v = smooth_v(c);
  const auto uv = form_parts(c, u, v);
  const auto vu = form_parts(c, v, u);
  EXPECT_NEAR(uv.gxy, vu.gxy, 1e-12);
  EXPECT_NEAR(uv.gz, vu.gz, 1e-12);
  EXPECT_GT(std::abs(uv.surface - vu.surface), 1e-6);
}

TEST(Forms, QuadraticImaginaryPartIsEpsIndependent) {
  auto c = context(5, 5, 1.0);
  ComplexLayerField u{smooth_u(c), smooth_v(c)};
  const auto a1 = form_a_eps(c, u);
  for (double eps : {0.5, 0.1, 0.01}) {
    c.eps = eps;
    const auto a = form_a_eps(c, u);
    EXPECT_EQ(a.imag(), a1.imag());
    EXPECT_GE(a.real(), a1.real());
  }
  EXPECT_NE(a1.imag(), 0.0);
}

TEST(Forms, QuadraticAgreesWithSesquilinear) {
  auto c = context(5, 5, 0.3);
  ComplexLayerField u{smooth_u(c), smooth_v(c)};
  const auto q = form_a_eps(c, u);
  const auto s = form_a_eps(c, u, u);
  EXPECT_NEAR(q.real(), s.real(), 1e-9 * std::abs(q.real()));
  EXPECT_NEAR(q.imag(), s.imag(), 1e-12);
}

TEST(Forms, DualityResidualConverges) {
  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    auto c = context(n, n, 0.5);
    const auto rep = duality_check(c, smooth_u(c), smooth_v(c));
    if (prev > 0.0) EXPECT_GT(oracle::order(prev, rep.residual), 1.0) << n;
    prev = rep.residual;
  }
}

TEST(Forms, LiftedFieldsReduceToTheLimitForm) {
  auto c = context(6, 4, 0.2);
  LimitState u{BaseField::sample(c.base, [](double x, double y) { return x + y * y; }),
               BaseField::sample(c.base, [](double x, double) { return std::cos(x); })};
  LimitState v{BaseField::sample(c.base, [](double, double y) { return 1.0 - y; }),
               BaseField::sample(c.base, [](double x, double y) { return x * y; })};
  const auto lu = lift(u, c.vertical);
  const auto lv = lift(v, c.vertical);
  const auto parts = form_parts(c, lu, lv);
  EXPECT_NEAR(parts.gz, 0.0, 1e-13);
  EXPECT_NEAR(form_a_eps(c, lu, lv), limit_form(c, u, v), 1e-12);
}

TEST(Forms, SectorialityCertifiedUniformlyInEps) {
  auto c = context(5, 5, 1.0);
  const auto rep = sectoriality_scan(c, 60, 17, {1.0, 0.5, 0.1});
  EXPECT_TRUE(rep.certified);
  EXPECT_TRUE(rep.eps_uniform);
  EXPECT_EQ(rep.samples, 60);
  EXPECT_EQ(rep.witness, -1);
  EXPECT_GT(rep.gamma, 0.0);
  ASSERT_EQ(rep.gamma_by_eps.size(), 3u);
}

TEST(Forms, SectoralityIsDeterministicInSeed) {
  auto c = context(4, 4, 1.0);
  const auto a = sectoriality_scan(c, 20, 5, {1.0, 0.5});
  const auto b = sectoriality_scan(c, 20, 5, {1.0, 0.5});
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_THROW(sectoriality_scan(c, 0, 5, {1.0}), ParameterError);
  EXPECT_THROW(sectoriality_scan(c, 5, 5, {}), ParameterError);
}

TEST(Forms, GridMismatchThrows) {
  auto c = context(4, 4, 1.0);
  LayerField other(c.base, SplitGrid::uniform(5), 1.0);
  EXPECT_THROW(form_parts(c, other, other), DimensionMismatch);
}
