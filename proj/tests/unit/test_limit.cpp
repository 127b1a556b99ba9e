#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thinlayer/limit.hpp"

using namespace thinlayer;

namespace {

LimitState flat(const BaseGrid2D& g, double a, double b) {
  return {BaseField::constant(g, a), BaseField::constant(g, b)};
}

}  // namespace

TEST(Coupling, NodewiseTwoByTwoExponential) {
  BaseGrid2D g(1.0, 1.0, 2, 2);
  auto coeff = CoefficientFields::constant(g, 0.3, 0.1, 2.0, 0.5);
  coeff.alpha.values[4] = 0.0;
  const auto out = coupling_step(coeff, flat(g, 1.0, -2.0), 0.7);
  for (int b = 0; b < 9; ++b) {
    Matrix m(2, 2);
    m << -coeff.alpha.values[b] - 0.3, coeff.alpha.values[b], 0.5, -0.5 - 0.1;
    const Vector ref = oracle::expm_taylor(m * 0.7) * Eigen::Vector2d(1.0, -2.0);
    EXPECT_NEAR(out.u_minus.values[b], ref[0], 1e-13);
    EXPECT_NEAR(out.u_plus.values[b], ref[1], 1e-13);
  }
}

TEST(LimitEvolve, FlatDataFollowsTheTwoStateChain) {
  BaseGrid2D g(1.0, 1.0, 4, 4);
  LimitGenerator gen(g, CoefficientFields::constant(g, 0.0, 0.0, 0.8, 0.3));
  const auto s = limit_evolve(gen, flat(g, 1.0, 0.0), 0.5, 0.05);
  const Eigen::Matrix2d e = expm_B({0.8, 0.3}, 0.5);
  EXPECT_NEAR(s.u_minus.values[7], e(0, 0), 1e-13);
  EXPECT_NEAR(s.u_plus.values[7], e(1, 0), 1e-13);
}

TEST(LimitEvolve, MatchesDenseExponentialOfTheBlockGenerator) {
  BaseGrid2D g(1.0, 1.0, 4, 3);
  auto coeff = CoefficientFields::constant(g, 0.2, 0.0, 1.0, 0.5);
  for (int i = 0; i < 20; ++i) coeff.beta.values[i] = 0.5 + 0.1 * i;
  LimitGenerator gen(g, coeff);
  LimitState s0{BaseField::sample(g, [](double x, double y) { return std::cos(3 * x) + y; }),
                BaseField::sample(g, [](double x, double) { return x * x; })};
  const Matrix lap = Matrix(gen.lap.rows);
  const int n = 20;
  Matrix big = Matrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = lap;
  big.bottomRightCorner(n, n) = lap;
  for (int b = 0; b < n; ++b) {
    const double a = coeff.alpha.values[b], be = coeff.beta.values[b];
    big(b, b) += -a - coeff.c_minus.values[b];
    big(b, n + b) += a;
    big(n + b, b) += be;
    big(n + b, n + b) += -be - coeff.c_plus.values[b];
  }
  Vector v0(2 * n);
  v0 << s0.u_minus.values, s0.u_plus.values;
  const Vector ref = oracle::expm_taylor(big * 0.3) * v0;
  auto err = [&](double dt) {
    const auto s = limit_evolve(gen, s0, 0.3, dt, ReactionTerm::zero(), {HorizontalScheme::exact});
    Vector v(2 * n);
    v << s.u_minus.values, s.u_plus.values;
    return (v - ref).cwiseAbs().maxCoeff();
  };
  EXPECT_LT(err(0.01), 1e-4);
  EXPECT_GT(oracle::order(err(0.02), err(0.01)), 1.8);
}

TEST(LimitEvolve, LinearReactionScales) {
  BaseGrid2D g(1.0, 1.0, 3, 3);
  LimitGenerator gen(g, CoefficientFields::constant(g, 0.0, 0.0, 1.0, 2.0));
  LimitState s0{BaseField::sample(g, [](double x, double) { return x; }),
                BaseField::sample(g, [](double, double y) { return 1 - y; })};
  const auto lin = limit_evolve(gen, s0, 0.4, 0.02);
  const auto dec = limit_evolve(gen, s0, 0.4, 0.02, ReactionTerm::linear(-1.0));
  EXPECT_LT((dec.u_minus.values - std::exp(-0.4) * lin.u_minus.values).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Compare, GapShrinksWithEps) {
  BaseGrid2D g(1.0, 1.0, 6, 6);
  SplitGrid v(8, 8);
  MembraneParams prm;
  prm.p = 0.3;
  prm.q = 0.6;
  CompareConfig cfg{g, v, prm, CoefficientFields::constant(g, 0.0, 0.0, 1.0, 0.5)};
  auto u0 = LayerField::sample(g, v, [](double x, double, double z, Side s) {
    return s == Side::left ? 1.0 + x * z : std::cos(z);
  });
  const auto rows = compare_full_vs_limit(cfg, u0, 0.2, {0.4, 0.2, 0.1});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].sup_gap, rows[i - 1].sup_gap);
    EXPECT_LT(rows[i].l2_gap, rows[i - 1].l2_gap);
    EXPECT_LE(rows[i].projected_gap, rows[i].sup_gap * 1.0000001);
  }
}

TEST(Compare, ConfigurationErrors) {
  BaseGrid2D g(1.0, 1.0, 2, 2);
  SplitGrid v(2, 2);
  CompareConfig cfg{g, v, MembraneParams{}, CoefficientFields::constant(g, 0.0, 0.0, 1.0, 1.0)};
  EXPECT_THROW(compare_full_vs_limit(cfg, LayerField(g, SplitGrid(3, 3), 1.0), 0.1, {0.5}), ConfigError);
  cfg.t_min = 0.5;
  EXPECT_THROW(compare_full_vs_limit(cfg, LayerField(g, v, 1.0), 0.1, {0.5}), ConfigError);
}
