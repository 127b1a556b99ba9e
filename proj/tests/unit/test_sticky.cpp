#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "thinlayer/sticky.hpp"

using namespace thinlayer;

namespace {

const double kR[] = {0.0, 0.25, 0.5, 0.75, 1.0};

GridFunction smooth_g(const IntervalGrid& g) {
  return GridFunction::sample(g, [](double x) { return std::exp(-x) * std::cos(2.0 * x) + x * x; });
}

double sup_gap(const GridFunction& a, const GridFunction& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(StickyOperator, MetzlerConservative) {
  for (double r : kR) {
    auto op = assemble_sticky(r, IntervalGrid(0.0, 1.0, 25));
    const SparseMatrix a = op.matrix();
    EXPECT_TRUE(is_metzler(a)) << "r=" << r;
    EXPECT_LT(max_abs_row_sum(a), 1e-9) << "r=" << r;
  }
}

TEST(StickyOperator, TrapRowIsZero) {
  auto op = assemble_sticky(1.0, IntervalGrid(0.0, 1.0, 10));
  const Matrix a = Matrix(op.matrix());
  EXPECT_EQ(a.row(0).cwiseAbs().sum(), 0.0);
}

TEST(StickyOperator, DetailedBalanceWithInvariantWeights) {
  for (double r : {0.0, 0.3, 0.8}) {
    auto op = assemble_sticky(r, IntervalGrid(0.0, 1.0, 16));
    const Matrix a = Matrix(op.matrix());
    const Vector w = op.invariant_weights();
    EXPECT_NEAR(w.sum(), 1.0, 1e-13);
    const Matrix wa = w.asDiagonal() * a;
    EXPECT_LT((wa - wa.transpose()).cwiseAbs().maxCoeff(), 1e-9 * a.cwiseAbs().maxCoeff());
    EXPECT_LT((w.transpose() * a).cwiseAbs().maxCoeff(), 1e-9 * a.cwiseAbs().maxCoeff());
  }
}

TEST(StickyOperator, LeftSideMirrorsRight) {
  auto right = assemble_sticky(0.4, IntervalGrid(0.0, 1.0, 12));
  auto left = assemble_sticky(0.4, IntervalGrid(-1.0, 0.0, 12), Side::left);
  EXPECT_EQ(left.sticky_index(), 12);
  const Matrix a = Matrix(right.matrix());
  const Matrix b = Matrix(left.matrix());
  EXPECT_LT((b - a.reverse()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(StickyOperator, RejectsBadR) {
  EXPECT_THROW(assemble_sticky(1.2, IntervalGrid(0, 1, 4)), ParameterError);
  EXPECT_THROW(assemble_sticky(-0.1, IntervalGrid(0, 1, 4)), ParameterError);
}

TEST(ClosedForm, MatchesHandSolvedCosineResolvent) {
  IntervalGrid g(0.0, 1.0, 800);
  for (double r : kR)
    for (double lambda : {0.5, 1.0, 10.0})
      for (int k : {1, 2}) {
        auto cosk = GridFunction::sample(g, [k](double x) { return std::cos(k * oracle::pi * x); });
        auto f = resolvent_closed_form(r, lambda, cosk);
        auto ref = GridFunction::sample(g, [&](double x) { return oracle::sticky_cosine_resolvent(r, lambda, k, x); });
        EXPECT_LT(sup_gap(f, ref), 2e-5) << "r=" << r << " lambda=" << lambda << " k=" << k;
      }
}

TEST(ClosedForm, ConstantsMapToOneOverLambda) {
  // Exact up to the trapezoid error of the free-space convolution.
  for (double r : kR) {
    auto err = [r](int n) {
      IntervalGrid g(0.0, 1.0, n);
      auto f = resolvent_closed_form(r, 3.0, GridFunction::constant(g, 1.0));
      return (f.values().array() - 1.0 / 3.0).abs().maxCoeff();
    };
    EXPECT_LT(err(50), 5e-5) << "r=" << r;
    if (r < 1.0) EXPECT_NEAR(oracle::order(err(50), err(100)), 2.0, 0.05) << "r=" << r;
  }
}

TEST(ClosedForm, RescaledBranchAgreesWithDirect) {
  IntervalGrid g(0.0, 1.0, 400);
  const auto gf = smooth_g(g);
  for (double r : kR)
    for (double lambda : {0.01, 0.5, 1.0, 3.9}) {
      const auto a = resolvent_closed_form(r, lambda, gf);
      const auto b = resolvent_closed_form_rescaled(r, lambda, gf);
      EXPECT_LT(sup_gap(a, b), 1e-12 * sup_norm(a)) << r << " " << lambda;
    }
}

TEST(ClosedForm, AccurateForLargeLambda) {
  IntervalGrid g(0.0, 1.0, 4000);
  for (double r : kR)
    for (double lambda : {100.0, 900.0, 2500.0}) {
      auto cos1 = GridFunction::sample(g, [](double x) { return std::cos(oracle::pi * x); });
      auto f = resolvent_closed_form(r, lambda, cos1);
      auto ref = GridFunction::sample(g, [&](double x) { return oracle::sticky_cosine_resolvent(r, lambda, 1, x); });
      EXPECT_LT(sup_gap(f, ref), 1e-4 * sup_norm(ref)) << r << " " << lambda;
    }
}

TEST(ClosedForm, LargeLambdaStaysFinite) {
  IntervalGrid g(0.0, 1.0, 2000);
  const auto f = resolvent_closed_form(0.5, 1e6, smooth_g(g));
  EXPECT_TRUE(f.values().allFinite());
  // lambda R is a contraction; the slack covers the unresolved kernel.
  EXPECT_LE(1e6 * sup_norm(f), 1.03 * sup_norm(smooth_g(g)));
  const auto f4 = resolvent_closed_form(0.5, 1e4, smooth_g(g));
  EXPECT_NEAR(1e4 * f4[1000], smooth_g(g)[1000], 1e-3);
}

TEST(ClosedForm, LeftIntervalIsTheMirror) {
  IntervalGrid right(0.0, 1.0, 100);
  IntervalGrid left(-1.0, 0.0, 100);
  auto gr = smooth_g(right);
  auto gl = GridFunction::sample(left, [](double x) { return std::exp(x) * std::cos(2.0 * x) + x * x; });
  const auto fr = resolvent_closed_form(0.6, 2.0, gr);
  const auto fl = resolvent_closed_form(0.6, 2.0, gl);
  EXPECT_LT((fl.values() - fr.values().reverse()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(DiscreteResolvent, SecondOrderAgainstClosedForm) {
  for (double r : kR)
    for (double lambda : {0.5, 10.0}) {
      auto gap = [&](int n) {
        IntervalGrid g(0.0, 1.0, n);
        const auto gf = smooth_g(g);
        return sup_gap(resolvent_discrete(assemble_sticky(r, g), lambda, gf),
                       resolvent_closed_form(r, lambda, gf));
      };
      EXPECT_GT(oracle::order(gap(100), gap(200)), 1.8) << "r=" << r << " lambda=" << lambda;
    }
}

TEST(DiscreteResolvent, SolvesTheLinearSystem) {
  IntervalGrid g(0.0, 1.0, 30);
  auto op = assemble_sticky(0.3, g);
  const auto gf = smooth_g(g);
  const auto f = resolvent_discrete(op, 2.0, gf);
  const Vector res = 2.0 * f.values() - op.matrix() * f.values() - gf.values();
  EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(EquilibriumProjection, WeightsTraceAndMean) {
  IntervalGrid g(0.0, 1.0, 100);
  auto f = GridFunction::sample(g, [](double x) { return 2.0 + x; });
  auto p = equilibrium_projection(0.25, f);
  EXPECT_NEAR(p[0], 0.25 * 2.0 + 0.75 * 2.5, 1e-13);
  EXPECT_EQ(p[0], p[100]);
}

TEST(Evolve, ConservesAndStaysPositive) {
  IntervalGrid g(0.0, 1.0, 60);
  for (double r : kR) {
    auto op = assemble_sticky(r, g);
    auto one = evolve(op, GridFunction::constant(g, 1.0), 0.7, 0.01);
    EXPECT_LT((one.values().array() - 1.0).abs().maxCoeff(), 1e-12);
    auto bump = GridFunction::sample(g, [](double x) { return x < 0.2 ? 1.0 : 0.0; });
    EXPECT_GE(evolve(op, bump, 0.05, 0.01).values().minCoeff(), -1e-12);
  }
}

TEST(Evolve, MassOfInvariantMeasureIsConserved) {
  IntervalGrid g(0.0, 1.0, 40);
  auto op = assemble_sticky(0.5, g);
  const Vector w = op.invariant_weights();
  auto f = smooth_g(g);
  auto out = evolve(op, f, 0.3, 0.01, Scheme::crank_nicolson);
  EXPECT_NEAR(w.dot(out.values()), w.dot(f.values()), 1e-12);
}

TEST(Decay, FittedRateMatchesSpectralGap) {
  // r = 0 is the Neumann Laplacian: gap pi^2. For 0 < r < 1 the gap is the
  // squared root of tan w = -r w / (1 - r) in (pi/2, pi).
  IntervalGrid g(0.0, 1.0, 200);
  std::vector<double> times;
  for (int k = 1; k <= 30; ++k) times.push_back(0.05 * k);
  for (double r : {0.0, 0.5}) {
    auto op = assemble_sticky(r, g);
    const auto fit = decay_to_equilibrium(op, smooth_g(g), times, {1e-4, Scheme::crank_nicolson});
    const double w = r == 0.0 ? oracle::pi : oracle::sticky_first_frequency(r);
    EXPECT_NEAR(fit.omega / (w * w), 1.0, 5e-3) << "r=" << r;
    EXPECT_GT(fit.K, 0.0);
  }
}

TEST(Decay, ErrorsDecreaseMonotonically) {
  IntervalGrid g(0.0, 1.0, 50);
  auto op = assemble_sticky(0.5, g);
  std::vector<double> times{0.1, 0.2, 0.4, 0.8};
  const auto fit = decay_to_equilibrium(op, smooth_g(g), times);
  for (std::size_t i = 1; i < fit.errors.size(); ++i) EXPECT_LT(fit.errors[i], fit.errors[i - 1]);
}

TEST(Decay, RejectsDegenerateTimeGrid) {
  IntervalGrid g(0.0, 1.0, 10);
  auto op = assemble_sticky(0.5, g);
  EXPECT_THROW(decay_to_equilibrium(op, smooth_g(g), {0.1}), ParameterError);
  EXPECT_THROW(decay_to_equilibrium(op, smooth_g(g), {0.2, 0.1}), ParameterError);
  EXPECT_THROW(decay_to_equilibrium(op, GridFunction::constant(g, 1.0), {0.1, 0.2, 0.3}), NumericalFailure);
}

TEST(KernelMin, SymmetricAndScaledConsistent) {
  for (double lambda : {0.5, 4.0}) {
    EXPECT_NEAR(kernel_min(lambda, 0.2, 0.7), kernel_min(lambda, 0.7, 0.2), 1e-12);
    EXPECT_NEAR(kernel_min_scaled(lambda, 0.3, 0.6),
                kernel_min(lambda, 0.3, 0.6) * std::exp(-std::sqrt(lambda)), 1e-12);
  }
  EXPECT_TRUE(std::isfinite(kernel_min_scaled(1e8, 0.5, 0.5)));
}

TEST(KernelMin, IntegratesToTheKilledResolvent) {
  // (lambda - d^2) f = 1 with f(0) = 0, f'(1) = 0 has
  // f = (1 - cosh(s (1 - x)) / cosh s) / lambda.
  const double lambda = 2.0;
  const double s = std::sqrt(lambda);
  IntervalGrid g(0.0, 1.0, 4000);
  for (double x : {0.25, 0.5, 0.9}) {
    auto k = GridFunction::sample(g, [&](double y) { return kernel_min(lambda, x, y); });
    const double f = trapezoid_integral(k) / (4.0 * s * std::cosh(s));
    EXPECT_NEAR(f, (1.0 - std::cosh(s * (1.0 - x)) / std::cosh(s)) / lambda, 1e-6) << x;
  }
}
