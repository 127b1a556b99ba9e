#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "thinlayer/linalg.hpp"

using namespace thinlayer;

namespace {

Tridiagonal random_diag_dominant(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tridiagonal t{Vector(n), Vector(n), Vector(n)};
  for (int i = 0; i < n; ++i) {
    t.lower[i] = u(rng);
    t.upper[i] = u(rng);
    t.diag[i] = 3.0 + u(rng);
  }
  return t;
}

SparseMatrix path_generator(int n) {
  Tridiagonal t{Vector::Constant(n, 1.0), Vector::Constant(n, -2.0), Vector::Constant(n, 1.0)};
  t.diag[0] = -1.0;
  t.diag[n - 1] = -1.0;
  return t.to_sparse();
}

}  // namespace

TEST(Tridiagonal, SolveMatchesDenseLu) {
  const auto t = random_diag_dominant(40, 1);
  const Matrix dense = Matrix(t.to_sparse());
  Vector rhs = Vector::LinSpaced(40, -1.0, 2.0);
  const Vector x = t.solve(rhs);
  const Vector ref = dense.partialPivLu().solve(rhs);
  EXPECT_LT((x - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((t.apply(x) - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Tridiagonal, ShiftedIsAffine) {
  const auto t = random_diag_dominant(6, 2);
  const auto s = t.shifted(2.0, -0.5);
  const Matrix ref = 2.0 * Matrix::Identity(6, 6) - 0.5 * Matrix(t.to_sparse());
  EXPECT_LT((Matrix(s.to_sparse()) - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Tridiagonal, ZeroPivotThrows) {
  Tridiagonal t{Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  EXPECT_THROW(t.solve(Vector::Ones(3)), NumericalFailure);
}

TEST(Generator, MetzlerAndRowSums) {
  const SparseMatrix a = path_generator(5);
  EXPECT_TRUE(is_metzler(a));
  EXPECT_EQ(max_abs_row_sum(a), 0.0);
  SparseMatrix b = a;
  b.coeffRef(0, 1) = -0.1;
  EXPECT_FALSE(is_metzler(b));
}

TEST(Expm, MatchesTaylorOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  const Matrix a = Matrix::NullaryExpr(8, 8, [&] { return 2.0 * n01(rng); });
  const Matrix e = expm(a);
  const Matrix ref = oracle::expm_taylor(a);
  EXPECT_LT((e - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Expm, RotationClosedForm) {
  Matrix a(2, 2);
  a << 0.0, -1.5, 1.5, 0.0;
  const Matrix e = expm(a);
  EXPECT_NEAR(e(0, 0), std::cos(1.5), 1e-14);
  EXPECT_NEAR(e(1, 0), std::sin(1.5), 1e-14);
}

TEST(GeneratorStepper, ConservesConstantsForEveryScheme) {
  const SparseMatrix a = path_generator(30) * 400.0;
  for (Scheme s : {Scheme::implicit_euler, Scheme::crank_nicolson, Scheme::exact}) {
    GeneratorStepper st(a, s);
    const Vector out = st.evolve(Vector::Ones(30), 0.37, 0.01);
    EXPECT_LT((out.array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(GeneratorStepper, OrdersOfAccuracy) {
  const SparseMatrix a = path_generator(20) * 10.0;
  const Vector f0 = Vector::LinSpaced(20, 0.0, 1.0);
  const Vector exact = oracle::expm_taylor(Matrix(a) * 0.5) * f0;
  auto err = [&](Scheme s, double dt) {
    GeneratorStepper st(a, s);
    return (st.evolve(f0, 0.5, dt) - exact).cwiseAbs().maxCoeff();
  };
  EXPECT_NEAR(oracle::order(err(Scheme::implicit_euler, 0.01), err(Scheme::implicit_euler, 0.005)), 1.0, 0.1);
  EXPECT_NEAR(oracle::order(err(Scheme::crank_nicolson, 0.01), err(Scheme::crank_nicolson, 0.005)), 2.0, 0.1);
  EXPECT_LT(err(Scheme::exact, 0.03), 1e-12);
}

TEST(GeneratorStepper, LastStepLandsOnHorizon) {
  // f' = -f, exact scheme: any step pattern ends at e^{-t}.
  SparseMatrix a(1, 1);
  a.insert(0, 0) = -1.0;
  GeneratorStepper st(a, Scheme::exact);
  const Vector out = st.evolve(Vector::Ones(1), 0.95, 0.3);
  EXPECT_NEAR(out[0], std::exp(-0.95), 1e-14);
  const Vector seg = st.evolve(Vector::Ones(1), {{0.1, 0.03}, {0.4, 0.17}});
  EXPECT_NEAR(seg[0], std::exp(-0.5), 1e-14);
}

TEST(GeneratorStepper, ImplicitEulerKeepsPositivity) {
  const SparseMatrix a = path_generator(50) * 1e4;
  GeneratorStepper st(a, Scheme::implicit_euler);
  Vector f = Vector::Zero(50);
  f[25] = 1.0;
  const Vector out = st.evolve(f, 0.1, 0.05);
  EXPECT_GE(out.minCoeff(), 0.0);
}

TEST(RequireFinite, FlagsNan) {
  Vector v = Vector::Ones(3);
  EXPECT_NO_THROW(require_finite(v, "ok"));
  v[1] = std::nan("");
  EXPECT_THROW(require_finite(v, "bad"), NumericalFailure);
}
