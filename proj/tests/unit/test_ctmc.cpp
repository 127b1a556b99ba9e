#include <gtest/gtest.h>

#include <cstdlib>

#include "oracles.hpp"
#include "thinlayer/ctmc.hpp"
#include "thinlayer/membrane.hpp"
#include "thinlayer/sticky.hpp"

using namespace thinlayer;

namespace {

SparseMatrix two_state(double a, double b) {
  SparseMatrix m(2, 2);
  m.insert(0, 0) = -a;
  m.insert(0, 1) = a;
  m.insert(1, 0) = b;
  m.insert(1, 1) = -b;
  m.makeCompressed();
  return m;
}

class ThreadsGuard {
 public:
  explicit ThreadsGuard(const char* n) {
    if (const char* old = std::getenv("THINLAYER_THREADS")) old_ = old;
    setenv("THINLAYER_THREADS", n, 1);
  }
  ~ThreadsGuard() {
    if (old_.empty()) unsetenv("THINLAYER_THREADS"); else setenv("THINLAYER_THREADS", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

}  // namespace

TEST(JumpChain, RatesAndTargets) {
  SparseMatrix m(3, 3);
  m.insert(0, 0) = -3.0;
  m.insert(0, 1) = 1.0;
  m.insert(0, 2) = 2.0;
  m.insert(1, 1) = 0.0;
  m.insert(2, 0) = 4.0;
  m.insert(2, 2) = -4.0;
  m.makeCompressed();
  JumpChain c(m);
  EXPECT_EQ(c.size(), 3);
  EXPECT_DOUBLE_EQ(c.rate(0), 3.0);
  EXPECT_EQ(c.rate(1), 0.0);
  EXPECT_EQ(c.target(0, 0.2), 1);
  EXPECT_EQ(c.target(0, 0.5), 2);
  EXPECT_EQ(c.target(2, 0.99), 0);
}

TEST(JumpChain, RejectsNonGenerators) {
  EXPECT_THROW(JumpChain(two_state(1.0, 1.0) * -1.0), ParameterError);
  SparseMatrix leak = two_state(1.0, 1.0);
  leak.coeffRef(0, 0) = -2.0;
  EXPECT_THROW(JumpChain{leak}, ParameterError);
}

TEST(Simulate, TrapNeverMoves) {
  auto op = assemble_sticky(1.0, IntervalGrid(0.0, 1.0, 10));
  JumpChain c(op.matrix());
  const auto nodes = simulate_ctmc({&c, 0, 5.0, 1000, 1});
  for (int x : nodes) EXPECT_EQ(x, 0);
}

TEST(Simulate, ZeroHorizonStaysAtStart) {
  JumpChain c(two_state(1.0, 1.0));
  for (int x : simulate_ctmc({&c, 1, 0.0, 50, 1})) EXPECT_EQ(x, 1);
}

TEST(Simulate, DeterministicAcrossThreadCounts) {
  auto op = assemble_sticky(0.5, IntervalGrid(0.0, 1.0, 20));
  JumpChain c(op.matrix());
  CtmcRun run{&c, 10, 0.2, 5000, 99};
  std::vector<int> serial, parallel;
  {
    ThreadsGuard g("1");
    serial = simulate_ctmc(run);
  }
  {
    ThreadsGuard g("4");
    parallel = simulate_ctmc(run);
  }
  EXPECT_EQ(serial, parallel);
  run.seed = 100;
  EXPECT_NE(simulate_ctmc(run), serial);
}

TEST(Simulate, InputValidation) {
  JumpChain c(two_state(1.0, 1.0));
  EXPECT_THROW(simulate_ctmc({&c, 2, 1.0, 10, 1}), ParameterError);
  EXPECT_THROW(simulate_ctmc({&c, 0, -1.0, 10, 1}), ParameterError);
  EXPECT_THROW(simulate_ctmc({&c, 0, 1.0, 0, 1}), ParameterError);
  EXPECT_THROW(simulate_ctmc({nullptr, 0, 1.0, 10, 1}), ParameterError);
  EXPECT_THROW(estimate_semigroup({&c, 0, 1.0, 10, 1}, Vector::Ones(3)), DimensionMismatch);
}

TEST(Estimate, TwoStateWithinThreeStandardErrors) {
  const double a = 1.5, b = 0.5, t = 0.8;
  JumpChain c(two_state(a, b));
  const auto e = estimate_semigroup({&c, 0, t, 40000, 7}, Eigen::Vector2d(1.0, 0.0));
  const double exact = expm_B({a, b}, t)(0, 0);
  EXPECT_LT(std::abs(e.mean - exact), 3.0 * e.std_error);
  EXPECT_EQ(e.n, 40000);
}

TEST(Estimate, MatchesMostMatrixEntries) {
  // At 99% of 100 (start, function) cells the estimate lies within 3 standard
  // errors of the matrix exponential.
  IntervalGrid g(0.0, 1.0, 9);
  auto op = assemble_sticky(0.4, g);
  JumpChain c(op.matrix());
  const Matrix p = oracle::expm_taylor(Matrix(op.matrix()) * 0.05);
  int hits = 0;
  int cells = 0;
  for (int start = 0; start < 10; ++start)
    for (int j = 0; j < 10; ++j) {
      Vector f = Vector::Zero(10);
      f[j] = 1.0;
      const auto e = estimate_semigroup({&c, start, 0.05, 4000, 1000u + static_cast<unsigned>(start)}, f);
      const double se = std::max(e.std_error, 1.0 / 4000.0);
      if (std::abs(e.mean - p(start, j)) <= 3.0 * se) ++hits;
      ++cells;
    }
  EXPECT_GE(hits, 99 * cells / 100);
}

TEST(Occupation, IncreasesWithStickiness) {
  IntervalGrid g(0.0, 1.0, 10);
  double prev = -1.0;
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    JumpChain c(assemble_sticky(r, g).matrix());
    const auto e = membrane_occupation({&c, 5, 1.0, 4000, 3}, {0});
    EXPECT_GT(e.mean, prev) << r;
    prev = e.mean;
  }
  EXPECT_THROW(membrane_occupation({nullptr, 0, 1.0, 1, 1}, {0}), ParameterError);
}

TEST(Occupation, TrapStartIsAlwaysOccupied) {
  JumpChain c(assemble_sticky(1.0, IntervalGrid(0.0, 1.0, 10)).matrix());
  const auto e = membrane_occupation({&c, 0, 1.0, 500, 3}, {0});
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(Occupation, ReflectingPointVanishesUnderRefinement) {
  double prev = 2.0;
  for (int n : {5, 20, 80}) {
    JumpChain c(assemble_sticky(0.0, IntervalGrid(0.0, 1.0, n)).matrix());
    const auto e = membrane_occupation({&c, n / 2, 1.0, 2000, 8}, {0});
    EXPECT_LT(e.mean, prev) << n;
    prev = e.mean;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Estimate, ConstantFunctionIsExact) {
  JumpChain c(assemble_sticky(0.5, IntervalGrid(0.0, 1.0, 10)).matrix());
  const auto e = estimate_semigroup({&c, 3, 0.5, 1000, 2}, Vector::Ones(11));
  EXPECT_EQ(e.mean, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(Estimate, CrossingProbabilityIncreasesWithAlpha) {
  // Common random numbers: one seed for every alpha.
  SplitGrid sg(8, 8);
  Vector right = Vector::Zero(18);
  right.tail(9).setOnes();
  double prev = 0.0;
  for (double a : {0.5, 2.0, 8.0}) {
    MembraneParams prm;
    prm.alpha = a;
    prm.beta = 1.0;
    JumpChain c(assemble_APhi(prm, sg).rows);
    const auto e = estimate_semigroup({&c, 4, 0.5, 20000, 21}, right);
    EXPECT_GT(e.mean, prev) << a;
    EXPECT_LT(e.mean, 1.0);
    prev = e.mean;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(Estimate, ZeroRatesNeverCross) {
  SplitGrid sg(8, 8);
  MembraneParams prm;
  prm.p = 0.4;
  JumpChain full(assemble_APhi(prm, sg).rows);
  JumpChain half(assemble_sticky(0.4, sg.left(), Side::left).matrix());
  Vector f = Vector::LinSpaced(18, -1.0, 2.0);
  const auto a = estimate_semigroup({&full, 3, 0.3, 5000, 6}, f);
  const auto b = estimate_semigroup({&half, 3, 0.3, 5000, 6}, Vector(f.head(9)));
  EXPECT_NEAR(a.mean, b.mean, 1e-12);
}

TEST(Estimate, SideLawApproachesTheTwoStateChain) {
  // Total-variation gap between the side occupied by the rescaled chain and
  // the two-state limit law, started inside the left interval.
  SplitGrid sg(10, 10);
  MembraneParams prm;
  prm.p = 0.5;
  prm.q = 0.5;
  prm.alpha = 1.0;
  prm.beta = 1.0;
  const double t = 0.5;
  Vector right = Vector::Zero(22);
  right.tail(11).setOnes();
  const double limit = expm_B({prm.alpha, prm.beta}, t)(0, 1);
  double prev = 2.0;
  for (double eps : {0.8, 0.4, 0.2}) {
    JumpChain c(assemble_Aeps(prm, sg, eps).rows);
    const auto e = estimate_semigroup({&c, 3, t, 20000, 31}, right);
    const double tv = std::abs(e.mean - limit);
    EXPECT_LT(tv, prev) << eps;
    prev = tv;
  }
}

TEST(Summarize, MeanAndStandardError) {
  const auto e = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(summarize({}).n, 0);
}
