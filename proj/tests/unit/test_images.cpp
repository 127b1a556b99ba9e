#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thinlayer/sticky.hpp"

using namespace thinlayer;

namespace {

// cos(w (1 - x)) is an eigenfunction of G_r: the cosine family multiplies
// it by cos(w t).
void expect_eigen_cosine(double r, double w, int n, double tol) {
  IntervalGrid g(0.0, 1.0, n);
  auto f = GridFunction::sample(g, [w](double x) { return std::cos(w * (1.0 - x)); });
  for (double t : {0.3, 1.0, 2.7}) {
    const auto c = cosine_evaluate(f, r, t);
    const Vector ref = std::cos(w * t) * f.values();
    EXPECT_LT((c.values() - ref).cwiseAbs().maxCoeff(), tol) << "r=" << r << " t=" << t;
  }
}

}  // namespace

TEST(Images, ConstantsArePreservedForEveryR) {
  IntervalGrid g(0.0, 1.0, 40);
  for (double r : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const auto ext = images_extension(GridFunction::constant(g, 2.5), r, 4);
    EXPECT_LT((ext.values.array() - 2.5).abs().maxCoeff(), 1e-11) << "r=" << r;
  }
}

TEST(Images, LimitsOfTheRule) {
  IntervalGrid g(0.0, 1.0, 20);
  auto f = GridFunction::sample(g, [](double x) { return x * x + 0.3 * x; });
  // r = 0: even reflection about 0; r = 1: odd reflection about F(0).
  const auto even = images_extension(f, 0.0, 2);
  const auto odd = images_extension(f, 1.0, 2);
  for (double x : {0.25, 0.5, 1.0}) {
    EXPECT_NEAR(even(-x), f[static_cast<int>(x * 20)], 1e-13);
    EXPECT_NEAR(odd(-x), 2.0 * f[0] - f[static_cast<int>(x * 20)], 1e-13);
  }
  // Reflection about 1.
  for (double x : {0.25, 0.5}) EXPECT_NEAR(even(1.0 + x), even(1.0 - x), 1e-13);
}

TEST(Images, CosineFamilyOnEigenfunctions) {
  expect_eigen_cosine(0.0, oracle::pi, 400, 1e-12);
  expect_eigen_cosine(0.0, 2.0 * oracle::pi, 400, 1e-12);
  expect_eigen_cosine(1.0, oracle::pi / 2.0, 400, 1e-12);
  for (double r : {0.25, 0.5, 0.75})
    expect_eigen_cosine(r, oracle::sticky_first_frequency(r), 2000, 2e-5);
}

TEST(Images, CosineAtZeroIsIdentity) {
  IntervalGrid g(0.0, 1.0, 30);
  auto f = GridFunction::sample(g, [](double x) { return std::exp(x); });
  EXPECT_LT((cosine_evaluate(f, 0.4, 0.0).values() - f.values()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Images, RangeChecks) {
  IntervalGrid g(0.0, 1.0, 10);
  auto f = GridFunction::constant(g, 1.0);
  const auto ext = images_extension(f, 0.5, 2);
  EXPECT_THROW(ext(2.5), RangeError);
  EXPECT_THROW(cosine_evaluate(ext, g, 1.5), RangeError);
  EXPECT_NO_THROW(cosine_evaluate(ext, g, 1.0));
  EXPECT_THROW(images_extension(f, 0.5, 3), ParameterError);
  EXPECT_THROW(images_extension(f, 0.5, 0), ParameterError);
  EXPECT_THROW(images_extension(GridFunction::constant(IntervalGrid(0, 2, 4), 1.0), 0.5, 2), ParameterError);
}
