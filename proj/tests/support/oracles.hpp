#pragma once

// Reference computations used by the tests. Nothing here calls into the
// solvers under test beyond grid types.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>

#include "thinlayer/grid.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// (lambda - G_r)^{-1} cos(k pi x) on [0, 1], solved by hand:
/// c cos(k pi x) + A cosh(s (1 - x)) with A = r k^2 pi^2 c / m_lambda(r).
inline double sticky_cosine_resolvent(double r, double lambda, int k, double x) {
  const double s = std::sqrt(lambda);
  const double w = k * pi;
  const double c = 1.0 / (lambda + w * w);
  const double m = r * lambda * std::cosh(s) + (1.0 - r) * s * std::sinh(s);
  return c * std::cos(w * x) + r * w * w * c / m * std::cosh(s * (1.0 - x));
}

/// Root of tan(w) = -r w / (1 - r) in (pi/2, pi) for 0 < r < 1: the first
/// eigenvalue -w^2 of G_r with eigenfunction cos(w (1 - x)).
inline double sticky_first_frequency(double r) {
  auto f = [r](double w) { return (1.0 - r) * std::sin(w) + r * w * std::cos(w); };
  double lo = pi / 2.0;
  double hi = pi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) > 0.0) == (f(mid) > 0.0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Dense Kronecker product.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// e^{A} by scaling and squaring of a degree-18 Taylor polynomial.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int sq = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++sq;
  }
  const Eigen::MatrixXd b = a * scale;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * b / k;
    sum += term;
  }
  for (int i = 0; i < sq; ++i) sum = sum * sum;
  return sum;
}

/// Observed order from two errors at spacings h and h / 2.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace oracle
