#include "thinlayer/sticky.hpp"

#include <cmath>
#include <string>

namespace thinlayer {

namespace {

// Weights of \int_0^h e^{-k(h-u)} (a (1-u/h) + b u/h) du, multiplied by k,
// for z = k h: returns (phi_a, phi_b).
std::pair<double, double> exp_weights(double z) {
  if (z < 1e-4) {
    const double pa = z * (0.5 - z / 3.0 + z * z / 8.0);
    const double pb = z * (0.5 - z / 6.0 + z * z / 24.0);
    return {pa, pb};
  }
  const double e = std::exp(-z);
  return {(1.0 - e - z * e) / z, (z - 1.0 + e) / z};
}

}  // namespace

double ImagesExtension::operator()(double x) const {
  if (x < -span - 1e-12 || x > span + 1e-12)
    throw RangeError("images extension: x = " + std::to_string(x) + " outside the extended span");
  const double u = (x - grid.a()) / grid.h();
  auto k = static_cast<long>(std::floor(u));
  const long last = grid.cells() - 1;
  if (k < 0) k = 0;
  if (k > last) k = last;
  const double w = u - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

ImagesExtension images_extension(const GridFunction& f, double r, int span) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("r", "stickiness must lie in [0, 1]");
  if (span < 2 || span % 2 != 0) throw ParameterError("span", "span must be a positive even integer");
  const IntervalGrid& g = f.interval_grid();
  if (g.a() != 0.0 || g.b() != 1.0) throw ParameterError("grid", "images extension needs f on [0, 1]");
  const int n = g.cells();
  const long half = static_cast<long>(span) * n;
  Vector v = Vector::Zero(2 * half + 1);
  auto at = [&](long k) -> double& { return v[half + k]; };
  for (long k = 0; k <= n; ++k) at(k) = f[static_cast<int>(k)];

  const double kappa = r > 0.0 ? (1.0 - r) / r : 0.0;
  const auto [pa, pb] = exp_weights(kappa * g.h());
  const double decay = std::exp(-kappa * g.h());

  // Known interval is [-a, b] in node units; alternate the two reflections.
  long a = 0;
  long b = n;
  while (a < half || b < half) {
    // About x = 0: F(-x) from F on [0, x].
    const long new_a = std::min(b, half);
    if (r == 0.0) {
      for (long k = a + 1; k <= new_a; ++k) at(-k) = at(k);
    } else if (r == 1.0) {
      for (long k = a + 1; k <= new_a; ++k) at(-k) = 2.0 * at(0) - at(k);
    } else {
      double j = 0.0;  // kappa * \int_0^{x_k} e^{-kappa (x_k - y)} F(y) dy
      double e0 = 1.0;
      for (long k = 1; k <= new_a; ++k) {
        j = decay * j + pa * at(k - 1) + pb * at(k);
        e0 *= decay;
        if (k > a) at(-k) = 2.0 * at(0) * e0 + 2.0 * j - at(k);
      }
    }
    a = new_a;
    // About x = 1: F(x) = F(2 - x).
    const long new_b = std::min(2 * n + a, half);
    for (long k = b + 1; k <= new_b; ++k) at(k) = at(2 * n - k);
    b = new_b;
  }
  return {r, span, IntervalGrid(-span, span, static_cast<int>(2 * half)), std::move(v)};
}

GridFunction cosine_evaluate(const ImagesExtension& ext, const IntervalGrid& grid, double t) {
  if (std::abs(t) > ext.span - 1.0 + 1e-12)
    throw RangeError("cosine_evaluate: |t| = " + std::to_string(std::abs(t)) +
                     " exceeds the extension span minus one");
  return GridFunction::sample(grid, [&](double x) { return 0.5 * (ext(x + t) + ext(x - t)); });
}

GridFunction cosine_evaluate(const GridFunction& f, double r, double t) {
  int span = 2 * static_cast<int>(std::ceil((std::abs(t) + 1.0) / 2.0));
  if (span < 2) span = 2;
  return cosine_evaluate(images_extension(f, r, span), f.interval_grid(), t);
}

}  // namespace thinlayer
