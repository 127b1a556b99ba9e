#include <cmath>
#include <string>

#include "thinlayer/membrane.hpp"

namespace thinlayer {

namespace {

double interpolate(const GridFunction& f, double x) {
  const IntervalGrid& g = f.interval_grid();
  if (x <= g.a()) return f[0];
  if (x >= g.b()) return f[g.cells()];
  const double u = (x - g.a()) / g.h();
  int k = static_cast<int>(std::floor(u));
  if (k >= g.cells()) k = g.cells() - 1;
  const double w = u - k;
  return (1.0 - w) * f[k] + w * f[k + 1];
}

}  // namespace

MeasureSpec MeasureSpec::dirac(double lo, double hi, double x) {
  MeasureSpec m;
  m.lo = lo;
  m.hi = hi;
  m.atoms.emplace_back(x, 1.0);
  return m;
}

MeasureSpec MeasureSpec::uniform(double lo, double hi) {
  MeasureSpec m;
  m.lo = lo;
  m.hi = hi;
  const IntervalGrid g(lo, hi, 1);
  m.density = GridFunction::constant(g, 1.0 / (hi - lo));
  return m;
}

double MeasureSpec::total_mass() const {
  double mass = 0.0;
  for (const auto& [x, w] : atoms) mass += w;
  if (density) mass += trapezoid_integral(*density);
  return mass;
}

void MeasureSpec::validate(const char* field) const {
  for (const auto& [x, w] : atoms) {
    if (!(w >= 0.0)) throw ParameterError(field, "atom weights must be nonnegative");
    if (!(x >= lo && x <= hi))
      throw ParameterError(field, "atom at " + std::to_string(x) + " lies outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (density) {
    const IntervalGrid& g = density->interval_grid();
    if (std::abs(g.a() - lo) > 1e-12 || std::abs(g.b() - hi) > 1e-12)
      throw ParameterError(field, "density grid must cover the measure interval");
    if (density->values().minCoeff() < 0.0)
      throw ParameterError(field, "density must be nonnegative");
  }
  if (std::abs(total_mass() - 1.0) > 1e-12)
    throw ParameterError(field, "total mass must be 1, got " + std::to_string(total_mass()));
}

Vector MeasureSpec::weights(const IntervalGrid& grid) const {
  if (std::abs(grid.a() - lo) > 1e-12 || std::abs(grid.b() - hi) > 1e-12)
    throw DimensionMismatch("MeasureSpec::weights: grid does not cover the measure interval");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(grid.size()));
  const int n = grid.cells();
  for (const auto& [x, m] : atoms) {
    const double u = (x - grid.a()) / grid.h();
    int k = static_cast<int>(std::floor(u));
    if (k < 0) k = 0;
    if (k >= n) k = n - 1;
    double t = u - k;
    t = std::min(1.0, std::max(0.0, t));
    w[k] += (1.0 - t) * m;
    w[k + 1] += t * m;
  }
  if (density) {
    const Vector tw = grid.trapezoid_weights();
    for (int i = 0; i <= n; ++i) w[i] += tw[i] * interpolate(*density, grid.node(i));
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw ParameterError("measure", "measure has no mass on the grid");
  return w / total;
}

}  // namespace thinlayer
