#include "thinlayer/sticky.hpp"

#include <algorithm>
#include <cmath>

namespace thinlayer {

namespace {

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("r", "stickiness must lie in [0, 1]");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("lambda", "resolvent parameter must be positive");
}

// Which side of the origin a grid lives on.
Side side_of(const IntervalGrid& g) {
  if (g.a() == 0.0 && g.b() == 1.0) return Side::right;
  if (g.a() == -1.0 && g.b() == 0.0) return Side::left;
  throw ParameterError("grid", "sticky functions live on [0, 1] or [-1, 0]");
}

// Values ordered from the sticky point outwards.
Vector from_sticky(const Vector& v, Side side) {
  return side == Side::right ? v : Vector(v.reverse());
}

// h(x) = (1/2s) \int_0^1 e^{-s|x-y|} g(y) dy by cellwise trapezoid sums,
// accumulated from both ends.
Vector free_space(double s, double h, const Vector& g) {
  const Eigen::Index n = g.size() - 1;
  const double e = std::exp(-s * h);
  Vector left(n + 1);
  Vector right(n + 1);
  left[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) left[i + 1] = e * left[i] + 0.5 * h * (e * g[i] + g[i + 1]);
  right[n] = 0.0;
  for (Eigen::Index i = n; i > 0; --i)
    right[i - 1] = e * right[i] + 0.5 * h * (e * g[i] + g[i - 1]);
  return (left + right) / (2.0 * s);
}

// Above this sqrt(lambda) the direct form loses digits to the cancellation
// between C cosh and h(1) sinh long before either overflows.
constexpr double kDirectLimit = 2.0;

Vector closed_form_values(double r, double lambda, const Vector& g, double h, bool force_scaled) {
  const double s = std::sqrt(lambda);
  const Vector hv = free_space(s, h, g);
  const Eigen::Index n = g.size() - 1;
  const double h0 = hv[0];
  const double h1 = hv[n];
  const double g0 = g[0];
  Vector f(n + 1);
  if (!force_scaled && s <= kDirectLimit) {
    const double ch = std::cosh(s);
    const double sh = std::sinh(s);
    const double num = r * (lambda * h1 * sh + g0 - lambda * h0) + (1.0 - r) * (h1 * s * ch + s * h0);
    const double den = lambda * r * ch + (1.0 - r) * s * sh;
    const double c = num / den;
    for (Eigen::Index i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      f[i] = c * std::cosh(s * (1.0 - x)) - h1 * std::sinh(s * (1.0 - x)) + hv[i];
    }
    return f;
  }
  const double e = std::exp(-s);
  const double e2 = e * e;
  const double bp = r * (g0 - lambda * h0) + (1.0 - r) * s * h0;
  const double d = lambda * r * (1.0 + e2) + (1.0 - r) * s * (1.0 - e2);
  const double a = r * lambda * h1 * (1.0 - e2) + (1.0 - r) * s * h1 * (1.0 + e2);
  const double c = (a + 2.0 * e * bp) / d;
  const double lead = (bp + e * h1 * ((1.0 - r) * s - r * lambda)) / d;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    f[i] = std::exp(-s * x) * lead + 0.5 * (c + h1) * std::exp(-s * (1.0 - x)) + hv[i];
  }
  return f;
}

GridFunction closed_form(double r, double lambda, const GridFunction& g, bool force_scaled) {
  check_r(r);
  check_lambda(lambda);
  const IntervalGrid& grid = g.interval_grid();
  const Side side = side_of(grid);
  const Vector f = closed_form_values(r, lambda, from_sticky(g.values(), side), grid.h(), force_scaled);
  return g.with_values(from_sticky(f, side));
}

}  // namespace

Vector StickyOperator::invariant_weights() const {
  Vector w = (1.0 - r) * grid.trapezoid_weights();
  w[sticky_index()] += r;
  return w;
}

StickyOperator assemble_sticky(double r, const IntervalGrid& grid, Side side) {
  check_r(r);
  const int n = grid.cells();
  const double h = grid.h();
  const double ih2 = 1.0 / (h * h);
  const auto m = static_cast<Eigen::Index>(n + 1);
  Tridiagonal t{Vector::Zero(m), Vector::Zero(m), Vector::Zero(m)};
  for (int i = 1; i < n; ++i) {
    t.lower[i] = ih2;
    t.diag[i] = -2.0 * ih2;
    t.upper[i] = ih2;
  }
  const int sticky = side == Side::right ? 0 : n;
  const int reflect = side == Side::right ? n : 0;
  const int inward_s = side == Side::right ? 1 : -1;

  // Reflecting end.
  t.diag[reflect] = -2.0 * ih2;
  if (inward_s == 1) t.lower[reflect] = 2.0 * ih2; else t.upper[reflect] = 2.0 * ih2;

  // Sticky end.
  if (r < 1.0) {
    const double w0 = r / (1.0 - r) + 0.5 * h;
    const double k = 1.0 / (h * w0);
    t.diag[sticky] = -k;
    if (inward_s == 1) t.upper[sticky] = k; else t.lower[sticky] = k;
  }
  return {r, grid, side, std::move(t)};
}

GridFunction resolvent_closed_form(double r, double lambda, const GridFunction& g) {
  return closed_form(r, lambda, g, false);
}

GridFunction resolvent_closed_form_rescaled(double r, double lambda, const GridFunction& g) {
  return closed_form(r, lambda, g, true);
}

GridFunction resolvent_discrete(const StickyOperator& op, double lambda, const GridFunction& g) {
  check_lambda(lambda);
  if (!(g.interval_grid() == op.grid))
    throw DimensionMismatch("resolvent_discrete: function grid differs from operator grid");
  const Tridiagonal sys = op.rows.shifted(lambda, -1.0);
  Vector f = sys.solve(g.values());
  require_finite(f, "resolvent_discrete");
  return g.with_values(std::move(f));
}

GridFunction equilibrium_projection(double r, const GridFunction& g) {
  check_r(r);
  const IntervalGrid& grid = g.interval_grid();
  const Side side = side_of(grid);
  const double trace = side == Side::right ? g[0] : g[grid.cells()];
  const double value = r * trace + (1.0 - r) * trapezoid_integral(g);
  return GridFunction::constant(grid, value);
}

GridFunction evolve(const StickyOperator& op, const GridFunction& f0, double t, double dt,
                    Scheme scheme) {
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  if (!(f0.interval_grid() == op.grid))
    throw DimensionMismatch("evolve: function grid differs from operator grid");
  GeneratorStepper stepper(op.matrix(), scheme);
  return f0.with_values(stepper.evolve(f0.values(), t, dt));
}

DecayFit decay_to_equilibrium(const StickyOperator& op, const GridFunction& f0,
                              const std::vector<double>& t_grid, const DecayOptions& opts) {
  if (t_grid.size() < 2) throw ParameterError("t_grid", "need at least two sample times");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()) || t_grid.front() < 0.0)
    throw ParameterError("t_grid", "sample times must be nonnegative and increasing");
  const GridFunction eq = equilibrium_projection(op.r, f0);
  GeneratorStepper stepper(op.matrix(), opts.scheme);
  DecayFit fit;
  Vector f = f0.values();
  double now = 0.0;
  for (double t : t_grid) {
    if (t > now) f = stepper.evolve(std::move(f), t - now, opts.dt);
    now = t;
    fit.times.push_back(t);
    fit.errors.push_back(sup_norm(Vector(f - eq.values())));
  }

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < fit.errors.size(); ++i)
    if (fit.errors[i] >= 1e-13) usable.push_back(i);
  const std::size_t start = usable.size() / 2;
  const std::size_t m = usable.size() - start;
  if (m < 2) throw NumericalFailure("decay fit: fewer than two samples above 1e-13 on the tail");

  double st = 0.0, sy = 0.0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    st += fit.times[usable[k]];
    sy += std::log(fit.errors[usable[k]]);
  }
  const double tm = st / static_cast<double>(m);
  const double ym = sy / static_cast<double>(m);
  double stt = 0.0, sty = 0.0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    const double dt = fit.times[usable[k]] - tm;
    stt += dt * dt;
    sty += dt * (std::log(fit.errors[usable[k]]) - ym);
  }
  if (stt == 0.0) throw NumericalFailure("decay fit: tail samples share one time");
  const double slope = sty / stt;
  fit.omega = -slope;
  fit.K = std::exp(ym - slope * tm);
  double ss = 0.0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    const double res = std::log(fit.errors[usable[k]]) - (ym + slope * (fit.times[usable[k]] - tm));
    ss += res * res;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  if (!(fit.omega > 0.0)) throw NumericalFailure("decay fit: no decay detected on the tail");
  return fit;
}

double kernel_min_scaled(double lambda, double x, double y) {
  check_lambda(lambda);
  const double s = std::sqrt(lambda);
  const double d = std::abs(x - y);
  return std::exp(-s * (d + 2.0)) + std::exp(-s * d) + std::exp(s * (x + y - 2.0)) -
         std::exp(s * (y - x - 2.0)) - std::exp(-s * (x + y)) - std::exp(s * (x - y - 2.0));
}

double kernel_min(double lambda, double x, double y) {
  check_lambda(lambda);
  const double s = std::sqrt(lambda);
  if (s > 30.0) return std::exp(s) * kernel_min_scaled(lambda, x, y);
  const double d = std::abs(x - y);
  return std::exp(-s * (d + 1.0)) + std::exp(-s * (d - 1.0)) + std::exp(s * (x + y - 1.0)) -
         std::exp(s * (y - x - 1.0)) - std::exp(s * (1.0 - x - y)) - std::exp(s * (x - 1.0 - y));
}

}  // namespace thinlayer
