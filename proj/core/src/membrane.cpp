#include "thinlayer/membrane.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "thinlayer/sticky.hpp"

namespace thinlayer {

namespace {

void check_unit(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError(field, "must lie in [0, 1]");
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("eps", "must lie in (0, 1]");
}

using Triplets = std::vector<Eigen::Triplet<double>>;

// Rows of A_{a Phi} with transmission rates (a, b) and outer killing (cm, cp).
SparseMatrix membrane_rows(const MembraneParams& prm, const SplitGrid& grid, double a, double b,
                           double cm, double cp) {
  const IntervalGrid& L = grid.left();
  const IntervalGrid& R = grid.right();
  const int nl = L.cells();
  const int nr = R.cells();
  const int off = grid.right_offset();
  const double hl = L.h();
  const double hr = R.h();
  Triplets t;
  t.reserve(3 * grid.size() + 2 * (grid.size()));

  // Left outer end z = -1.
  t.emplace_back(0, 1, 2.0 / (hl * hl));
  t.emplace_back(0, 0, -2.0 / (hl * hl) - 2.0 * cm / hl);
  for (int i = 1; i < nl; ++i) {
    t.emplace_back(i, i - 1, 1.0 / (hl * hl));
    t.emplace_back(i, i, -2.0 / (hl * hl));
    t.emplace_back(i, i + 1, 1.0 / (hl * hl));
  }
  // Membrane node 0-.
  {
    const double p = prm.p;
    const double d = p + (1.0 - p) * 0.5 * hl;
    const int i = grid.minus_index();
    const double flux = (1.0 - p) / (hl * d);
    if (flux != 0.0) t.emplace_back(i, i - 1, flux);
    t.emplace_back(i, i, -flux - a / d);
    if (a != 0.0) {
      const Vector w = prm.nu.weights(R);
      for (int j = 0; j <= nr; ++j)
        if (w[j] != 0.0) t.emplace_back(i, off + j, a / d * w[j]);
    }
  }
  // Membrane node 0+.
  {
    const double q = prm.q;
    const double d = q + (1.0 - q) * 0.5 * hr;
    const int i = grid.plus_index();
    const double flux = (1.0 - q) / (hr * d);
    if (flux != 0.0) t.emplace_back(i, i + 1, flux);
    t.emplace_back(i, i, -flux - b / d);
    if (b != 0.0) {
      const Vector w = prm.mu.weights(L);
      for (int j = 0; j <= nl; ++j)
        if (w[j] != 0.0) t.emplace_back(i, j, b / d * w[j]);
    }
  }
  for (int k = 1; k < nr; ++k) {
    const int i = off + k;
    t.emplace_back(i, i - 1, 1.0 / (hr * hr));
    t.emplace_back(i, i, -2.0 / (hr * hr));
    t.emplace_back(i, i + 1, 1.0 / (hr * hr));
  }
  // Right outer end z = +1.
  const int last = off + nr;
  t.emplace_back(last, last - 1, 2.0 / (hr * hr));
  t.emplace_back(last, last, -2.0 / (hr * hr) - 2.0 * cp / hr);

  const auto n = static_cast<Eigen::Index>(grid.size());
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

GridFunction split_from(const SplitGrid& grid, const Vector& left, const Vector& right) {
  Vector v(static_cast<Eigen::Index>(grid.size()));
  v << left, right;
  return {grid, std::move(v)};
}

}  // namespace

void MembraneParams::validate() const {
  check_unit(p, "p");
  check_unit(q, "q");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha", "must be nonnegative");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta", "must be nonnegative");
  if (mu.lo != -1.0 || mu.hi != 0.0) throw ParameterError("mu", "must live on [-1, 0]");
  if (nu.lo != 0.0 || nu.hi != 1.0) throw ParameterError("nu", "must live on [0, 1]");
  mu.validate("mu");
  nu.validate("nu");
}

MembraneOperator assemble_A0(const MembraneParams& params, const SplitGrid& grid,
                             const RobinCoefficients& robin) {
  params.validate();
  return {params, grid, std::nullopt, MembraneKind::A0, robin,
          membrane_rows(params, grid, 0.0, 0.0, robin.c_minus, robin.c_plus)};
}

MembraneOperator assemble_APhi(const MembraneParams& params, const SplitGrid& grid, double eps,
                               const RobinCoefficients& robin) {
  params.validate();
  check_eps(eps);
  const double e2 = eps * eps;
  return {params, grid, eps, MembraneKind::APhi, robin,
          membrane_rows(params, grid, e2 * params.alpha, e2 * params.beta, e2 * robin.c_minus,
                        e2 * robin.c_plus)};
}

MembraneOperator assemble_Aeps(const MembraneParams& params, const SplitGrid& grid, double eps,
                               const RobinCoefficients& robin) {
  MembraneOperator op = assemble_APhi(params, grid, eps, robin);
  op.kind = MembraneKind::Aeps;
  op.rows *= 1.0 / (eps * eps);
  return op;
}

std::array<double, 2> phi_functional(const MembraneParams& params, const GridFunction& f) {
  const SplitGrid& g = f.split_grid();
  const double nu_f = params.nu.weights(g.right()).dot(f.right_values());
  const double mu_f = params.mu.weights(g.left()).dot(f.left_values());
  return {params.alpha * (nu_f - f[g.minus_index()]), params.beta * (mu_f - f[g.plus_index()])};
}

double m_lambda_scaled(double r, double lambda) {
  check_unit(r, "r");
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  const double s = std::sqrt(lambda);
  const double e2 = std::exp(-2.0 * s);
  return 0.5 * (r * lambda * (1.0 + e2) + (1.0 - r) * s * (1.0 - e2));
}

double m_lambda(double r, double lambda) {
  check_unit(r, "r");
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  const double s = std::sqrt(lambda);
  if (s > 30.0) return std::exp(s) * m_lambda_scaled(r, lambda);
  return r * lambda * std::cosh(s) + (1.0 - r) * s * std::sinh(s);
}

double greiner_contraction_bound(const MembraneParams& params, double lambda,
                                 std::optional<double> eps) {
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  const double e = eps.value_or(1.0);
  check_eps(e);
  const double rate = std::max(params.alpha, params.beta);
  if (rate == 0.0) return 0.0;
  const double lam = e * e * lambda;
  const double s = std::sqrt(lam);
  const double cosh_scaled = 0.5 * (1.0 + std::exp(-2.0 * s));
  double worst = 0.0;
  for (double r : {params.p, params.q})
    worst = std::max(worst, e * e * cosh_scaled / m_lambda_scaled(r, lam));
  return 2.0 * rate * worst;
}

double greiner_threshold(const MembraneParams& params, std::optional<double> eps) {
  double lo = 1e-12;
  double hi = 1e12;
  if (greiner_contraction_bound(params, lo, eps) < 1.0) return lo;
  if (greiner_contraction_bound(params, hi, eps) >= 1.0)
    throw NumericalFailure("greiner_threshold: bound stays above 1 up to lambda = 1e12");
  while (hi / lo > 1.0 + 1e-10) {
    const double mid = std::sqrt(lo * hi);
    if (greiner_contraction_bound(params, mid, eps) < 1.0) hi = mid; else lo = mid;
  }
  return hi;
}

GridFunction decoupled_resolvent(const MembraneParams& params, double lambda,
                                 const GridFunction& g) {
  const SplitGrid& grid = g.split_grid();
  const GridFunction gl(grid.left(), g.left_values());
  const GridFunction gr(grid.right(), g.right_values());
  const GridFunction fl = resolvent_closed_form(params.p, lambda, gl);
  const GridFunction fr = resolvent_closed_form(params.q, lambda, gr);
  return split_from(grid, fl.values(), fr.values());
}

GridFunction greiner_resolvent(const MembraneParams& params, double lambda, const GridFunction& g,
                               std::optional<double> eps) {
  params.validate();
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  const double e = eps.value_or(1.0);
  check_eps(e);
  const double bound = greiner_contraction_bound(params, lambda, eps);
  if (bound >= 1.0)
    throw ResolventThresholdError("greiner_resolvent: lambda = " + std::to_string(lambda) +
                                      " is below the contraction threshold",
                                  greiner_threshold(params, eps));

  // (lambda - A^eps)^{-1} g = (eps^2 lambda - A_{eps^2 Phi})^{-1} (eps^2 g).
  const double e2 = e * e;
  const double lam = e2 * lambda;
  const double a = e2 * params.alpha;
  const double b = e2 * params.beta;
  const SplitGrid& grid = g.split_grid();
  const GridFunction g0 = decoupled_resolvent(params, lam, g.with_values(e2 * g.values()));

  const double s = std::sqrt(lam);
  const Vector xl = grid.left().nodes();
  const Vector xr = grid.right().nodes();
  const Vector k1 = 0.5 * ((s * xl.array()).exp() + (-s * (xl.array() + 2.0)).exp()).matrix();
  const Vector k2 = 0.5 * ((-s * xr.array()).exp() + (s * (xr.array() - 2.0)).exp()).matrix();
  const double k0 = 0.5 * (1.0 + std::exp(-2.0 * s));

  const Vector wnu = params.nu.weights(grid.right());
  const Vector wmu = params.mu.weights(grid.left());
  const Vector g0l = g0.left_values();
  const Vector g0r = g0.right_values();

  Eigen::Matrix2d m;
  m << m_lambda_scaled(params.p, lam) + a * k0, -a * wnu.dot(k2),
      -b * wmu.dot(k1), m_lambda_scaled(params.q, lam) + b * k0;
  const Eigen::Vector2d rhs(a * (wnu.dot(g0r) - g0[grid.minus_index()]),
                            b * (wmu.dot(g0l) - g0[grid.plus_index()]));
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-300))
    throw ResolventThresholdError("greiner_resolvent: singular 2x2 system", greiner_threshold(params, eps));
  const Eigen::Vector2d coef = m.partialPivLu().solve(rhs);
  return split_from(grid, coef[0] * k1 + g0l, coef[1] * k2 + g0r);
}

std::array<double, 2> projection_Ppq(double p, double q, const GridFunction& f) {
  check_unit(p, "p");
  check_unit(q, "q");
  const SplitGrid& g = f.split_grid();
  const double il = trapezoid_integral(g.left(), f.left_values());
  const double ir = trapezoid_integral(g.right(), f.right_values());
  return {p * f[g.minus_index()] + (1.0 - p) * il, q * f[g.plus_index()] + (1.0 - q) * ir};
}

Eigen::Matrix2d TwoStateGenerator::matrix() const {
  Eigen::Matrix2d m;
  m << -alpha, alpha, beta, -beta;
  return m;
}

Eigen::Matrix2d expm_B(const TwoStateGenerator& b, double t) {
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  const double rate = b.alpha + b.beta;
  if (rate == 0.0) return Eigen::Matrix2d::Identity();
  Eigen::Matrix2d pi;
  pi << b.beta, b.alpha, b.beta, b.alpha;
  pi /= rate;
  return pi + std::exp(-rate * t) * (Eigen::Matrix2d::Identity() - pi);
}

Eigen::Matrix2d expm_2x2(const Eigen::Matrix2d& m, double t) {
  const double tau = m.trace();
  const double d = 0.25 * tau * tau - m.determinant();
  const Eigen::Matrix2d shifted = m - 0.5 * tau * Eigen::Matrix2d::Identity();
  double c = 0.0;
  double s = 0.0;  // sinh(sqrt(d) t) / sqrt(d)
  const double x2 = d * t * t;
  if (std::abs(x2) < 1e-8) {
    c = 1.0 + 0.5 * x2 + x2 * x2 / 24.0;
    s = t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  } else if (d > 0.0) {
    const double r = std::sqrt(d);
    c = std::cosh(r * t);
    s = std::sinh(r * t) / r;
  } else {
    const double r = std::sqrt(-d);
    c = std::cos(r * t);
    s = std::sin(r * t) / r;
  }
  return std::exp(0.5 * tau * t) * (c * Eigen::Matrix2d::Identity() + s * shifted);
}

std::vector<StepSegment> kurtz_schedule(double eps, double t) {
  return {{0.1 * t, std::min(eps * eps, t / 100.0)}, {0.9 * t, t / 1000.0}};
}

std::vector<KurtzRow> kurtz_sweep(const MembraneParams& params, const GridFunction& f, double t,
                                  const std::vector<double>& eps_list, const KurtzOptions& opts) {
  params.validate();
  if (!(t > 0.0)) throw ParameterError("t", "horizon must be positive");
  const SplitGrid& grid = f.split_grid();
  const auto proj = projection_Ppq(params.p, params.q, f);
  const Eigen::Vector2d lim =
      expm_B({params.alpha, params.beta}, t) * Eigen::Vector2d(proj[0], proj[1]);
  const GridFunction target = GridFunction::lift(grid, lim[0], lim[1]);

  std::vector<KurtzRow> out;
  for (double eps : eps_list) {
    const auto t0 = std::chrono::steady_clock::now();
    const MembraneOperator op = assemble_Aeps(params, grid, eps);
    GeneratorStepper stepper(op.rows, opts.scheme);
    Vector u;
    try {
      u = stepper.evolve(f.values(), kurtz_schedule(eps, t));
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("kurtz_sweep at eps = " + std::to_string(eps) + ": " + e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const double err = sup_norm(Vector(u - target.values()));
    out.push_back({eps, err, ms, f.with_values(std::move(u))});
  }
  return out;
}

std::vector<ResolventGapRow> aeps_resolvent_limit_check(const MembraneParams& params,
                                                        double lambda, const GridFunction& g,
                                                        const std::vector<double>& eps_list) {
  const SplitGrid& grid = g.split_grid();
  const auto proj = projection_Ppq(params.p, params.q, g);
  const Eigen::Matrix2d shifted =
      lambda * Eigen::Matrix2d::Identity() - TwoStateGenerator{params.alpha, params.beta}.matrix();
  const Eigen::Vector2d lim = shifted.partialPivLu().solve(Eigen::Vector2d(proj[0], proj[1]));
  const GridFunction target = GridFunction::lift(grid, lim[0], lim[1]);
  const GridFunction r0 = decoupled_resolvent(params, lambda, g);

  std::vector<ResolventGapRow> out;
  for (double eps : eps_list) {
    const GridFunction f = greiner_resolvent(params, lambda, g, eps);
    MembraneParams slow = params;
    slow.alpha *= eps * eps;
    slow.beta *= eps * eps;
    const GridFunction fast = greiner_resolvent(slow, lambda, g);
    out.push_back({eps, sup_norm(Vector(f.values() - target.values())),
                   sup_norm(Vector(fast.values() - r0.values()))});
  }
  return out;
}

}  // namespace thinlayer
