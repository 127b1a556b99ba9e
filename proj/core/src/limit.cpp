#include "thinlayer/limit.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

namespace thinlayer {

namespace {

double rk4(const ReactionTerm& f, double u, double dt) {
  const double k1 = f(u);
  const double k2 = f(u + 0.5 * dt * k1);
  const double k3 = f(u + 0.5 * dt * k2);
  const double k4 = f(u + dt * k3);
  return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void react(const ReactionTerm& f, Vector& v, double dt) {
  if (f.affine) {
    if (f.slope != 0.0) v *= std::exp(f.slope * dt);
  } else {
    v = v.unaryExpr([&](double x) { return rk4(f, x, dt); });
  }
  if (!v.allFinite()) throw NumericalFailure("limit_evolve: reaction substep diverged");
}

}  // namespace

LimitState coupling_step(const CoefficientFields& coeff, const LimitState& s, double dt) {
  using Key = std::tuple<double, double, double, double>;
  std::map<Key, Eigen::Matrix2d> cache;
  LimitState out = s;
  const auto nb = static_cast<int>(s.u_minus.values.size());
  for (int b = 0; b < nb; ++b) {
    const double a = coeff.alpha.values[b];
    const double be = coeff.beta.values[b];
    const double cm = coeff.c_minus.values[b];
    const double cp = coeff.c_plus.values[b];
    const Key k{a, be, cm, cp};
    auto it = cache.find(k);
    if (it == cache.end()) {
      Eigen::Matrix2d m;
      m << -a - cm, a, be, -be - cp;
      it = cache.emplace(k, expm_2x2(m, dt)).first;
    }
    const Eigen::Matrix2d& e = it->second;
    const double lo = s.u_minus.values[b];
    const double hi = s.u_plus.values[b];
    out.u_minus.values[b] = e(0, 0) * lo + e(0, 1) * hi;
    out.u_plus.values[b] = e(1, 0) * lo + e(1, 1) * hi;
  }
  return out;
}

LimitState limit_evolve(const LimitGenerator& gen, const LimitState& s0, double t, double dt,
                        const ReactionTerm& reaction, const LimitOptions& opts) {
  if (!(s0.u_minus.grid == gen.lap.grid) || !(s0.u_plus.grid == gen.lap.grid))
    throw DimensionMismatch("limit_evolve: state and generator grids differ");
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
  LimitState s = s0;
  const bool has_reaction = !(reaction.affine && reaction.slope == 0.0);
  auto diffuse = [&](double tau) {
    s.u_minus = evolve2d(gen.lap, s.u_minus, tau, tau, opts.diffusion);
    s.u_plus = evolve2d(gen.lap, s.u_plus, tau, tau, opts.diffusion);
  };
  auto advance = [&](double tau) {
    diffuse(0.5 * tau);
    if (!has_reaction) {
      s = coupling_step(gen.coeff, s, tau);
    } else {
      s = coupling_step(gen.coeff, s, 0.5 * tau);
      react(reaction, s.u_minus.values, tau);
      react(reaction, s.u_plus.values, tau);
      s = coupling_step(gen.coeff, s, 0.5 * tau);
    }
    diffuse(0.5 * tau);
  };
  if (t == 0.0) return s;
  const auto full = static_cast<long>(std::floor(t / dt * (1.0 + 1e-12)));
  for (long k = 0; k < full; ++k) advance(dt);
  const double rest = t - full * dt;
  if (rest > 1e-14 * t) advance(rest);
  return s;
}

std::vector<CompareRow> compare_full_vs_limit(const CompareConfig& cfg, const LayerField& u0,
                                              double t, const std::vector<double>& eps_list) {
  if (!(u0.base() == cfg.base) || !(u0.vertical() == cfg.vertical))
    throw ConfigError("compare_full_vs_limit: initial field grids differ from the configuration");
  const double t_min = cfg.t_min < 0.0 ? 0.01 * t : cfg.t_min;
  if (!(t > 0.0) || t < t_min)
    throw ConfigError("compare_full_vs_limit: t lies below t_min for the initial transient");

  const LimitState s0 = cfg.projection == ProjectionKind::average
                            ? project_P(u0)
                            : project_Ppq3d(cfg.params.p, cfg.params.q, u0);
  const LimitGenerator gen(cfg.base, cfg.coeff);
  const LimitState s = limit_evolve(gen, s0, t, cfg.dt, cfg.reaction, cfg.limit);
  const LayerField target = lift(s, cfg.vertical);
  const bool linear = cfg.reaction.affine && cfg.reaction.slope == 0.0;

  std::vector<CompareRow> rows;
  for (double eps : eps_list) {
    const auto start = std::chrono::steady_clock::now();
    const LayerOperator op(cfg.base, cfg.vertical, cfg.params, cfg.coeff, eps);
    const LayerField u = linear ? layer_evolve(op, u0, t, cfg.dt, cfg.mode, cfg.layer)
                                : semilinear_evolve(op, u0, t, cfg.dt, cfg.reaction, cfg.mode, cfg.layer);
    const LayerField diff(u.base(), u.vertical(), Vector(u.values() - target.values()));
    const LimitState pu = cfg.projection == ProjectionKind::average
                              ? project_P(u)
                              : project_Ppq3d(cfg.params.p, cfg.params.q, u);
    const double proj = std::max(sup_norm(Vector(pu.u_minus.values - s.u_minus.values)),
                                 sup_norm(Vector(pu.u_plus.values - s.u_plus.values)));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({eps, t, sup_norm(diff), l2_norm(diff), proj, ms});
  }
  return rows;
}

}  // namespace thinlayer
