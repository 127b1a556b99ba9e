#include "thinlayer/layer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "thinlayer/parallel.hpp"

namespace thinlayer {

namespace {

// Calls fn(step) for steps of dt covering [0, t], the last one shortened.
template <class Fn>
void for_each_step(double t, double dt, Fn&& fn) {
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
  if (t == 0.0) return;
  const auto full = static_cast<long>(std::floor(t / dt * (1.0 + 1e-12)));
  for (long k = 0; k < full; ++k) fn(dt);
  const double rest = t - full * dt;
  if (rest > 1e-14 * t) fn(rest);
}

Matrix dense(const Tridiagonal& t) { return Matrix(t.to_sparse()); }

// Base vector <-> (ny+1) x (nx+1) matrix, row iy.
Eigen::Map<const RowMatrix> as_image(const BaseGrid2D& g, const Vector& v) {
  return {v.data(), g.ny() + 1, g.nx() + 1};
}

// One horizontal propagation of a base vector over tau.
class HorizontalPropagator {
 public:
  HorizontalPropagator(const NeumannLaplacian2D& lap, HorizontalScheme scheme)
      : lap_(lap), scheme_(scheme) {}

  Vector step(const Vector& f, double tau) {
    const BaseGrid2D& g = lap_.grid;
    RowMatrix m = as_image(g, f);
    switch (scheme_) {
      case HorizontalScheme::exact: {
        auto it = exact_.find(tau);
        if (it == exact_.end())
          it = exact_.emplace(tau, std::make_pair(expm(tau * dense(lap_.dx)),
                                                  expm(tau * dense(lap_.dy)))).first;
        const auto& [ex, ey] = it->second;
        m = ey * m * ex.transpose();
        break;
      }
      case HorizontalScheme::adi: {
        const Tridiagonal lx = lap_.dx.shifted(1.0, -0.5 * tau);
        const Tridiagonal rx = lap_.dx.shifted(1.0, 0.5 * tau);
        const Tridiagonal ly = lap_.dy.shifted(1.0, -0.5 * tau);
        const Tridiagonal ry = lap_.dy.shifted(1.0, 0.5 * tau);
        // (I - tau/2 Dx) u* = (I + tau/2 Dy) u
        for (int ix = 0; ix <= g.nx(); ++ix) m.col(ix) = ry.apply(m.col(ix));
        for (int iy = 0; iy <= g.ny(); ++iy) m.row(iy) = lx.solve(m.row(iy).transpose()).transpose();
        // (I - tau/2 Dy) u = (I + tau/2 Dx) u*
        for (int iy = 0; iy <= g.ny(); ++iy) m.row(iy) = rx.apply(m.row(iy).transpose()).transpose();
        for (int ix = 0; ix <= g.nx(); ++ix) m.col(ix) = ly.solve(m.col(ix));
        break;
      }
      case HorizontalScheme::implicit_euler: {
        const Tridiagonal lx = lap_.dx.shifted(1.0, -tau);
        const Tridiagonal ly = lap_.dy.shifted(1.0, -tau);
        for (int iy = 0; iy <= g.ny(); ++iy) m.row(iy) = lx.solve(m.row(iy).transpose()).transpose();
        for (int ix = 0; ix <= g.nx(); ++ix) m.col(ix) = ly.solve(m.col(ix));
        break;
      }
    }
    Vector out = Eigen::Map<const Vector>(m.data(), m.size());
    require_finite(out, "horizontal step");
    return out;
  }

  /// Advance over t with steps of dt (exact: one step).
  Vector evolve(Vector f, double t, double dt) {
    if (scheme_ == HorizontalScheme::exact) return t > 0.0 ? step(f, t) : f;
    for_each_step(t, dt, [&](double tau) { f = step(f, tau); });
    return f;
  }

 private:
  const NeumannLaplacian2D& lap_;
  HorizontalScheme scheme_;
  std::map<double, std::pair<Matrix, Matrix>> exact_;
};

// Column-wise vertical propagation with per-coefficient caches.
class VerticalPropagator {
 public:
  VerticalPropagator(const LayerOperator& op, Scheme scheme) : scheme_(scheme) {
    const int nb = static_cast<int>(op.base_grid().size());
    group_.resize(nb);
    std::map<const SparseMatrix*, int> index;
    for (int b = 0; b < nb; ++b) {
      const SparseMatrix* m = &op.vertical_operator(b);
      auto [it, fresh] = index.emplace(m, static_cast<int>(mats_.size()));
      if (fresh) mats_.push_back(m);
      group_[b] = it->second;
    }
    steppers_.resize(mats_.size());
    dense_.resize(mats_.size());
  }

  /// U (nb x nv, row = column above a base node) advanced over tau in one step.
  void step(RowMatrix& u, double tau) {
    if (scheme_ == Scheme::exact) {
      for (std::size_t k = 0; k < mats_.size(); ++k)
        if (!dense_[k].count(tau)) dense_[k].emplace(tau, expm(tau * Matrix(*mats_[k])));
    } else {
      for (std::size_t k = 0; k < mats_.size(); ++k)
        if (!steppers_[k]) steppers_[k] = std::make_unique<GeneratorStepper>(*mats_[k], scheme_);
    }
    const int nb = static_cast<int>(u.rows());
    if (scheme_ == Scheme::exact) {
      parallel_for(nb, [&](int b) {
        const Matrix& e = dense_[group_[b]].at(tau);
        u.row(b) = (e * u.row(b).transpose()).transpose();
      });
    } else {
      // GeneratorStepper factorizes lazily and is not thread-safe.
      for (int b = 0; b < nb; ++b)
        u.row(b) = steppers_[group_[b]]->step(u.row(b).transpose(), tau).transpose();
    }
  }

  void evolve(RowMatrix& u, double t, double dt) {
    if (scheme_ == Scheme::exact) {
      if (t > 0.0) step(u, t);
      return;
    }
    for_each_step(t, dt, [&](double tau) { step(u, tau); });
  }

 private:
  Scheme scheme_;
  std::vector<const SparseMatrix*> mats_;
  std::vector<int> group_;
  std::vector<std::unique_ptr<GeneratorStepper>> steppers_;
  std::vector<std::map<double, Matrix>> dense_;
};

void horizontal_all(HorizontalPropagator& hp, RowMatrix& u, double tau) {
  for (Eigen::Index iz = 0; iz < u.cols(); ++iz) u.col(iz) = hp.step(u.col(iz), tau);
}

void horizontal_all_evolve(HorizontalPropagator& hp, RowMatrix& u, double t, double dt) {
  for (Eigen::Index iz = 0; iz < u.cols(); ++iz) u.col(iz) = hp.evolve(u.col(iz), t, dt);
}

double rk4(const ReactionTerm& f, double u, double dt) {
  const double k1 = f(u);
  const double k2 = f(u + 0.5 * dt * k1);
  const double k3 = f(u + 0.5 * dt * k2);
  const double k4 = f(u + dt * k3);
  return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_factored(const LayerOperator& op) {
  if (!op.coefficients().spatially_constant() || !op.coefficients().conservative())
    throw ConfigError("factored mode needs spatially constant alpha, beta and c- = c+ = 0; use strang");
}

// One linear step of length tau in the chosen mode.
struct LinearStepper {
  const LayerOperator& op;
  SplitMode mode;
  VerticalPropagator vp;
  HorizontalPropagator hp;

  LinearStepper(const LayerOperator& o, SplitMode m, const LayerOptions& opts)
      : op(o), mode(m), vp(o, opts.vertical), hp(o.laplacian(), opts.horizontal) {}

  void step(RowMatrix& u, double tau) {
    if (mode == SplitMode::factored) {
      vp.step(u, tau);
      horizontal_all(hp, u, tau);
    } else {
      vp.step(u, 0.5 * tau);
      horizontal_all(hp, u, tau);
      vp.step(u, 0.5 * tau);
    }
  }
};

}  // namespace

Tridiagonal neumann_1d(const IntervalGrid& g) {
  const int n = g.cells();
  const double ih2 = 1.0 / (g.h() * g.h());
  const auto m = static_cast<Eigen::Index>(n + 1);
  Tridiagonal t{Vector::Zero(m), Vector::Constant(m, -2.0 * ih2), Vector::Zero(m)};
  for (int i = 1; i < n; ++i) {
    t.lower[i] = ih2;
    t.upper[i] = ih2;
  }
  t.upper[0] = 2.0 * ih2;
  t.lower[n] = 2.0 * ih2;
  return t;
}

NeumannLaplacian2D::NeumannLaplacian2D(const BaseGrid2D& g)
    : grid(g), dx(neumann_1d(g.x_grid())), dy(neumann_1d(g.y_grid())) {
  std::vector<Eigen::Triplet<double>> trips;
  const int nx = g.nx();
  const int ny = g.ny();
  auto add = [&](const Tridiagonal& t, int i, int pos, int stride_base, int stride) {
    const int row = stride_base + pos * stride;
    trips.emplace_back(row, row, t.diag[pos]);
    if (pos > 0) trips.emplace_back(row, row - stride, t.lower[pos]);
    if (pos < i) trips.emplace_back(row, row + stride, t.upper[pos]);
  };
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix) {
      add(dx, nx, ix, g.index(0, iy), 1);
      add(dy, ny, iy, g.index(ix, 0), nx + 1);
    }
  const auto n = static_cast<Eigen::Index>(g.size());
  rows.resize(n, n);
  rows.setFromTriplets(trips.begin(), trips.end());
  rows.makeCompressed();
}

BaseField evolve2d(const NeumannLaplacian2D& lap, const BaseField& f0, double t, double dt,
                   HorizontalScheme scheme) {
  if (!(f0.grid == lap.grid)) throw DimensionMismatch("evolve2d: field and operator grids differ");
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
  HorizontalPropagator hp(lap, scheme);
  return {f0.grid, hp.evolve(f0.values, t, dt)};
}

CoefficientFields CoefficientFields::constant(const BaseGrid2D& g, double c_minus, double c_plus,
                                              double alpha, double beta) {
  return {BaseField::constant(g, c_minus), BaseField::constant(g, c_plus),
          BaseField::constant(g, alpha), BaseField::constant(g, beta)};
}

bool CoefficientFields::spatially_constant() const {
  auto flat = [](const BaseField& f) {
    return f.values.size() == 0 || (f.values.array() == f.values[0]).all();
  };
  return flat(c_minus) && flat(c_plus) && flat(alpha) && flat(beta);
}

bool CoefficientFields::conservative() const {
  return (c_minus.values.array() == 0.0).all() && (c_plus.values.array() == 0.0).all();
}

void CoefficientFields::validate() const {
  if (alpha.values.minCoeff() < 0.0) throw ParameterError("alpha", "must be nonnegative");
  if (beta.values.minCoeff() < 0.0) throw ParameterError("beta", "must be nonnegative");
  if (!c_minus.values.allFinite()) throw ParameterError("cminus", "must be finite");
  if (!c_plus.values.allFinite()) throw ParameterError("cplus", "must be finite");
  if (!(alpha.grid == c_minus.grid && beta.grid == c_minus.grid && c_plus.grid == c_minus.grid))
    throw DimensionMismatch("CoefficientFields: fields live on different grids");
}

ReactionTerm ReactionTerm::zero() {
  ReactionTerm r;
  r.affine = true;
  r.slope = 0.0;
  r.f = [](double) { return 0.0; };
  r.name = "zero";
  return r;
}

ReactionTerm ReactionTerm::linear(double slope) {
  ReactionTerm r;
  r.affine = true;
  r.slope = slope;
  r.lipschitz = std::abs(slope);
  r.f = [slope](double u) { return slope * u; };
  r.name = "linear";
  return r;
}

ReactionTerm ReactionTerm::clipped_logistic() {
  ReactionTerm r;
  r.f = [](double u) {
    const double c = std::clamp(u, 0.0, 1.0);
    return c * (1.0 - c);
  };
  r.lipschitz = 1.0;
  r.name = "logistic";
  return r;
}

void ReactionTerm::check(int pairs, double range, unsigned long long seed) const {
  if (std::abs((*this)(0.0)) > 0.0) throw ParameterError("reaction", "F(0) must be 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-range, range);
  for (int k = 0; k < pairs; ++k) {
    const double a = d(rng);
    const double b = d(rng);
    if (std::abs((*this)(a) - (*this)(b)) > lipschitz * std::abs(a - b) * (1.0 + 1e-12) + 1e-15)
      throw ParameterError("reaction", "declared Lipschitz constant violated");
  }
}

LayerOperator::LayerOperator(const BaseGrid2D& base, const SplitGrid& vertical,
                             MembraneParams params, CoefficientFields coeff, double eps)
    : lap_(base), vertical_(vertical), params_(std::move(params)), coeff_(std::move(coeff)), eps_(eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("eps", "must lie in (0, 1]");
  if (!(coeff_.alpha.grid == base)) throw DimensionMismatch("LayerOperator: coefficient grid differs");
  coeff_.validate();
  params_.alpha = 0.0;
  params_.beta = 0.0;
  params_.validate();
}

LayerOperator::Key LayerOperator::key(int b) const {
  return {coeff_.alpha.values[b], coeff_.beta.values[b], coeff_.c_minus.values[b],
          coeff_.c_plus.values[b]};
}

const SparseMatrix& LayerOperator::vertical_operator(int b) const {
  const Key k = key(b);
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  MembraneParams prm = params_;
  prm.alpha = std::get<0>(k);
  prm.beta = std::get<1>(k);
  const MembraneOperator m = assemble_Aeps(prm, vertical_, eps_, {std::get<2>(k), std::get<3>(k)});
  return cache_.emplace(k, m.rows).first->second;
}

SparseMatrix LayerOperator::assemble() const {
  const auto nb = static_cast<int>(base_grid().size());
  const auto nv = static_cast<int>(vertical_.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int b = 0; b < nb; ++b)
    for (SparseMatrix::InnerIterator it(lap_.rows, b); it; ++it)
      for (int iz = 0; iz < nv; ++iz)
        trips.emplace_back(b * nv + iz, static_cast<int>(it.col()) * nv + iz, it.value());
  for (int b = 0; b < nb; ++b) {
    const SparseMatrix& v = vertical_operator(b);
    for (int i = 0; i < nv; ++i)
      for (SparseMatrix::InnerIterator it(v, i); it; ++it)
        trips.emplace_back(b * nv + i, b * nv + static_cast<int>(it.col()), it.value());
  }
  SparseMatrix m(nb * nv, nb * nv);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

LayerField LayerOperator::apply(const LayerField& u) const {
  if (!(u.base() == base_grid()) || !(u.vertical() == vertical_))
    throw DimensionMismatch("LayerOperator::apply: field grids differ from the operator");
  LayerField out(u.base(), u.vertical());
  out.as_matrix() = lap_.rows * u.as_matrix();
  const auto nb = static_cast<int>(base_grid().size());
  for (int b = 0; b < nb; ++b)
    out.as_matrix().row(b) += (vertical_operator(b) * u.column(b)).transpose();
  return out;
}

LayerField layer_evolve(const LayerOperator& op, const LayerField& u0, double t, double dt,
                        SplitMode mode, const LayerOptions& opts) {
  if (!(u0.base() == op.base_grid()) || !(u0.vertical() == op.vertical_grid()))
    throw DimensionMismatch("layer_evolve: field grids differ from the operator");
  if (!(t >= 0.0)) throw ParameterError("t", "time must be nonnegative");
  if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
  RowMatrix u = u0.as_matrix();
  if (mode == SplitMode::factored) {
    check_factored(op);
    VerticalPropagator vp(op, opts.vertical);
    HorizontalPropagator hp(op.laplacian(), opts.horizontal);
    vp.evolve(u, t, dt);
    horizontal_all_evolve(hp, u, t, dt);
  } else {
    LinearStepper ls(op, mode, opts);
    for_each_step(t, dt, [&](double tau) { ls.step(u, tau); });
  }
  return LayerField::pack(u0.base(), u0.vertical(), u);
}

LayerField semilinear_evolve(const LayerOperator& op, const LayerField& u0, double t, double dt,
                             const ReactionTerm& reaction, SplitMode mode,
                             const LayerOptions& opts) {
  if (!(u0.base() == op.base_grid()) || !(u0.vertical() == op.vertical_grid()))
    throw DimensionMismatch("semilinear_evolve: field grids differ from the operator");
  if (mode == SplitMode::factored) check_factored(op);
  RowMatrix u = u0.as_matrix();
  LinearStepper ls(op, mode, opts);
  for_each_step(t, dt, [&](double tau) {
    ls.step(u, 0.5 * tau);
    if (reaction.affine) {
      if (reaction.slope != 0.0) u *= std::exp(reaction.slope * tau);
    } else {
      u = u.unaryExpr([&](double x) { return rk4(reaction, x, tau); });
    }
    if (!u.allFinite()) throw NumericalFailure("semilinear_evolve: reaction substep diverged");
    ls.step(u, 0.5 * tau);
  });
  return LayerField::pack(u0.base(), u0.vertical(), u);
}

LimitState project_Ppq3d(double p, double q, const LayerField& u) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p", "must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("q", "must lie in [0, 1]");
  const SplitGrid& v = u.vertical();
  const Vector wl = v.left().trapezoid_weights();
  const Vector wr = v.right().trapezoid_weights();
  const auto nb = static_cast<int>(u.base_size());
  const auto m = u.as_matrix();
  Vector lo(nb);
  Vector hi(nb);
  for (int b = 0; b < nb; ++b) {
    const double il = m.row(b).head(v.left_size()).dot(wl.transpose());
    const double ir = m.row(b).tail(v.right_size()).dot(wr.transpose());
    lo[b] = p * m(b, v.minus_index()) + (1.0 - p) * il;
    hi[b] = q * m(b, v.plus_index()) + (1.0 - q) * ir;
  }
  return {{u.base(), lo}, {u.base(), hi}};
}

LimitState project_P(const LayerField& u) { return project_Ppq3d(0.0, 0.0, u); }

LayerField lift(const LimitState& s, const SplitGrid& vertical) {
  LayerField u(s.u_minus.grid, vertical);
  const auto nb = static_cast<int>(u.base_size());
  auto m = u.as_matrix();
  for (int b = 0; b < nb; ++b) {
    m.row(b).head(vertical.left_size()).setConstant(s.u_minus.values[b]);
    m.row(b).tail(vertical.right_size()).setConstant(s.u_plus.values[b]);
  }
  return u;
}

}  // namespace thinlayer
