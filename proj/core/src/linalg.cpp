#include "thinlayer/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

namespace thinlayer {

Vector Tridiagonal::apply(const Vector& f) const {
  const Eigen::Index n = size();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = diag[i] * f[i];
    if (i > 0) s += lower[i] * f[i - 1];
    if (i + 1 < n) s += upper[i] * f[i + 1];
    out[i] = s;
  }
  return out;
}

Vector Tridiagonal::solve(const Vector& rhs) const {
  const Eigen::Index n = size();
  if (rhs.size() != n) throw DimensionMismatch("Tridiagonal::solve: size mismatch");
  Vector c(n);
  Vector d(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw NumericalFailure("tridiagonal solve: zero pivot at row 0");
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot))
      throw NumericalFailure("tridiagonal solve: singular pivot at row " + std::to_string(i));
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

Tridiagonal Tridiagonal::shifted(double a, double b) const {
  Tridiagonal t{b * lower, b * diag, b * upper};
  t.diag.array() += a;
  return t;
}

SparseMatrix Tridiagonal::to_sparse() const {
  const Eigen::Index n = size();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(3 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0 && lower[i] != 0.0) trips.emplace_back(i, i - 1, lower[i]);
    if (diag[i] != 0.0) trips.emplace_back(i, i, diag[i]);
    if (i + 1 < n && upper[i] != 0.0) trips.emplace_back(i, i + 1, upper[i]);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

bool is_metzler(const SparseMatrix& a) {
  for (Eigen::Index i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.row() != it.col() && it.value() < 0.0) return false;
  return true;
}

double max_abs_row_sum(const SparseMatrix& a) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

Matrix expm(const Matrix& a) { return a.exp(); }

void require_finite(const Vector& v, const char* context) {
  if (!v.allFinite()) throw NumericalFailure(std::string(context) + ": non-finite values");
}

GeneratorStepper::GeneratorStepper(SparseMatrix generator, Scheme scheme)
    : a_(std::move(generator)), scheme_(scheme) {
  if (a_.rows() != a_.cols()) throw DimensionMismatch("GeneratorStepper: generator not square");
}

GeneratorStepper::Propagator& GeneratorStepper::propagator(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  Propagator p;
  const Eigen::Index n = a_.rows();
  SparseMatrix id(n, n);
  id.setIdentity();
  switch (scheme_) {
    case Scheme::implicit_euler:
    case Scheme::crank_nicolson: {
      const double theta = scheme_ == Scheme::implicit_euler ? 1.0 : 0.5;
      Eigen::SparseMatrix<double> lhs = id - (theta * dt) * a_;
      lhs.makeCompressed();
      p.lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
      p.lu->compute(lhs);
      p.lhs = lhs;
      if (p.lu->info() != Eigen::Success)
        throw NumericalFailure("implicit step: factorization of (I - dt A) failed");
      if (scheme_ == Scheme::crank_nicolson) p.explicit_part = id + (0.5 * dt) * a_;
      break;
    }
    case Scheme::exact: {
      p.dense = expm(Matrix(a_) * dt);
      // Squaring doubles the row-sum rounding each time, so for a Markov
      // generator rebuild the diagonal from the (nonnegative) off-diagonal mass.
      const double scale = std::max(1.0, a_.coeffs().cwiseAbs().maxCoeff());
      if (is_metzler(a_) && max_abs_row_sum(a_) <= 1e-13 * scale) {
        for (Eigen::Index i = 0; i < p.dense.rows(); ++i) {
          double off = 0.0;
          for (Eigen::Index j = 0; j < p.dense.cols(); ++j) {
            if (j == i) continue;
            p.dense(i, j) = std::max(p.dense(i, j), 0.0);
            off += p.dense(i, j);
          }
          p.dense(i, i) = 1.0 - off;
        }
      }
      break;
    }
  }
  return cache_.emplace(dt, std::move(p)).first->second;
}

Vector GeneratorStepper::step(const Vector& f, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt", "time step must be positive");
  Propagator& p = propagator(dt);
  Vector out;
  switch (scheme_) {
    case Scheme::implicit_euler:
    case Scheme::crank_nicolson: {
      const Vector rhs = scheme_ == Scheme::implicit_euler ? f : Vector(p.explicit_part * f);
      out = p.lu->solve(rhs);
      // One refinement sweep keeps conservation at rounding level over long runs.
      out += p.lu->solve(Vector(rhs - p.lhs * out));
      break;
    }
    case Scheme::exact:
      out = p.dense * f;
      break;
  }
  require_finite(out, "time stepping");
  return out;
}

Vector GeneratorStepper::evolve(Vector f, double t, double dt) {
  return evolve(std::move(f), std::vector<StepSegment>{{t, dt}});
}

Vector GeneratorStepper::evolve(Vector f, const std::vector<StepSegment>& schedule) {
  for (const auto& seg : schedule) {
    if (seg.duration < 0.0) throw ParameterError("t", "time must be nonnegative");
    if (!(seg.dt > 0.0)) throw ParameterError("dt", "time step must be positive");
    if (seg.duration == 0.0) continue;
    const auto full = static_cast<long>(std::floor(seg.duration / seg.dt * (1.0 + 1e-12)));
    for (long k = 0; k < full; ++k) f = step(f, seg.dt);
    const double rest = seg.duration - full * seg.dt;
    if (rest > 1e-14 * seg.duration) f = step(f, rest);
  }
  return f;
}

}  // namespace thinlayer
