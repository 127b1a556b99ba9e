#pragma once

// Small linear-algebra kit: tridiagonal elimination, generator checks,
// matrix exponentials and the implicit time steppers used by every module.

#include <Eigen/SparseLU>

#include <map>
#include <memory>
#include <vector>

#include "thinlayer/grid.hpp"

namespace thinlayer {

/// Tridiagonal matrix; lower[i] couples row i to i-1, upper[i] couples row i
/// to i+1 (lower[0] and upper[n-1] are ignored).
struct Tridiagonal {
  Vector lower;
  Vector diag;
  Vector upper;

  Eigen::Index size() const noexcept { return diag.size(); }
  Vector apply(const Vector& f) const;
  /// Thomas elimination without pivoting; throws NumericalFailure on a
  /// vanishing pivot.
  Vector solve(const Vector& rhs) const;
  /// a * I + b * this.
  Tridiagonal shifted(double a, double b) const;
  SparseMatrix to_sparse() const;
};

/// Nonnegative off-diagonal entries.
bool is_metzler(const SparseMatrix& a);
/// max_i |sum_j a_ij|.
double max_abs_row_sum(const SparseMatrix& a);

Matrix expm(const Matrix& a);

enum class Scheme { implicit_euler, crank_nicolson, exact };

/// A piece of a time-step schedule: advance `duration` with steps of `dt`,
/// the last step shortened so the piece ends exactly.
struct StepSegment {
  double duration;
  double dt;
};

/// Advances f' = A f for a fixed sparse generator. Factorizations (or dense
/// propagators for Scheme::exact) are cached per step length, so a stepper
/// is a per-run working object, not something to share across threads.
class GeneratorStepper {
 public:
  GeneratorStepper(SparseMatrix generator, Scheme scheme);

  const SparseMatrix& generator() const noexcept { return a_; }
  Scheme scheme() const noexcept { return scheme_; }

  Vector step(const Vector& f, double dt);
  Vector evolve(Vector f, double t, double dt);
  Vector evolve(Vector f, const std::vector<StepSegment>& schedule);

 private:
  struct Propagator {
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
    SparseMatrix lhs;            // I - theta dt A
    SparseMatrix explicit_part;  // Crank-Nicolson (I + dt/2 A)
    Matrix dense;                // exact e^{dt A}
  };
  Propagator& propagator(double dt);

  SparseMatrix a_;
  Scheme scheme_;
  std::map<double, Propagator> cache_;
};

/// Throws NumericalFailure if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* context);

}  // namespace thinlayer
