#pragma once

// Two-interval transmission operators on [-1, 0-] u [0+, 1]: the decoupled
// generator A_0, the membrane generator A_Phi, its rescaled family A^eps, the
// rank-two resolvent, the two-state limit generator and the singular-limit
// harness.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "thinlayer/grid.hpp"
#include "thinlayer/linalg.hpp"

namespace thinlayer {

/// Probability measure on [lo, hi]: point masses plus an optional density
/// given by its node values on a uniform grid of [lo, hi] (piecewise linear).
struct MeasureSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::pair<double, double>> atoms;  ///< (location, weight)
  std::optional<GridFunction> density;

  static MeasureSpec dirac(double lo, double hi, double x);
  static MeasureSpec uniform(double lo, double hi);

  /// Atom weights plus the trapezoid mass of the density.
  double total_mass() const;
  /// Throws ParameterError(field) unless weights and density are
  /// nonnegative, atoms lie in [lo, hi] and the total mass is 1 (1e-12).
  void validate(const char* field) const;

  /// Node weights on a grid covering [lo, hi]: atoms are split between the
  /// two neighbouring nodes by linear interpolation, the density contributes
  /// trapezoid weight x interpolated density. Normalized to sum to 1.
  Vector weights(const IntervalGrid& grid) const;
};

struct MembraneParams {
  double p = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  MeasureSpec mu = MeasureSpec::dirac(-1.0, 0.0, 0.0);  ///< landing law of 0+ -> left jumps
  MeasureSpec nu = MeasureSpec::dirac(0.0, 1.0, 0.0);   ///< landing law of 0- -> right jumps

  void validate() const;
};

/// Outer-end killing rates for the vertical problem: c_minus at z = -1,
/// c_plus at z = +1 (before eps-scaling).
struct RobinCoefficients {
  double c_minus = 0.0;
  double c_plus = 0.0;
};

enum class MembraneKind { A0, APhi, Aeps };

/// Assembled discrete generator.
///
/// Interior rows are second differences, the outer ends ghost-reflected
/// (with Robin killing when given). At 0- the row is
///   [(1-p)(f(-h) - f(0-))/h + a (nu_h(f) - f(0-))] / (p + (1-p) h/2),
/// a = eps^2 alpha, and symmetrically at 0+ with q, eps^2 beta and mu_h. For
/// p = 0 this is the finite-volume Robin row, for p = 1 the pure jump row.
/// The denominator is the mass of the membrane node under the sticky
/// invariant measure, which makes the discrete fast-slow limit reproduce the
/// rates alpha, beta exactly.
struct MembraneOperator {
  MembraneParams params;
  SplitGrid grid;
  std::optional<double> eps;
  MembraneKind kind;
  RobinCoefficients robin;
  SparseMatrix rows;
};

MembraneOperator assemble_A0(const MembraneParams& params, const SplitGrid& grid,
                             const RobinCoefficients& robin = {});
/// A_{eps^2 Phi}; eps = 1 gives A_Phi.
MembraneOperator assemble_APhi(const MembraneParams& params, const SplitGrid& grid,
                               double eps = 1.0, const RobinCoefficients& robin = {});
/// A^eps = eps^{-2} A_{eps^2 Phi} (Robin rates scaled alike).
MembraneOperator assemble_Aeps(const MembraneParams& params, const SplitGrid& grid, double eps,
                               const RobinCoefficients& robin = {});

/// (alpha [nu(f) - f(0-)], beta [mu(f) - f(0+)]).
std::array<double, 2> phi_functional(const MembraneParams& params, const GridFunction& f);

/// r lambda cosh sqrt(lambda) + (1 - r) sqrt(lambda) sinh sqrt(lambda).
double m_lambda(double r, double lambda);
/// m_lambda(r) e^{-sqrt(lambda)}.
double m_lambda_scaled(double r, double lambda);

/// Bound 2 max(alpha, beta) max_{r in {p,q}} eps^2 cosh(eps sqrt(l)) / m_{eps^2 l}(r)
/// on the norm of L_lambda Phi (for the eps-scaled problem when eps is given).
double greiner_contraction_bound(const MembraneParams& params, double lambda,
                                 std::optional<double> eps = std::nullopt);
/// Smallest lambda (to 1e-10 relative) with contraction bound below 1.
double greiner_threshold(const MembraneParams& params, std::optional<double> eps = std::nullopt);

/// (lambda - A_Phi)^{-1} g, or (lambda - A^eps)^{-1} g when eps is given,
/// via the rank-two correction of the decoupled sticky resolvents.
/// Throws ResolventThresholdError when the contraction bound is >= 1.
GridFunction greiner_resolvent(const MembraneParams& params, double lambda, const GridFunction& g,
                               std::optional<double> eps = std::nullopt);

/// (lambda - A_0)^{-1} g: the two sticky closed forms side by side.
GridFunction decoupled_resolvent(const MembraneParams& params, double lambda,
                                 const GridFunction& g);

/// (p f(0-) + (1-p) \int_{-1}^0 f, q f(0+) + (1-q) \int_0^1 f).
std::array<double, 2> projection_Ppq(double p, double q, const GridFunction& f);

/// B = [[-alpha, alpha], [beta, -beta]] on pairs (f-, f+).
struct TwoStateGenerator {
  double alpha = 0.0;
  double beta = 0.0;

  Eigen::Matrix2d matrix() const;
};

Eigen::Matrix2d expm_B(const TwoStateGenerator& b, double t);
/// e^{tM} for a general real 2x2 matrix.
Eigen::Matrix2d expm_2x2(const Eigen::Matrix2d& m, double t);

struct KurtzRow {
  double eps = 0.0;
  double error = 0.0;
  double runtime_ms = 0.0;
  GridFunction field;  ///< e^{t A^eps} f
};

struct KurtzOptions {
  Scheme scheme = Scheme::implicit_euler;
};

/// The eps schedule: dt = min(eps^2, t/100) on the first 10% of [0, t],
/// then t/1000.
std::vector<StepSegment> kurtz_schedule(double eps, double t);

/// For each eps: err = |e^{t A^eps} f - lift(e^{tB} P_{p,q} f)|_inf on f's grid.
std::vector<KurtzRow> kurtz_sweep(const MembraneParams& params, const GridFunction& f, double t,
                                  const std::vector<double>& eps_list,
                                  const KurtzOptions& opts = {});

struct ResolventGapRow {
  double eps = 0.0;
  double limit_gap = 0.0;  ///< |(l - A^eps)^{-1} g - lift((l - B)^{-1} P g)|
  double fast_gap = 0.0;   ///< |(l - eps^2 A^eps)^{-1} g - (l - A_0)^{-1} g|
};

std::vector<ResolventGapRow> aeps_resolvent_limit_check(const MembraneParams& params,
                                                        double lambda, const GridFunction& g,
                                                        const std::vector<double>& eps_list);

}  // namespace thinlayer
