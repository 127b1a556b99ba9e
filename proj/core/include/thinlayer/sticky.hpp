#pragma once

// Sticky-boundary diffusion on a single interval.
//
// G_r f = f'' on [0, 1] with r f''(0) - (1 - r) f'(0) = 0 and f'(1) = 0
// (side = right), or its mirror image on [-1, 0] with the sticky point at 0
// and a reflecting end at -1 (side = left). r = 0 is a reflecting boundary,
// r = 1 an absorbing trap.

#include <vector>

#include "thinlayer/grid.hpp"
#include "thinlayer/linalg.hpp"

namespace thinlayer {

/// Finite-volume generator of G_r on a uniform grid.
///
/// Interior nodes carry the standard second difference, the reflecting end
/// the ghost-reflected row 2(f_{n-1} - f_n)/h^2. For r < 1 the sticky node
/// carries the mass w0 = r/(1-r) + h/2 and the row (f_1 - f_0)/(h w0); for
/// r = 1 its row is zero. The matrix is Metzler with zero row sums and, for
/// r < 1, self-adjoint with respect to the node masses.
struct StickyOperator {
  double r;
  IntervalGrid grid;
  Side side;
  Tridiagonal rows;

  int sticky_index() const noexcept { return side == Side::right ? 0 : grid.cells(); }
  SparseMatrix matrix() const { return rows.to_sparse(); }
  /// Node weights of the discrete invariant probability: r + (1-r)h/2 at the
  /// sticky node, (1-r) x trapezoid weight elsewhere. For r < 1 the matrix
  /// satisfies w_i a_ij = w_j a_ji.
  Vector invariant_weights() const;
};

StickyOperator assemble_sticky(double r, const IntervalGrid& grid, Side side = Side::right);

/// Closed-form resolvent (lambda - G_r)^{-1} g evaluated at the nodes of g's
/// grid ([0, 1] for G_r, [-1, 0] for the mirrored generator). The free-space
/// part h(x) = (1/2 sqrt(lambda)) \int e^{-sqrt(lambda)|x-y|} g(y) dy uses the
/// trapezoid rule. For sqrt(lambda) > 2 every hyperbolic term is evaluated
/// with the factor e^{sqrt(lambda)} divided out: this avoids overflow and,
/// well before that, the cancellation between the cosh and sinh terms.
GridFunction resolvent_closed_form(double r, double lambda, const GridFunction& g);

/// Same formula, forcing the exponentially rescaled branch (for testing the
/// two evaluation paths against each other).
GridFunction resolvent_closed_form_rescaled(double r, double lambda, const GridFunction& g);

/// Solves (lambda - G) f = g by tridiagonal elimination.
GridFunction resolvent_discrete(const StickyOperator& op, double lambda, const GridFunction& g);

/// P_r g = r g(0) + (1 - r) \int g, as a constant grid function.
GridFunction equilibrium_projection(double r, const GridFunction& g);

/// Approximates e^{t G} f0. The last step is shortened to land on t.
GridFunction evolve(const StickyOperator& op, const GridFunction& f0, double t, double dt,
                    Scheme scheme = Scheme::implicit_euler);

struct DecayFit {
  double omega = 0.0;     ///< fitted exponential rate
  double K = 0.0;         ///< fitted prefactor
  double residual = 0.0;  ///< rms residual of log e(t) on the fitted tail
  std::vector<double> times;
  std::vector<double> errors;  ///< e(t) = |e^{tG} f0 - P_r f0|_inf
};

struct DecayOptions {
  double dt = 1e-3;
  Scheme scheme = Scheme::implicit_euler;
};

/// Evolves f0 over t_grid, records the distance to equilibrium and fits
/// log e(t) = log K - omega t on the tail half of the samples (values below
/// 1e-13 are discarded first).
DecayFit decay_to_equilibrium(const StickyOperator& op, const GridFunction& f0,
                              const std::vector<double>& t_grid, const DecayOptions& opts = {});

/// Kernel of the minimal (killed-at-0) resolvent:
/// f0(x) = 1/(4 sqrt(l) cosh sqrt(l)) \int k_l(x, y) g(y) dy.
double kernel_min(double lambda, double x, double y);
/// k_l(x, y) e^{-sqrt(l)}, finite for every lambda.
double kernel_min_scaled(double lambda, double x, double y);

/// f on [0, 1] extended to [-span, span] by alternating reflection about
/// x = 1 and the sticky image rule about x = 0,
///   F(-x) = 2F(0) e^{-kx} + 2k \int_0^x e^{-k(x-y)} F(y) dy - F(x),  k = (1-r)/r.
/// The convolution integrates the piecewise-linear interpolant of F exactly
/// on each cell, so constants are reproduced for every k.
struct ImagesExtension {
  double r;
  int span;
  IntervalGrid grid;  ///< uniform grid on [-span, span] with the spacing of f
  Vector values;

  /// Linear interpolation; throws RangeError outside [-span, span].
  double operator()(double x) const;
};

ImagesExtension images_extension(const GridFunction& f, double r, int span);

/// C_r(t) f (x) = (f(x + t) + f(x - t)) / 2 on the grid of f.
GridFunction cosine_evaluate(const GridFunction& f, double r, double t);
/// Uses a precomputed extension; throws RangeError if |t| > span - 1.
GridFunction cosine_evaluate(const ImagesExtension& ext, const IntervalGrid& grid, double t);

}  // namespace thinlayer
