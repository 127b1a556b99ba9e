#pragma once

// The rescaled thin-layer operator A_eps = Delta_2D + eps^{-2} d_z^2 on
// base x [-1, 0-] u [0+, 1], with Robin ends and membrane transmission, and
// its linear and semilinear evolutions.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "thinlayer/grid.hpp"
#include "thinlayer/linalg.hpp"
#include "thinlayer/membrane.hpp"

namespace thinlayer {

/// Five-point Neumann Laplacian on a rectangle with ghost-reflected sides.
/// rows = I_y (x) D_x + D_y (x) I_x for the x-fastest base numbering.
struct NeumannLaplacian2D {
  BaseGrid2D grid;
  Tridiagonal dx;
  Tridiagonal dy;
  SparseMatrix rows;

  explicit NeumannLaplacian2D(const BaseGrid2D& g);
};

/// 1D Neumann second-difference matrix on a grid.
Tridiagonal neumann_1d(const IntervalGrid& g);

enum class HorizontalScheme { adi, exact, implicit_euler };

/// e^{t Delta} f0. adi is Peaceman-Rachford on the two factors; exact uses
/// the dense exponentials of the 1D factors.
BaseField evolve2d(const NeumannLaplacian2D& lap, const BaseField& f0, double t, double dt,
                   HorizontalScheme scheme = HorizontalScheme::adi);

/// Node-sampled coefficients: killing rates at z = -1 (c_minus) and z = +1
/// (c_plus), membrane rates alpha (0- -> 0+) and beta (0+ -> 0-).
struct CoefficientFields {
  BaseField c_minus;
  BaseField c_plus;
  BaseField alpha;
  BaseField beta;

  static CoefficientFields constant(const BaseGrid2D& g, double c_minus, double c_plus,
                                    double alpha, double beta);
  bool spatially_constant() const;
  bool conservative() const;  ///< c_minus = c_plus = 0 everywhere
  /// Throws ParameterError if alpha or beta is negative somewhere.
  void validate() const;
};

/// Pointwise reaction F with a declared global Lipschitz constant.
struct ReactionTerm {
  std::function<double(double)> f;
  double lipschitz = 0.0;
  bool affine = false;  ///< F(u) = slope * u
  double slope = 0.0;
  std::string name = "custom";

  static ReactionTerm zero();
  static ReactionTerm linear(double slope);
  /// u (1 - u) evaluated with u clamped to [0, 1]; Lipschitz constant 1.
  static ReactionTerm clipped_logistic();

  double operator()(double u) const { return affine ? slope * u : f(u); }
  /// Checks F(0) = 0 and the Lipschitz bound on `pairs` random pairs in
  /// [-range, range]; throws ParameterError("reaction") on violation.
  void check(int pairs = 256, double range = 2.0, unsigned long long seed = 7) const;
};

/// Traces of a layer field on the two membrane sides.
struct LimitState {
  BaseField u_minus;
  BaseField u_plus;
};

/// The layer generator. p, q, mu and nu come from `params`; the rates alpha,
/// beta and the Robin coefficients come from `coeff` (node-sampled).
class LayerOperator {
 public:
  LayerOperator(const BaseGrid2D& base, const SplitGrid& vertical, MembraneParams params,
                CoefficientFields coeff, double eps);

  const NeumannLaplacian2D& laplacian() const noexcept { return lap_; }
  const SplitGrid& vertical_grid() const noexcept { return vertical_; }
  const MembraneParams& params() const noexcept { return params_; }
  const CoefficientFields& coefficients() const noexcept { return coeff_; }
  double eps() const noexcept { return eps_; }
  const BaseGrid2D& base_grid() const noexcept { return lap_.grid; }

  /// A^eps of the column above base node b (cached per coefficient tuple).
  const SparseMatrix& vertical_operator(int b) const;
  /// Full sparse matrix Delta (x) I + blockdiag(A^eps_b); for small grids.
  SparseMatrix assemble() const;
  /// Matrix-free application.
  LayerField apply(const LayerField& u) const;

 private:
  using Key = std::tuple<double, double, double, double>;
  Key key(int b) const;

  NeumannLaplacian2D lap_;
  SplitGrid vertical_;
  MembraneParams params_;
  CoefficientFields coeff_;
  double eps_;
  mutable std::map<Key, SparseMatrix> cache_;
};

enum class SplitMode { factored, strang };

struct LayerOptions {
  Scheme vertical = Scheme::exact;
  HorizontalScheme horizontal = HorizontalScheme::exact;
};

/// e^{t A_eps} u0. factored requires constant alpha, beta and c = 0 and
/// applies the two factor semigroups once each; strang uses dt-steps of
/// half vertical, full horizontal, half vertical. Throws ConfigError when
/// factored is requested for coefficients it cannot handle.
LayerField layer_evolve(const LayerOperator& op, const LayerField& u0, double t, double dt,
                        SplitMode mode, const LayerOptions& opts = {});

/// Strang splitting of u' = A u + F(u): half linear step, reaction over dt
/// (exact for affine F, RK4 otherwise), half linear step.
LayerField semilinear_evolve(const LayerOperator& op, const LayerField& u0, double t, double dt,
                             const ReactionTerm& reaction, SplitMode mode = SplitMode::strang,
                             const LayerOptions& opts = {});

/// Vertical averages over each half (the p = q = 0 projection).
LimitState project_P(const LayerField& u);
/// p u(0-) + (1-p) average below, q u(0+) + (1-q) average above.
LimitState project_Ppq3d(double p, double q, const LayerField& u);
/// Piecewise-constant lift of a limit state to the layer.
LayerField lift(const LimitState& s, const SplitGrid& vertical);

}  // namespace thinlayer
