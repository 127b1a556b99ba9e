#pragma once

// Discrete sesquilinear forms of the thin-layer problem,
//   a_eps[u, v] = \int grad_xy u . grad_xy v* + eps^{-2} \int d_z u d_z v*
//               + \int_lo c- u v* + \int_up c+ u v*
//               + \int beta (u(0+) - u(0-)) v*(0+) + \int alpha (u(0-) - u(0+)) v*(0-),
// and the limit form on pairs (u-, u+). Gradients are centered differences
// (one-sided at the boundary and on both faces of the membrane, so z
// derivatives never straddle it); every integral is a trapezoid sum.

#include <complex>
#include <cstdint>
#include <vector>

#include "thinlayer/layer.hpp"

namespace thinlayer {

struct FormContext {
  BaseGrid2D base;
  SplitGrid vertical;
  CoefficientFields coeff;
  double eps = 1.0;

  BaseField trace_up(const LayerField& u) const;     ///< z = +1
  BaseField trace_lo(const LayerField& u) const;     ///< z = -1
  BaseField trace_plus(const LayerField& u) const;   ///< z = 0+
  BaseField trace_minus(const LayerField& u) const;  ///< z = 0-
};

/// Complex field as a real pair.
struct ComplexLayerField {
  LayerField re;
  LayerField im;
};

/// Pieces of the real bilinear form b(u, v): a_eps = gxy + eps^{-2} gz + surface.
struct FormParts {
  double gxy = 0.0;
  double gz = 0.0;
  double surface = 0.0;
};

FormParts form_parts(const FormContext& ctx, const LayerField& u, const LayerField& v);

/// Real bilinear value a_eps[u, v] for real fields.
double form_a_eps(const FormContext& ctx, const LayerField& u, const LayerField& v);
/// Sesquilinear value for complex fields.
std::complex<double> form_a_eps(const FormContext& ctx, const ComplexLayerField& u,
                                const ComplexLayerField& v);
/// Quadratic form a_eps[u] = a_eps[u, u]. The imaginary part is assembled
/// from the antisymmetric surface terms only; the symmetric gradient terms
/// cancel identically.
std::complex<double> form_a_eps(const FormContext& ctx, const ComplexLayerField& u);

/// The p = q = 0 layer generator the form belongs to (mu = nu = delta_0).
LayerOperator form_operator(const FormContext& ctx);

struct DualityReport {
  double form = 0.0;     ///< a_eps[u, v]
  double pairing = 0.0;  ///< <A_eps u, v> in the trapezoid inner product
  double residual = 0.0; ///< |form + pairing|
};

DualityReport duality_check(const FormContext& ctx, const LayerField& u, const LayerField& v);

struct SectorialityReport {
  double gamma = 0.0;               ///< one gamma valid for every sample and eps
  std::vector<double> eps;          ///< scanned eps values
  std::vector<double> gamma_by_eps; ///< least gamma per eps
  bool certified = false;           ///< |Im| <= Re + gamma |u|^2 on all samples
  bool eps_uniform = false;         ///< gamma_by_eps never exceeds its first entry
  int witness = -1;                 ///< sample that drove gamma past the cap
  int samples = 0;
};

/// Draws `samples` random complex fields (half node-wise noise, half smooth
/// random modes) with std::mt19937_64(seed) and finds the least gamma >= 0
/// with |Im a_eps[u]| <= Re a_eps[u] + gamma |u|^2 over all samples and eps.
SectorialityReport sectoriality_scan(const FormContext& ctx, int samples, std::uint64_t seed,
                                     const std::vector<double>& eps_list,
                                     double gamma_cap = 1e8);

/// The six-term limit form on pairs, with the coefficients of ctx.
double limit_form(const FormContext& ctx, const LimitState& u, const LimitState& v);

}  // namespace thinlayer
