#pragma once

// The limit master equation on the base:
//   u-' = Delta u- - c- u- + alpha (u+ - u-) + F(u-)
//   u+' = Delta u+ - c+ u+ + beta (u- - u+) + F(u+)
// and the harness comparing it with full thin-layer runs.

#include <vector>

#include "thinlayer/layer.hpp"

namespace thinlayer {

struct LimitGenerator {
  NeumannLaplacian2D lap;
  CoefficientFields coeff;

  LimitGenerator(const BaseGrid2D& grid, CoefficientFields c) : lap(grid), coeff(std::move(c)) {}
};

struct LimitOptions {
  HorizontalScheme diffusion = HorizontalScheme::adi;
};

/// Strang splitting: half diffusion on each component, node-wise coupling
/// over dt (exponential of [[-alpha-c-, alpha], [beta, -beta-c+]], with the
/// reaction sub-split in its middle), half diffusion.
LimitState limit_evolve(const LimitGenerator& gen, const LimitState& s0, double t, double dt,
                        const ReactionTerm& reaction = ReactionTerm::zero(),
                        const LimitOptions& opts = {});

/// One coupling substep of length dt applied node-wise (exposed for tests).
LimitState coupling_step(const CoefficientFields& coeff, const LimitState& s, double dt);

enum class ProjectionKind { average, ppq };

struct CompareConfig {
  BaseGrid2D base;
  SplitGrid vertical;
  MembraneParams params;  ///< p, q, mu, nu (alpha, beta come from coeff)
  CoefficientFields coeff;
  ProjectionKind projection = ProjectionKind::ppq;
  double dt = 1e-3;
  SplitMode mode = SplitMode::strang;
  LayerOptions layer{};
  LimitOptions limit{HorizontalScheme::exact};
  ReactionTerm reaction = ReactionTerm::zero();
  double t_min = -1.0;  ///< negative: 0.01 t
};

struct CompareRow {
  double eps = 0.0;
  double t = 0.0;
  double sup_gap = 0.0;        ///< |u_eps(t) - lift(limit(t))|_inf over the layer
  double l2_gap = 0.0;         ///< same in the trapezoid L2 norm
  double projected_gap = 0.0;  ///< |P u_eps(t) - limit(t)|_inf on the base
  double runtime_ms = 0.0;
};

/// For each eps runs the layer solver from u0 and the limit system from the
/// projected initial state, both to time t. Throws ConfigError if the grids
/// of u0 and cfg differ or t < t_min.
std::vector<CompareRow> compare_full_vs_limit(const CompareConfig& cfg, const LayerField& u0,
                                              double t, const std::vector<double>& eps_list);

}  // namespace thinlayer
