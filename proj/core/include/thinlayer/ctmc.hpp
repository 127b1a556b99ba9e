#pragma once

// Exact event-driven simulation of a finite continuous-time Markov chain
// given by a conservative Metzler generator.
//
// Path k of a run with seed s draws from std::mt19937_64 seeded with
// std::seed_seq{lo32(s), hi32(s), lo32(k), hi32(k)}; uniforms take the top
// 53 bits, holding times are -log(1 - u) / rate. Results are independent of
// the worker count.

#include <cstdint>
#include <vector>

#include "thinlayer/grid.hpp"

namespace thinlayer {

/// Jump structure of a generator: exit rates and per-row cumulative jump
/// distributions.
class JumpChain {
 public:
  /// Throws ParameterError("generator") unless the matrix is square, Metzler
  /// and has row sums below `tol` in absolute value.
  explicit JumpChain(const SparseMatrix& generator, double tol = 1e-9);

  int size() const noexcept { return static_cast<int>(rate_.size()); }
  double rate(int i) const noexcept { return rate_[i]; }
  /// Target of a jump from i for a uniform u in [0, 1).
  int target(int i, double u) const;

 private:
  std::vector<double> rate_;
  std::vector<std::size_t> start_;
  std::vector<double> cdf_;
  std::vector<int> dest_;
};

struct CtmcRun {
  const JumpChain* chain = nullptr;
  int start = 0;
  double horizon = 0.0;
  long paths = 1;
  std::uint64_t seed = 0;
};

struct PathEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(N)
  long n = 0;
};

struct PathOutcome {
  int terminal = 0;
  double marked_time = 0.0;  ///< time spent in the marked node set
};

/// Terminal node of every path, in path order.
std::vector<int> simulate_ctmc(const CtmcRun& run);

/// Terminal nodes and time spent in `marked` nodes (indicator vector over
/// nodes; empty means none).
std::vector<PathOutcome> simulate_ctmc(const CtmcRun& run, const std::vector<char>& marked);

/// Monte Carlo estimate of E_start f(X_t).
PathEstimate estimate_semigroup(const CtmcRun& run, const Vector& f);

/// Mean fraction of [0, t] spent in the marked nodes.
PathEstimate membrane_occupation(const CtmcRun& run, const std::vector<int>& nodes);

/// Mean and standard error of per-path samples, summed pairwise in order.
PathEstimate summarize(const std::vector<double>& samples);

}  // namespace thinlayer
