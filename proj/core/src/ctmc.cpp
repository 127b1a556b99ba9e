#include "thinlayer/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "thinlayer/parallel.hpp"

namespace thinlayer {

namespace {

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Pairwise sum of v[lo, hi).
double pairwise(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

void check_run(const CtmcRun& run) {
  if (run.chain == nullptr) throw ParameterError("generator", "run has no jump chain");
  if (run.paths < 1) throw ParameterError("N", "path count must be at least 1");
  if (!(run.horizon >= 0.0)) throw ParameterError("t", "horizon must be nonnegative");
  if (run.start < 0 || run.start >= run.chain->size())
    throw ParameterError("start", "start node outside the generator");
}

}  // namespace

JumpChain::JumpChain(const SparseMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw ParameterError("generator", "matrix must be square");
  const auto n = static_cast<int>(a.rows());
  rate_.assign(static_cast<std::size_t>(n), 0.0);
  start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    double off = 0.0;
    start_[static_cast<std::size_t>(i)] = cdf_.size();
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      if (it.col() == i) {
        diag = it.value();
      } else if (it.value() < 0.0) {
        throw ParameterError("generator", "negative off-diagonal entry in row " + std::to_string(i));
      } else if (it.value() > 0.0) {
        off += it.value();
        cdf_.push_back(off);
        dest_.push_back(static_cast<int>(it.col()));
      }
    }
    if (std::abs(diag + off) > tol * std::max(1.0, off))
      throw ParameterError("generator", "row " + std::to_string(i) + " does not sum to zero");
    rate_[static_cast<std::size_t>(i)] = off;
    for (std::size_t k = start_[static_cast<std::size_t>(i)]; k < cdf_.size(); ++k) cdf_[k] /= off;
  }
  start_[static_cast<std::size_t>(n)] = cdf_.size();
}

int JumpChain::target(int i, double u) const {
  const auto b = cdf_.begin() + static_cast<std::ptrdiff_t>(start_[static_cast<std::size_t>(i)]);
  const auto e = cdf_.begin() + static_cast<std::ptrdiff_t>(start_[static_cast<std::size_t>(i) + 1]);
  auto it = std::upper_bound(b, e, u);
  if (it == e) --it;
  return dest_[static_cast<std::size_t>(it - cdf_.begin())];
}

std::vector<PathOutcome> simulate_ctmc(const CtmcRun& run, const std::vector<char>& marked) {
  check_run(run);
  const JumpChain& chain = *run.chain;
  if (!marked.empty() && static_cast<int>(marked.size()) != chain.size())
    throw DimensionMismatch("simulate_ctmc: marked set size differs from the generator");
  std::vector<PathOutcome> out(static_cast<std::size_t>(run.paths));
  parallel_for(static_cast<int>(run.paths), [&](int k) {
    auto rng = path_rng(run.seed, static_cast<std::uint64_t>(k));
    int x = run.start;
    double now = 0.0;
    double marked_time = 0.0;
    while (true) {
      const double rate = chain.rate(x);
      double hold = rate > 0.0 ? -std::log1p(-uniform01(rng)) / rate : run.horizon - now;
      const bool done = now + hold >= run.horizon;
      if (done) hold = run.horizon - now;
      if (!marked.empty() && marked[static_cast<std::size_t>(x)]) marked_time += hold;
      if (done) break;
      now += hold;
      x = chain.target(x, uniform01(rng));
    }
    out[static_cast<std::size_t>(k)] = {x, marked_time};
  });
  return out;
}

std::vector<int> simulate_ctmc(const CtmcRun& run) {
  const auto outcomes = simulate_ctmc(run, {});
  std::vector<int> nodes;
  nodes.reserve(outcomes.size());
  for (const auto& o : outcomes) nodes.push_back(o.terminal);
  return nodes;
}

PathEstimate summarize(const std::vector<double>& samples) {
  PathEstimate e;
  e.n = static_cast<long>(samples.size());
  if (samples.empty()) return e;
  e.mean = pairwise(samples, 0, samples.size()) / static_cast<double>(e.n);
  if (e.n > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - e.mean) * (samples[i] - e.mean);
    const double var = pairwise(sq, 0, sq.size()) / static_cast<double>(e.n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(e.n));
  }
  return e;
}

PathEstimate estimate_semigroup(const CtmcRun& run, const Vector& f) {
  check_run(run);
  if (f.size() != run.chain->size())
    throw DimensionMismatch("estimate_semigroup: f has the wrong length");
  const auto nodes = simulate_ctmc(run);
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f[nodes[i]];
  return summarize(v);
}

PathEstimate membrane_occupation(const CtmcRun& run, const std::vector<int>& nodes) {
  check_run(run);
  if (!(run.horizon > 0.0)) throw ParameterError("t", "occupation needs a positive horizon");
  std::vector<char> marked(static_cast<std::size_t>(run.chain->size()), 0);
  for (int i : nodes) {
    if (i < 0 || i >= run.chain->size()) throw ParameterError("nodes", "node outside the generator");
    marked[static_cast<std::size_t>(i)] = 1;
  }
  const auto out = simulate_ctmc(run, marked);
  std::vector<double> v(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].marked_time / run.horizon;
  return summarize(v);
}

}  // namespace thinlayer
