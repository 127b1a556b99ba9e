#include <benchmark/benchmark.h>

#include <Eigen/SparseLU>
#include <cmath>

#include "thinlayer/thinlayer.hpp"

using namespace thinlayer;

namespace {

GridFunction smooth(const IntervalGrid& g) {
  return GridFunction::sample(g, [](double x) { return std::exp(-x) * std::cos(2.0 * x); });
}

GridFunction smooth(const SplitGrid& g) {
  return GridFunction::sample(g, [](double z) { return std::cos(2.0 * z) + z; });
}

MembraneParams membrane() {
  MembraneParams m;
  m.p = 0.3;
  m.q = 0.6;
  m.alpha = 1.0;
  m.beta = 0.5;
  m.mu = MeasureSpec::uniform(-1.0, 0.0);
  m.nu = MeasureSpec::uniform(0.0, 1.0);
  return m;
}

void BM_StickyResolventTridiagonal(benchmark::State& state) {
  IntervalGrid g(0.0, 1.0, static_cast<int>(state.range(0)));
  const auto op = assemble_sticky(0.5, g);
  const auto f = smooth(g);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_discrete(op, 1.0, f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StickyResolventTridiagonal)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_StickyResolventClosedForm(benchmark::State& state) {
  IntervalGrid g(0.0, 1.0, static_cast<int>(state.range(0)));
  const auto f = smooth(g);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_closed_form(0.5, 1.0, f));
}
BENCHMARK(BM_StickyResolventClosedForm)->RangeMultiplier(4)->Range(256, 16384);

void BM_MembraneSparseLU(benchmark::State& state) {
  SplitGrid g = SplitGrid::uniform(static_cast<int>(state.range(0)));
  const auto op = assemble_APhi(membrane(), g);
  Eigen::SparseMatrix<double> m = -op.rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) += 4.0;
  const Vector rhs = smooth(g).values();
  for (auto _ : state) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(m);
    benchmark::DoNotOptimize(Vector(lu.solve(rhs)));
  }
}
BENCHMARK(BM_MembraneSparseLU)->Arg(250)->Arg(1000)->Arg(4000);

void BM_GreinerResolvent(benchmark::State& state) {
  SplitGrid g = SplitGrid::uniform(static_cast<int>(state.range(0)));
  const auto prm = membrane();
  const auto f = smooth(g);
  for (auto _ : state) benchmark::DoNotOptimize(greiner_resolvent(prm, 4.0, f));
}
BENCHMARK(BM_GreinerResolvent)->Arg(250)->Arg(1000)->Arg(4000);

void BM_CtmcPaths(benchmark::State& state) {
  IntervalGrid g(0.0, 1.0, static_cast<int>(state.range(0)));
  JumpChain chain(assemble_sticky(0.5, g).matrix());
  const Vector f = smooth(g).values();
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_semigroup({&chain, g.cells() / 2, 0.02, 2000, 1}, f));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_CtmcPaths)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TensorApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BaseGrid2D base(1.0, 1.0, n, n);
  SplitGrid vg = SplitGrid::uniform(16);
  NeumannLaplacian2D lap(base);
  const auto vert = assemble_APhi(membrane(), vg).rows;
  auto u = LayerField::sample(base, vg, [](double x, double y, double z) { return std::cos(x + y) * z; });
  for (auto _ : state) benchmark::DoNotOptimize(tensor_apply(lap.rows, vert, u, TensorMode::sum));
}
BENCHMARK(BM_TensorApply)->Arg(8)->Arg(16)->Arg(32);

void BM_LayerStrangStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BaseGrid2D base(1.0, 1.0, n, n);
  SplitGrid vg = SplitGrid::uniform(16);
  LayerOperator op(base, vg, membrane(), CoefficientFields::constant(base, 0.0, 0.0, 1.0, 0.5), 0.1);
  auto u = LayerField::sample(base, vg, [](double x, double y, double z) { return std::cos(x + y) * z; });
  for (auto _ : state) benchmark::DoNotOptimize(layer_evolve(op, u, 1e-3, 1e-3, SplitMode::strang));
}
BENCHMARK(BM_LayerStrangStep)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
