#include <benchmark/benchmark.h>

#include "gda/dynamics.hpp"
#include "gda/spectral.hpp"

using namespace gda;
using operators::Algorithm;

namespace {

static void BM_Eigenvalues(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto g = games::gen_scsc(dim, 1, 0.05);
  const auto op = operators::alt_operator(g, 0.1);
  for (auto _ : state) {
    auto spec = linalg::eigenvalues(op.matrix);
    benchmark::DoNotOptimize(spec.values.data());
  }
  state.SetComplexityN(2 * dim);
}
BENCHMARK(BM_Eigenvalues)->Arg(10)->Arg(25)->Arg(50)->Arg(100)->Complexity();

static void BM_BuildAltOperator(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto g = games::gen_scsc(dim, 1, 0.05);
  for (auto _ : state) {
    auto op = operators::alt_operator(g, 0.1);
    benchmark::DoNotOptimize(op.matrix.data().data());
  }
}
BENCHMARK(BM_BuildAltOperator)->Arg(25)->Arg(100);

static void BM_TuneDense(benchmark::State& state) {
  const auto g = games::gen_scsc(static_cast<int>(state.range(0)), 1, 0.05);
  const auto grid = linalg::logspace(1e-3, 1.0, 25);
  for (auto _ : state) {
    auto res = spectral::tune(g, Algorithm::AltGda, grid);
    benchmark::DoNotOptimize(res.best_report.rho);
  }
}
BENCHMARK(BM_TuneDense)->Arg(10)->Arg(25);

static void BM_TuneViaJacobianMap(benchmark::State& state) {
  const auto g = games::gen_scsc(static_cast<int>(state.range(0)), 1, 0.05);
  const auto grid = linalg::logspace(1e-3, 1.0, 25);
  for (auto _ : state) {
    auto res = spectral::tune(g, Algorithm::OgdaSim, grid);
    benchmark::DoNotOptimize(res.best_report.rho);
  }
}
BENCHMARK(BM_TuneViaJacobianMap)->Arg(10)->Arg(25)->Arg(100);

static void BM_Trajectory(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto g = games::gen_scsc(dim, 1, 0.05);
  const linalg::Vector init(static_cast<std::size_t>(2 * dim), 1.0);
  dynamics::RunOptions opts;
  opts.max_iters = 1000;
  opts.stop = 0.0;
  opts.record_states = false;
  for (auto _ : state) {
    auto traj = dynamics::run(g, {Algorithm::AltGda, 0.05, {}}, init, opts);
    benchmark::DoNotOptimize(traj.deltas.data());
  }
  state.SetItemsProcessed(state.iterations() * opts.max_iters);
}
BENCHMARK(BM_Trajectory)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
