#include <benchmark/benchmark.h>

#include "sphoep/catenoid.hpp"
#include "sphoep/comparison.hpp"
#include "sphoep/eigensolver.hpp"
#include "sphoep/model.hpp"

using namespace sphoep;

namespace {

ScalarField model_field(double R, int n_r, int n_theta) {
  const ModelSolution m = model(R);
  return sample_model(m, model_grid(m, n_r, n_theta));
}

void BM_Model(benchmark::State& state) {
  double R = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model(R));
    R = R < 0.9 ? R + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_Model);

void BM_DirichletSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelSolution m = model(0.5);
  const DomainSpec spec = rot_annulus(m.r_minus, m.r_plus, n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_solve(spec));
}
BENCHMARK(BM_DirichletSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NwssCompare(benchmark::State& state) {
  const double R = 0.5;
  const ScalarField f = normalize_to_model(model_field(R, static_cast<int>(state.range(0)), 8), R);
  for (auto _ : state) {
    const NwssReport rep = nwss(f);
    for (const Region& g : rep.regions) {
      benchmark::DoNotOptimize(compare_W(f, pseudo_radial(f, R, rep, g.id), R));
    }
  }
}
BENCHMARK(BM_NwssCompare)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LevelExtract(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField f = model_field(0.25, n, n);
  const double t = 0.5 * model(0.25).xi_max;
  for (auto _ : state) benchmark::DoNotOptimize(level_extract(f, t));
}
BENCHMARK(BM_LevelExtract)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CatenoidChecks(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SurfaceMesh mesh = model_catenoid(0.25, n, n / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_curvature_residual(mesh));
    benchmark::DoNotOptimize(boundary_report(mesh));
    benchmark::DoNotOptimize(gauss_and_graph_checks(mesh, 2000));
  }
}
BENCHMARK(BM_CatenoidChecks)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Crofton(benchmark::State& state) {
  const int n = 256;
  const ScalarField f = model_field(0.0, n, n);
  const LevelCurve c = level_extract(f, 0.5 * model(0.0).xi_max);
  for (auto _ : state) benchmark::DoNotOptimize(crofton_length(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Crofton)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
