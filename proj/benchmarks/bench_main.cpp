#include <numbers>

#include <benchmark/benchmark.h>

#include "acyl/cylinder.hpp"
#include "acyl/dec.hpp"
#include "acyl/dirac_models.hpp"
#include "acyl/index_calculus.hpp"
#include "acyl/linalg.hpp"
#include "acyl/meshes.hpp"
#include "acyl/spectral.hpp"

namespace {

using namespace acyl;

const dec::FlatTorus kTorus = dec::FlatTorus::square(2.0 * std::numbers::pi);

void BM_TorusEigendecompose(benchmark::State& state) {
  const auto m = dirac::build_torus_model(kTorus, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::eigendecompose(m));
  state.counters["dim"] = static_cast<double>(m.dim());
}
BENCHMARK(BM_TorusEigendecompose)->Arg(5)->Arg(13)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_Laplacian0Spectrum(benchmark::State& state) {
  const auto l0 = dec::laplacian0(dec::build_dec(dec::grid_torus(kTorus, static_cast<int>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(mass_eigenvalues(l0));
}
BENCHMARK(BM_Laplacian0Spectrum)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SlModel(benchmark::State& state) {
  const auto cc = dec::build_dec(dec::genus2_polycube());
  for (auto _ : state) benchmark::DoNotOptimize(dirac::build_sl_model(cc));
}
BENCHMARK(BM_SlModel)->Unit(benchmark::kMillisecond);

void BM_FredholmIndex(benchmark::State& state) {
  const auto s = spectral::eigendecompose(dirac::build_torus_model(kTorus, 5.0));
  const index::EndSystem ends{{s, s}};
  for (auto _ : state) benchmark::DoNotOptimize(index::fredholm_index({-0.5, -1.2}, ends));
}
BENCHMARK(BM_FredholmIndex);

void BM_SolveCylinder(benchmark::State& state) {
  const auto m = dirac::build_torus_model(kTorus, 1.5);
  const cylinder::CylinderOperator op(m, spectral::eigendecompose(m));
  const auto grid = cylinder::TimeGrid::with_length(static_cast<double>(state.range(0)));
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Ones(op.modes(), grid.samples());
  for (auto _ : state) benchmark::DoNotOptimize(cylinder::solve_cylinder(op, rhs, grid, -0.5));
}
BENCHMARK(BM_SolveCylinder)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_PerturbedKernelCount(benchmark::State& state) {
  const auto m = dirac::build_torus_model(kTorus, 1.5);
  const auto op = cylinder::CylinderOperator(m, spectral::eigendecompose(m)).with_perturbation(1e-3, -1.0, 2024);
  const auto grid = cylinder::TimeGrid::with_length(30.0);
  const auto set = cylinder::negative_modes(op);
  for (auto _ : state) benchmark::DoNotOptimize(cylinder::perturbed_kernel_count(op, 0.5, set, grid));
}
BENCHMARK(BM_PerturbedKernelCount)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
