#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "singular/analysis.hpp"
#include "singular/nlo.hpp"
#include "singular/renorm.hpp"

namespace {

using namespace singular;

ModelParams p_wave() {
  ModelParams m;
  m.lambda = 4.25;
  m.l = 1;
  return m;
}

ModelParams s_wave() {
  ModelParams m;
  m.lambda = 2.0;
  m.g = 1.0;
  m.big_m = 0.5;
  return m;
}

// Arg: nodes per panel.
void BM_SolveK(benchmark::State& state) {
  const ModelParams m = p_wave();
  const double cutoff = 100.0;
  const CountertermSet ct{analytic_c0(m, cutoff, 0.2), 0.0, 0.0, cutoff};
  const auto grid = build_grid(cutoff, 0.1, int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_k(m, ct, 0.1, grid).onshell_value);
  state.counters["unknowns"] = double(grid.size() + 1);
}
BENCHMARK(BM_SolveK)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_BuildGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(100.0, 0.1, 24).size());
}
BENCHMARK(BM_BuildGrid)->Unit(benchmark::kMicrosecond);

void BM_CalibrateC0(benchmark::State& state) {
  const ModelParams m = s_wave();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        calibrate_c0(m, 7.5, {0.1, -1.05}, std::numeric_limits<double>::quiet_NaN()).c);
  }
}
BENCHMARK(BM_CalibrateC0)->Unit(benchmark::kMillisecond);

void BM_NLOBasis(benchmark::State& state) {
  const ModelParams m = s_wave();
  const double c = calibrate_c0(m, 7.5, {0.1, -1.05}, std::numeric_limits<double>::quiet_NaN()).c;
  const CountertermSet ct{c, 0.0, 0.0, 7.5};
  for (auto _ : state) benchmark::DoNotOptimize(nlo_basis(m, ct, 0.175).from_d);
}
BENCHMARK(BM_NLOBasis)->Unit(benchmark::kMillisecond);

void BM_CalibrateNLO(benchmark::State& state) {
  const ModelParams m = s_wave();
  const std::array<Datum, 2> data{Datum{0.1, -1.05}, Datum{0.15, -0.34}};
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_nlo(m, 7.5, data).d_nlo);
}
BENCHMARK(BM_CalibrateNLO)->Unit(benchmark::kMillisecond);

void BM_OscillationFit(benchmark::State& state) {
  const ModelParams m = p_wave();
  const double cutoff = 1e5;
  const auto sol = solve_k(m, {analytic_c0(m, cutoff, 0.2), 0.0, 0.0, cutoff}, 0.1,
                           build_grid(cutoff, 0.1, 24));
  const auto samples = sample_offshell(sol, 1.0, cutoff / 0.1, 600);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_oscillation(samples, 20.0, cutoff / 0.4).nu_fit);
  }
}
BENCHMARK(BM_OscillationFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
