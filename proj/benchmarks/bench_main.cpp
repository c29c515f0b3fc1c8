#include <benchmark/benchmark.h>

#include "fpu/chain.hpp"
#include "fpu/coupling.hpp"
#include "fpu/dynamics.hpp"
#include "fpu/reduction.hpp"
#include "fpu/spectral.hpp"
#include "fpu/sweep.hpp"

namespace {

void BM_Eigendecompose(benchmark::State& state) {
  const auto red = fpu::build_reduced(static_cast<std::size_t>(state.range(0)), 0.01, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fpu::eigendecompose(red));
}
BENCHMARK(BM_Eigendecompose)->Arg(9)->Arg(47)->Arg(99);

void BM_ToQuasiHarmonic(benchmark::State& state) {
  const auto red = fpu::build_reduced(static_cast<std::size_t>(state.range(0)), 0.01, 1.0);
  const auto basis = fpu::eigendecompose(red);
  for (auto _ : state) benchmark::DoNotOptimize(fpu::to_quasi_harmonic(red, basis));
}
BENCHMARK(BM_ToQuasiHarmonic)->Arg(9)->Arg(47)->Arg(99);

void BM_QuasiHarmonicAccel(benchmark::State& state) {
  const auto red = fpu::build_reduced(static_cast<std::size_t>(state.range(0)), 0.01, 1.0);
  const auto qh = fpu::to_quasi_harmonic(red, fpu::eigendecompose(red));
  std::vector<double> x(qh.dof(), 0.01), out(qh.dof());
  for (auto _ : state) {
    qh.accel(x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["entries"] = double(qh.entries().size());
}
BENCHMARK(BM_QuasiHarmonicAccel)->Arg(9)->Arg(47);

void BM_AnalyseP(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fpu::analyse_p(p));
}
BENCHMARK(BM_AnalyseP)->Arg(15)->Arg(45)->Unit(benchmark::kMillisecond);

void BM_IntegrateSixParticles(benchmark::State& state) {
  const auto sys = fpu::build_chain({.n_pairs = 3, .a = 0.01, .alpha = 1.0});
  const std::vector<double> q0{0.08, -0.085, 0.0, 0.075, -0.07, 0.0}, v0(6, 0.0);
  fpu::IntegratorConfig cfg;
  cfg.t_end = double(state.range(0));
  cfg.sample_dt = 1.0;
  std::size_t steps = 0;
  for (auto _ : state) {
    const auto res = fpu::integrate(sys, q0, v0, cfg);
    steps = res.accepted_steps;
    benchmark::DoNotOptimize(res.trajectory.states.data());
  }
  state.counters["steps"] = double(steps);
}
BENCHMARK(BM_IntegrateSixParticles)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IntegrateP9Modal(benchmark::State& state) {
  const auto red = fpu::build_reduced(9, 0.01, 1.0);
  const auto qh = fpu::to_quasi_harmonic(red, fpu::eigendecompose(red));
  std::vector<double> x0(8, 0.0), v0(8, 0.0);
  x0[1] = 0.1;
  fpu::IntegratorConfig cfg;
  cfg.t_end = 500.0;
  for (auto _ : state) benchmark::DoNotOptimize(fpu::integrate(qh, x0, v0, cfg, 'x'));
}
BENCHMARK(BM_IntegrateP9Modal)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
