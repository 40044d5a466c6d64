// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "billspec/rotation.hpp"
#include "billspec/seeley.hpp"
#include "billspec/weyl.hpp"

using namespace billspec;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_PeriodicMeasure1d(benchmark::State& state) {
  const FlatDisk model{1.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        periodic_measure_1d([&](double e) { return f_closed(model, e); }, 0.0, 1.0, 10, 1e-3, 200000, exec_of(state)));
}
BENCHMARK(BM_PeriodicMeasure1d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PhaseMeasure(benchmark::State& state) {
  const Domain disk = make_disk(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(near_periodic_phase_measure(disk, 10.0, 1e-2, 20000, 1, exec_of(state)));
}
BENCHMARK(BM_PhaseMeasure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RemainderIntegral(benchmark::State& state) {
  const Domain disk = make_disk(1.0);
  ZoneSpec zone;
  for (auto _ : state) benchmark::DoNotOptimize(remainder_integral(disk, zone, 200000, 1, exec_of(state)));
}
BENCHMARK(BM_RemainderIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DiskSpectrum(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(disk_spectrum(1.0, 6400.0, BoundaryCondition::Dirichlet, exec_of(state)));
}
BENCHMARK(BM_DiskSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AnnulusSpectrum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(annulus_spectrum(1.0, 0.5, 3000.0, exec_of(state)));
}
BENCHMARK(BM_AnnulusSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RobinKappa1(benchmark::State& state) {
  auto a = [](double x, double xi) { return 1.0 + x * x + xi * xi; };
  auto b = [](double x, double) { return 0.5 + 0.1 * x; };
  Kappa1Options opt;
  opt.nx = opt.nxi = 512;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(robin_kappa1(a, b, 0.8, 1.6, PhaseWindow{}, opt));
}
BENCHMARK(BM_RobinKappa1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
