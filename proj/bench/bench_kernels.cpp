// Serial reference against the OpenMP kernels. Argument 0 selects the serial
// path, 1 the parallel one.

#include <benchmark/benchmark.h>

#include "eswmt/kenmotsu.hpp"
#include "eswmt/weierstrass.hpp"

using namespace eswmt;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_FundamentalForms(benchmark::State& state) {
  const ImmersionResult im =
      integrate_immersion(enneper_data(), 0.0, ComplexGrid::rectangle(-1, 1, -1, 1, 257, 257), Exec::parallel);
  for (auto _ : state) {
    ParametricPatch p = im.patch;
    fundamental_forms(p, mode(state));
    curvatures(p, mode(state));
    benchmark::DoNotOptimize(p.K.data());
  }
}

void BM_IntegrateImmersion(benchmark::State& state) {
  const ComplexGrid grid = ComplexGrid::annulus(0.2, 5.0, 65, 128);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_immersion(catenoid_data(), 1.0, grid, mode(state)));
}

void BM_RecoverImmersion(benchmark::State& state) {
  const Generatrix g = sample_generatrix(rational_profile(1.0), 1.0, Chart::conformal, 0.2, 3.0, 160);
  const KenmotsuField f = rotational_kenmotsu_field(g, 320);
  for (auto _ : state) benchmark::DoNotOptimize(recover_immersion(f, Vec3::Zero(), mode(state)));
}

void BM_MetricCurvature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(metric_curvature(enneper_data(), 0.0, 20.0, 129, 128, mode(state)));
}

}  // namespace

BENCHMARK(BM_FundamentalForms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateImmersion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecoverImmersion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MetricCurvature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
