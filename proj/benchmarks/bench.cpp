#include <imexstab/discretize2d.hpp>
#include <imexstab/linsolve.hpp>
#include <imexstab/stepper.hpp>

#include <benchmark/benchmark.h>

using namespace imexstab;

namespace {

DiscreteSystem default_system(int m, AntidiffusionMode mode) {
  PdeParams p;
  p.mode = mode;
  return assemble_system(Grid2D(m), p, false);
}

void BM_ApplyAntidiffusion(benchmark::State& state) {
  const auto mode = static_cast<AntidiffusionMode>(state.range(1));
  const DiscreteSystem d = default_system(static_cast<int>(state.range(0)), mode);
  const Vector u = Vector::Ones(d.system.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.system.c().apply(u));
  }
}
BENCHMARK(BM_ApplyAntidiffusion)->ArgsProduct({{31, 63, 127}, {0, 1}});

void BM_FactorStepMatrix(benchmark::State& state) {
  const DiscreteSystem d = default_system(static_cast<int>(state.range(0)), AntidiffusionMode::kAveraging);
  for (auto _ : state) {
    Stepper s(d.system, 10.0, Variant::kImexStable);
    benchmark::DoNotOptimize(&s);
  }
}
BENCHMARK(BM_FactorStepMatrix)->Arg(31)->Arg(63)->Arg(127);

void BM_ImexStep(benchmark::State& state) {
  const DiscreteSystem d = default_system(static_cast<int>(state.range(0)), AntidiffusionMode::kAveraging);
  const Stepper s(d.system, 10.0, Variant::kImexStable);
  const Vector f = d.system.forcing(0.0);
  Vector u = Vector::Zero(d.system.dim());
  for (auto _ : state) {
    u = s.step(u, f);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_ImexStep)->Arg(31)->Arg(63)->Arg(127);

void BM_Integrate1000(benchmark::State& state) {
  const DiscreteSystem d = default_system(31, AntidiffusionMode::kAveraging);
  const EnergyMetric metric(d.system.c(), 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(d.system, SchemeConfig::make(10.0, 1000), metric));
  }
}
BENCHMARK(BM_Integrate1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
