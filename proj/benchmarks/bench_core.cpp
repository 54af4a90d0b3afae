#include <benchmark/benchmark.h>

#include "echolab/coherent.hpp"
#include "echolab/fidelity.hpp"
#include "echolab/interference.hpp"

using namespace echolab;

namespace {

ModelParams desk_params() {
  ModelParams p;
  p.mu = 1.0;
  p.g_c = 0.2;
  p.K = 1.0;
  p.T = 1.0;
  p.sigma = 0.1;
  return p;
}

void bm_build_floquet(benchmark::State& state) {
  const SpinBasis b(static_cast<int>(state.range(0)));
  const ModelParams p = desk_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_floquet(b, p, false));
  }
}
BENCHMARK(bm_build_floquet)->Arg(200)->Arg(1024);

void bm_evolve_period(benchmark::State& state) {
  const SpinBasis b(static_cast<int>(state.range(0)));
  const UnitaryOperator u = build_floquet(b, desk_params(), false);
  StateVector s = fock_state(b, -b.spin());
  for (auto _ : state) {
    s = u.apply(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(bm_evolve_period)->Arg(200)->Arg(1024);

void bm_fidelity_curve(benchmark::State& state) {
  const SpinBasis b(200);
  const ModelParams p = desk_params();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_curve(b, p, -100, n_max));
  }
  state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(bm_fidelity_curve)->Arg(500)->Arg(2000);

void bm_echo_matrix_slice(benchmark::State& state) {
  const SpinBasis b(200);
  ModelParams p = desk_params();
  p.g_c = 0.17;
  p.K = 2.0;
  p.sigma = 0.5;
  // Narrow k window so one iteration stays around a second.
  for (auto _ : state) {
    benchmark::DoNotOptimize(echo_matrix(b, p, -100.0, -100.0, -91.0, 500));
  }
}
BENCHMARK(bm_echo_matrix_slice)->Unit(benchmark::kMillisecond);

void bm_coherent_state(benchmark::State& state) {
  const SpinBasis b(static_cast<int>(state.range(0)));
  const SphereAngle angle(1.1, 2.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coherent_state(b, angle));
  }
}
BENCHMARK(bm_coherent_state)->Arg(200)->Arg(1024);

void bm_fringe_fit(benchmark::State& state) {
  const SampleGrid g{-10.0, 10.0, static_cast<int>(state.range(0))};
  const WavePacket chi1(g, -1.0, 1.0, 8.0);
  const WavePacket chi2(g, 1.0, 1.0, -8.0);
  const InterferencePattern pattern =
      synthesize_pattern(chi1, chi2, Complex(0.6, 0.4), 0.01, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_fidelity(pattern, chi1, chi2));
  }
}
BENCHMARK(bm_fringe_fit)->Arg(1024)->Arg(8192);

}  // namespace

BENCHMARK_MAIN();
