#include <string>

#include <benchmark/benchmark.h>

#include "gsprk/integrator.hpp"
#include "gsprk/methods.hpp"

using namespace gsprk;

namespace {

const char* const kPresets[] = {"symplectic_euler", "midpoint", "stormer_verlet",
                                "trig3",            "cheb2",    "cheb3"};

void BM_SprkStepKepler(benchmark::State& state) {
  const std::string preset = kPresets[state.range(0)];
  const HamiltonianSystem kep = builtin("kepler2d");
  const SprkTableau t = resolve_preset(preset).tableau;
  StepperConfig cfg;
  cfg.h = 0.05;
  PhasePoint x = default_initial_state("kepler2d");
  for (auto _ : state) {
    const StepResult r = sprk_step(kep, t, cfg, x.q, x.p);
    x = r.state;
    benchmark::DoNotOptimize(x.q.data());
  }
  state.SetLabel(preset);
}
BENCHMARK(BM_SprkStepKepler)->DenseRange(0, 5);

void BM_BuildTableau(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const BasisSet basis = BasisSet::lagrange(chebyshev_nodes(s));
  const NodeSet nodes = chebyshev_nodes(s);
  for (auto _ : state) benchmark::DoNotOptimize(build_tableau(basis, nodes));
}
BENCHMARK(BM_BuildTableau)->DenseRange(1, 3);

void BM_BuildTrigTableau(benchmark::State& state) {
  const BasisSet basis = BasisSet::trigonometric(3);
  const NodeSet nodes({0.0, 0.5, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(build_tableau(basis, nodes));
}
BENCHMARK(BM_BuildTrigTableau);

}  // namespace
BENCHMARK_MAIN();
