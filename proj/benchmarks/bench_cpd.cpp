#include <benchmark/benchmark.h>

#include "cpd/control.hpp"
#include "cpd/ppf.hpp"
#include "cpd/relations.hpp"
#include "cpd/synthesis.hpp"

namespace {

std::vector<std::size_t> ops_for(int counters) { return std::vector<std::size_t>(counters, 1); }

void BM_ExplorePlant(benchmark::State& state) {
  const auto spec = cpd::instantiate_ppf(state.range(0), ops_for(state.range(0)));
  std::size_t states = 0;
  for (auto _ : state) {
    const auto ss = cpd::renamed_plant_space(spec);
    states = ss.size();
    benchmark::DoNotOptimize(states);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_ExplorePlant)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State& state) {
  const auto spec = cpd::instantiate_ppf(state.range(0), ops_for(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cpd::synthesize(spec).supervisor.guards.size());
}
BENCHMARK(BM_Synthesize)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Synthesize_2_22(benchmark::State& state) {
  const auto spec = cpd::instantiate_ppf(2, {2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(cpd::synthesize(spec).supervisor.guards.size());
}
BENCHMARK(BM_Synthesize_2_22)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_Controllability(benchmark::State& state) {
  const auto plant = cpd::instantiate_ppf(state.range(0), ops_for(state.range(0)));
  const auto spec = cpd::with_supervisor(plant, cpd::synthesize(plant).supervisor);
  const auto supervised = cpd::explore(spec.signature, cpd::supervised_plant(spec));
  const auto renamed = cpd::renamed_plant_space(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(cpd::partial_bisim(supervised, renamed, cpd::ActionFilter::uncontrollable()).holds);
  state.counters["supervised_states"] = static_cast<double>(supervised.size());
  state.counters["plant_states"] = static_cast<double>(renamed.size());
}
BENCHMARK(BM_Controllability)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_BisimSelf(benchmark::State& state) {
  const auto spec = cpd::instantiate_ppf(state.range(0), ops_for(state.range(0)));
  const auto ss = cpd::renamed_plant_space(spec);
  for (auto _ : state) benchmark::DoNotOptimize(cpd::bisimilar(ss, ss).holds);
}
BENCHMARK(BM_BisimSelf)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
