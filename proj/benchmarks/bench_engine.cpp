#include <benchmark/benchmark.h>

#include "odsim/engine.hpp"

using namespace odsim;

namespace {

/// Slot throughput of the reference population over one simulated minute.
void BM_EngineSlots(benchmark::State& state) {
  Scenario s;
  s.end_s = 60.0;
  s.transient_s = 0.0;
  s.kind(NodeKind::Pedestrian).population = static_cast<std::size_t>(state.range(0));
  std::int64_t slots = 0;
  for (auto _ : state) slots += run(s).slots;
  state.SetItemsProcessed(slots);
}
BENCHMARK(BM_EngineSlots)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
