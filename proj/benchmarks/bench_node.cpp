#include <benchmark/benchmark.h>

#include "odsim/buffer.hpp"
#include "odsim/rng.hpp"
#include "odsim/urban_map.hpp"

using namespace odsim;

namespace {

void BM_BufferOffer(benchmark::State& state) {
  const World w = build_world(reference_map(), 25.0);
  const auto ins = state.range(0) ? Insertion::Selective : Insertion::Fifo;
  Buffer buf(16, w.grid);
  const RoiSquare roi{{275.0, 250.0}, 100.0};
  Rng rng(3);
  std::vector<InfoItem> items;
  for (int i = 0; i < 4096; ++i) {
    items.push_back({{static_cast<int>(uniform(rng, 0.0, 22.0)), static_cast<int>(uniform(rng, 0.0, 20.0))},
                     static_cast<double>(i / 64)});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(buf.offer(items[i++ % items.size()], ins, Eviction::Selective, roi, w.grid));
  }
}
BENCHMARK(BM_BufferOffer)->Arg(0)->Arg(1);

}  // namespace
