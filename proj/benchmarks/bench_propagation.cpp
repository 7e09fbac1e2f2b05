#include <benchmark/benchmark.h>

#include <vector>

#include "odsim/propagation.hpp"
#include "odsim/rng.hpp"
#include "odsim/urban_map.hpp"

using namespace odsim;

namespace {

std::vector<TraceRecord> scattered(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TraceRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeKind k = i % 4 == 0 ? NodeKind::Vehicular : NodeKind::Pedestrian;
    out.push_back({0, static_cast<NodeId>(i), k, {uniform(rng, 0.0, 550.0), uniform(rng, 0.0, 500.0), 0.0},
                   FloorState::walking()});
  }
  return out;
}

void BM_ChannelLoss(benchmark::State& state) {
  const UrbanMap map = reference_map();
  const auto recs = scattered(256, 1);
  const LossModel model;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = recs[i % recs.size()];
    const auto& b = recs[(i * 7 + 3) % recs.size()];
    benchmark::DoNotOptimize(channel_loss(a, b, map, model));
    ++i;
  }
}
BENCHMARK(BM_ChannelLoss);

void BM_ContactIndex(benchmark::State& state) {
  const UrbanMap map = reference_map();
  const auto recs = scattered(static_cast<std::size_t>(state.range(0)), 2);
  ContactIndex index(LossContext{&map, LossModel{}, LossSource::Model, nullptr}, ContactThresholds{});
  ContactSet out;
  for (auto _ : state) {
    index.compute(recs, {}, out);
    benchmark::DoNotOptimize(out.receivers.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ContactIndex)->Arg(64)->Arg(304)->Arg(1000);

void BM_ContactsBrute(benchmark::State& state) {
  const UrbanMap map = reference_map();
  const auto recs = scattered(static_cast<std::size_t>(state.range(0)), 2);
  const LossContext ctx{&map, LossModel{}, LossSource::Model, nullptr};
  for (auto _ : state) benchmark::DoNotOptimize(contacts(recs, ctx, ContactThresholds{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ContactsBrute)->Arg(64)->Arg(304);

}  // namespace
