#include "odsim/engine.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "odsim/error.hpp"
#include "odsim/movers.hpp"
#include "odsim/propagation.hpp"

namespace odsim {

RunInputs prepare_inputs(const Scenario& s) {
  s.validate();
  UrbanMap map = s.map == "reference" ? reference_map() : load_map(s.map);
  RunInputs in{build_world(std::move(map), s.tile_side_m), nullptr, std::nullopt};
  if (s.trace.empty()) {
    PopulationSpec pop;
    pop.fixed = s.kind(NodeKind::Fixed).population;
    pop.vehicles = s.kind(NodeKind::Vehicular).population;
    pop.pedestrians = s.kind(NodeKind::Pedestrian).population;
    pop.elevators = place_elevators(in.world.map, s.kind(NodeKind::Elevator).population, s.elevator_stop_s,
                                    s.elevator_speed_floors_per_s);
    pop.pedestrian = s.pedestrian;
    pop.vehicle = s.vehicle;
    in.trace = generate_population(in.world.map, pop, s.end_s, s.slot_len_s, s.seed);
  } else {
    in.trace = std::make_unique<TraceFile>(s.trace);
  }
  if (s.loss_source != LossSource::Model) in.loss = load_loss_table(s.loss_file);
  return in;
}

KindParams effective_params(const Scenario& s, NodeKind k) {
  KindParams p = s.kind(k).params;
  if (k != NodeKind::Pedestrian) p.policy.schedule = TransmitSchedule{kReferencePeriod, ContextPolicy::None, 0.0};
  return p;
}

namespace {

std::string node_at(NodeId id, std::int64_t slot) {
  return "node " + std::to_string(id) + " at slot " + std::to_string(slot);
}

void check_header(const TraceHeader& h, const Scenario& s, const UrbanMap& map) {
  if (std::abs(h.slot_len - s.slot_len_s) > 1e-9) {
    throw TraceError("trace slot length " + std::to_string(h.slot_len) + " differs from scenario slot " +
                     std::to_string(s.slot_len_s));
  }
  if (std::abs(h.width_m - map.width_m) > 1e-6 || std::abs(h.height_m - map.height_m) > 1e-6) {
    throw TraceError("trace world size differs from the map");
  }
}

}  // namespace

RunMetrics run(const Scenario& scenario, const RunOptions& options) {
  RunInputs in = prepare_inputs(scenario);
  return run(scenario, in, options);
}

RunMetrics run(const Scenario& s, RunInputs& in, const RunOptions& options) {
  s.validate();
  if (!in.trace) throw Error("run needs a trace source");
  TileGrid& grid = in.world.grid;
  const UrbanMap& map = in.world.map;
  const double slot = s.slot_len_s;
  check_header(in.trace->header(), s, map);

  const std::int64_t start_slot = s.start_s > 0.0 ? to_slots(s.start_s, slot, "start") : 0;
  const std::int64_t end_slot = to_slots(s.end_s, slot, "end");
  const std::int64_t sample_slots = to_slots(s.sample_period_s, slot, "sample_period");
  const InfoDynamics dynamics = s.info_dynamics();
  RoiTiming timing;
  timing.relink_slots = to_slots(s.roi.relink_period_s, slot, "roi.relink_period");
  timing.sync_slots = to_slots(s.roi.sync_period_s, slot, "roi.sync_period");
  timing.async_min_slots = to_slots(s.roi.async_min_s, slot, "roi.async_min");
  timing.async_max_slots = to_slots(s.roi.async_max_s, slot, "roi.async_max");

  RunMetrics m;
  m.digest = scenario_digest(s);
  m.seed = s.seed;
  m.start_s = s.start_s;
  m.transient_s = s.transient_s;
  m.end_s = s.end_s;
  m.pooling = s.ci_pooling;

  // Position the stream on the first slot of the run.
  std::vector<TraceRecord> recs;
  bool have = in.trace->next_slot(recs);
  while (have && !recs.empty() && recs.front().slot < start_slot) have = in.trace->next_slot(recs);
  if (have && !recs.empty() && recs.front().slot > start_slot) {
    throw TraceError("trace has no record at the start slot " + std::to_string(start_slot) + " (first is slot " +
                     std::to_string(recs.front().slot) + ")");
  }
  if (!have) recs.clear();

  std::array<KindParams, 4> params;
  for (NodeKind k : kAllKinds) params[kind_index(k)] = effective_params(s, k);
  std::vector<NodeState> nodes;
  nodes.reserve(recs.size());
  for (const auto& r : recs) {
    nodes.emplace_back(r.node, r.kind, params[kind_index(r.kind)], grid, slot, s.seed);
    ++m.population[kind_index(r.kind)];
  }
  for (NodeKind k : kAllKinds) {
    if (m.population[kind_index(k)] != s.kind(k).population) {
      throw TraceError(std::string("trace holds ") + std::to_string(m.population[kind_index(k)]) + " " +
                       kind_letter(k) + " nodes but the scenario expects " + std::to_string(s.kind(k).population));
    }
  }

  bool needs_table = false;
  bool needs_sync = false;
  for (const auto& n : nodes) {
    needs_table = needs_table || n.roi_model == RoiModel::StaticSync || n.roi_model == RoiModel::StaticAsync;
    needs_sync = needs_sync || n.roi_model == RoiModel::StaticSync;
  }
  Rng table_rng = make_rng(s.seed, Stream::RoiTable);
  RoiTable table;
  auto fresh_table = [&](std::span<const Point2> exclude) {
    if (!s.roi.centers.empty()) {
      RoiTable t;
      t.centers = s.roi.centers;
      return t;
    }
    return draw_roi_table(grid, s.roi.count, table_rng, exclude);
  };
  if (needs_table) table = fresh_table({});

  const LossContext loss_ctx{&map, s.loss, s.loss_source, in.loss ? &*in.loss : nullptr};
  ContactIndex index(loss_ctx, s.thresholds());
  ContactSet contacts_now;
  Rng info_rng = make_rng(s.seed, Stream::InfoUpdate);
  std::vector<std::vector<InfoItem>> outbox(nodes.size());
  std::vector<char> transmitting(nodes.size(), 0);

  for (std::int64_t sl = start_slot; sl < end_slot; ++sl) {
    if (sl != start_slot) {
      have = in.trace->next_slot(recs);
      if (!have) recs.clear();
    }
    // (1) Positions and floor states.
    if (recs.size() != nodes.size() || (!recs.empty() && recs.front().slot != sl)) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i >= recs.size() || recs[i].node != nodes[i].id || recs[i].slot != sl) {
          throw TraceError("trace gap: no record for " + node_at(nodes[i].id, sl));
        }
      }
      throw TraceError("trace holds a node absent at the start: " + node_at(recs.back().node, sl));
    }
    const std::int64_t b = sl + 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      NodeState& n = nodes[i];
      const TraceRecord& r = recs[i];
      if (r.node != n.id) throw TraceError("trace gap: no record for " + node_at(n.id, sl));
      if (r.kind != n.kind) throw TraceError("kind changed for " + node_at(n.id, sl));
      if (n.has_state && !(n.floor == r.floor)) on_floor_state_change(n, n.floor, r.floor, b);
      n.pos = r.pos;
      n.floor = r.floor;
      n.has_state = true;
      if (n.active()) n.tile = tile_of(r.pos, grid);
    }
    // (2) Information dynamics.
    if (apply_info_update(grid, dynamics, b, slot, info_rng)) ++m.info_updates;
    // (3) ROI models.
    if (needs_sync && b != start_slot + 1 && b % timing.sync_slots == 0) {
      const std::vector<Point2> previous = table.centers;
      const std::uint64_t gen = table.generation + 1;
      if (s.roi.redraw) table = fresh_table(previous);
      table.generation = gen;
    }
    for (auto& n : nodes) roi_update(n, b, timing, needs_table ? &table : nullptr);
    // (4) Sensing.
    for (auto& n : nodes) {
      if (n.active()) sense(n, grid);
    }
    // (5) Transmission decisions against pre-delivery buffers.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      NodeState& n = nodes[i];
      transmitting[i] = 0;
      if (!n.active()) continue;
      const TransmitDecision d = should_transmit(n, b);
      if (!d.transmit) continue;
      transmitting[i] = 1;
      ++n.transmissions;
      ++m.transmissions[kind_index(n.kind)];
      if (d.context_only) {
        ++n.context_transmissions;
        ++m.context_transmissions[kind_index(n.kind)];
      }
      select_broadcast(n, outbox[i]);
    }
    // (6) Contacts of this slot's transmitters.
    index.compute(recs, transmitting, contacts_now);
    // (7) Delivery, transmitters in ascending id.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!transmitting[i] || outbox[i].empty()) continue;
      for (std::size_t j : contacts_now.receivers[i]) {
        if (nodes[j].active()) receive(nodes[j], outbox[i], grid);
      }
    }
    ++m.slots;
    const double t = static_cast<double>(b) * slot;
    const SlotView view{sl, b, t, nodes, recs, grid};
    // (8) Metrics.
    if (b % sample_slots == 0) {
      for (const auto& n : nodes) {
        if (n.active()) m.samples.push_back({t, n.id, n.kind, coverage(n, grid)});
      }
      if (options.on_sample) options.on_sample(view);
    }
    if (options.on_slot) options.on_slot(view);
  }
  return m;
}

std::string metrics_fingerprint(const RunMetrics& m) {
  std::ostringstream out;
  write_summary_header(out);
  write_summary_rows(out, m);
  write_transmissions(out, m);
  write_coverage_timeseries(out, m);
  write_fx(out, m);
  out.precision(17);
  for (const auto& smp : m.samples) out << smp.t << ',' << smp.node << ',' << kind_letter(smp.kind) << ',' << smp.c << '\n';
  return out.str();
}

bool replay_check(const RunMetrics& a, const RunMetrics& b) {
  if (a.digest != b.digest) {
    throw Error("scenario digest mismatch: " + digest_hex(a.digest) + " vs " + digest_hex(b.digest));
  }
  return a.seed == b.seed && metrics_fingerprint(a) == metrics_fingerprint(b);
}

bool replay_check(const Scenario& scenario, std::uint64_t seed) {
  Scenario s = scenario;
  s.seed = seed;
  const RunMetrics a = run(s);
  const RunMetrics b = run(s);
  return replay_check(a, b);
}

}  // namespace odsim
