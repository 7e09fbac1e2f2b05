#include "odsim/node.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "odsim/error.hpp"

namespace odsim {

std::size_t buffer_capacity_for(double roi_side_m, double tile_side_m) {
  if (!(tile_side_m > 0.0) || !(roi_side_m > 0.0)) throw ConfigError("ROI and tile sides must be positive");
  const double ratio = roi_side_m / tile_side_m;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("ROI side must be a multiple of the tile side");
  }
  const auto side = static_cast<std::size_t>(n);
  return side * side;
}

namespace {

std::size_t capacity_of(const KindParams& p, const TileGrid& grid) {
  const std::size_t min_cap = buffer_capacity_for(p.roi_side_m, grid.tile_side());
  if (p.capacity == 0) return min_cap;
  if (p.capacity < min_cap) throw ConfigError("buffer capacity below the ROI tile count");
  return p.capacity;
}

}  // namespace

NodeState::NodeState(NodeId id_, NodeKind kind_, const KindParams& params, const TileGrid& grid, double slot_len,
                     std::uint64_t seed)
    : id(id_),
      kind(kind_),
      k(params.k),
      roi_model(params.roi),
      policy(params.policy),
      buffer(capacity_of(params, grid), grid),
      roi{{}, params.roi_side_m},
      broadcast_rng(make_rng(seed, Stream::Broadcast, id_)),
      roi_rng(make_rng(seed, Stream::RoiChoice, id_)) {
  if (k < 1) throw ConfigError("items per broadcast must be at least 1");
  const auto& s = policy.schedule;
  if (!(s.period_s > 0.0)) throw ConfigError("transmit period must be positive");
  if (std::isfinite(s.period_s)) {
    period_slots = to_slots(s.period_s, slot_len, "transmit period");
    Rng phase_rng = make_rng(seed, Stream::Phase, id_);
    phase_slots = uniform_int<std::int64_t>(phase_rng, 0, period_slots - 1);
  }
  if (s.context != ContextPolicy::None) {
    if (!(s.wake_s > 0.0)) throw ConfigError("wake window must be positive");
    wake_slots = to_slots(s.wake_s, slot_len, "wake window");
  }
}

OfferResult sense(NodeState& node, const TileGrid& grid) {
  const InfoItem item{node.tile, grid.version(node.tile)};
  const Insertion ins = node.policy.sensing_si ? Insertion::Selective : Insertion::Fifo;
  return node.buffer.offer(item, ins, node.policy.eviction, node.roi, grid);
}

void select_broadcast(NodeState& node, std::vector<InfoItem>& out) {
  out.clear();
  const auto items = node.buffer.items();
  std::sample(items.begin(), items.end(), std::back_inserter(out), node.k, node.broadcast_rng);
}

void receive(NodeState& node, std::span<const InfoItem> items, const TileGrid& grid) {
  for (const InfoItem& it : items) node.buffer.offer(it, node.policy.insertion, node.policy.eviction, node.roi, grid);
}

TransmitDecision should_transmit(const NodeState& node, std::int64_t b) {
  const bool periodic = node.period_slots > 0 && (b + node.phase_slots) % node.period_slots == 0;
  const bool awake = b >= node.wake_from && b < node.wake_until;
  return {periodic || awake, awake && !periodic};
}

bool on_floor_state_change(NodeState& node, const FloorState& before, const FloorState& after, std::int64_t b) {
  using W = FloorState::Where;
  bool wake = false;
  switch (node.policy.schedule.context) {
    case ContextPolicy::None: break;
    case ContextPolicy::Floor: wake = !(before == after); break;
    case ContextPolicy::Walk: wake = (before.where == W::WalkingOutside) != (after.where == W::WalkingOutside); break;
  }
  if (wake) {
    if (b >= node.wake_until) node.wake_from = b;
    node.wake_until = std::max(node.wake_until, b + node.wake_slots);
  }
  return wake;
}

void roi_update(NodeState& node, std::int64_t b, const RoiTiming& timing, const RoiTable* table) {
  const Point2 here = node.pos.ground();
  switch (node.roi_model) {
    case RoiModel::Linked:
      node.roi.center = here;
      break;
    case RoiModel::Floating:
      if (!node.roi_ready || (timing.relink_slots > 0 && b % timing.relink_slots == 0)) node.roi.center = here;
      break;
    case RoiModel::StaticSync:
    case RoiModel::StaticAsync: {
      if (table == nullptr || table->centers.empty()) throw ConfigError("static ROI model without an ROI table");
      bool draw = !node.roi_ready;
      if (node.roi_model == RoiModel::StaticSync) {
        draw = draw || node.roi_generation != table->generation;
      } else if (b >= node.next_roi_change) {
        draw = true;
      }
      if (draw) {
        node.roi_index = uniform_int<std::size_t>(node.roi_rng, 0, table->centers.size() - 1);
        node.roi_generation = table->generation;
        if (node.roi_model == RoiModel::StaticAsync) {
          node.next_roi_change = b + uniform_int<std::int64_t>(node.roi_rng, timing.async_min_slots, timing.async_max_slots);
        }
      }
      node.roi.center = table->centers[node.roi_index];
      break;
    }
  }
  node.roi_ready = true;
}

double coverage(std::span<const InfoItem> items, const RoiSquare& roi, const TileGrid& grid) {
  const std::size_t denom = roi_accessible_count(roi, grid);
  if (denom == 0) return 1.0;
  std::size_t held = 0;
  for (const InfoItem& it : items) {
    if (tile_in_roi(it.tile, roi, grid) && grid.accessible(it.tile) && it.version == grid.version(it.tile)) ++held;
  }
  return static_cast<double>(held) / static_cast<double>(denom);
}

double coverage(const NodeState& node, const TileGrid& grid) { return coverage(node.buffer.items(), node.roi, grid); }

}  // namespace odsim
