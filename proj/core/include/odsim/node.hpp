#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odsim/buffer.hpp"
#include "odsim/floor_state.hpp"
#include "odsim/rng.hpp"
#include "odsim/roi.hpp"
#include "odsim/tile_grid.hpp"
#include "odsim/trace.hpp"

namespace odsim {

enum class ContextPolicy { None, Floor, Walk };

/// Periodic transmissions every `period_s` (infinite = never), plus optional
/// wake windows of `wake_s` seconds opened by floor-state changes.
struct TransmitSchedule {
  double period_s{0.2};
  ContextPolicy context{ContextPolicy::None};
  double wake_s{0.0};
};

struct PolicyConfig {
  Insertion insertion{Insertion::Selective};
  Eviction eviction{Eviction::Selective};
  /// Selective insertion for items sensed from the environment.
  bool sensing_si{true};
  TransmitSchedule schedule;
};

struct KindParams {
  double roi_side_m{100.0};
  /// Buffer capacity; 0 selects (roi_side / tile_side)^2.
  std::size_t capacity{0};
  std::size_t k{5};
  RoiModel roi{RoiModel::Linked};
  PolicyConfig policy;
};

/// (roi_side / tile_side)^2. Throws ConfigError unless roi_side is a positive
/// multiple of tile_side.
std::size_t buffer_capacity_for(double roi_side_m, double tile_side_m);

/// Timing of the static and floating ROI models, in slots.
struct RoiTiming {
  std::int64_t relink_slots{3000};
  std::int64_t sync_slots{18000};
  std::int64_t async_min_slots{15000};
  std::int64_t async_max_slots{21000};
};

struct NodeState {
  NodeState(NodeId id, NodeKind kind, const KindParams& params, const TileGrid& grid, double slot_len,
            std::uint64_t seed);

  NodeId id;
  NodeKind kind;
  std::size_t k;
  RoiModel roi_model;
  PolicyConfig policy;
  Buffer buffer;
  RoiSquare roi;

  Point3 pos{};
  TileIndex tile{};
  FloorState floor{};
  bool has_state{false};

  /// Periodic schedule in slots; period_slots == 0 means never.
  std::int64_t period_slots{0};
  std::int64_t phase_slots{0};
  std::int64_t wake_slots{0};
  /// Wake window [wake_from, wake_until) in slot boundaries.
  std::int64_t wake_from{0};
  std::int64_t wake_until{0};

  bool roi_ready{false};
  std::uint64_t roi_generation{0};
  std::size_t roi_index{0};
  std::int64_t next_roi_change{0};

  Rng broadcast_rng;
  Rng roi_rng;

  std::uint64_t transmissions{0};
  std::uint64_t context_transmissions{0};

  bool active() const { return floor.where != FloorState::Where::OutsideArea; }
};

/// Stores the item of the node's current tile.
OfferResult sense(NodeState& node, const TileGrid& grid);

/// Uniform sample without replacement of min(k, size) buffered items, in buffer order.
void select_broadcast(NodeState& node, std::vector<InfoItem>& out);

void receive(NodeState& node, std::span<const InfoItem> items, const TileGrid& grid);

struct TransmitDecision {
  bool transmit{false};
  /// Fired only because of an open wake window.
  bool context_only{false};
};

/// Decision at slot boundary `b`: periodic when (b + phase) is a multiple of
/// the period, or whenever a wake window is open.
TransmitDecision should_transmit(const NodeState& node, std::int64_t b);

/// Opens a wake window [b, b + w) when the node's context policy reacts to
/// the change. Returns true when a window was opened.
bool on_floor_state_change(NodeState& node, const FloorState& before, const FloorState& after, std::int64_t b);

/// Moves the ROI centre per the node's model. `table` is required for the
/// static models; the first call initialises the ROI.
void roi_update(NodeState& node, std::int64_t b, const RoiTiming& timing, const RoiTable* table);

/// Fraction of accessible ROI tiles held at their current version; 1 for a
/// ROI without accessible tiles.
double coverage(const NodeState& node, const TileGrid& grid);
double coverage(std::span<const InfoItem> items, const RoiSquare& roi, const TileGrid& grid);

}  // namespace odsim
