#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "odsim/loss_table.hpp"
#include "odsim/metrics.hpp"
#include "odsim/node.hpp"
#include "odsim/scenario.hpp"
#include "odsim/tile_grid.hpp"
#include "odsim/trace.hpp"

namespace odsim {

/// State visible to observers at the end of a slot.
struct SlotView {
  std::int64_t slot;
  std::int64_t boundary;
  double t;
  std::span<const NodeState> nodes;
  std::span<const TraceRecord> records;
  const TileGrid& grid;
};

struct RunOptions {
  /// Called after every metrics sample.
  std::function<void(const SlotView&)> on_sample;
  /// Called at the end of every slot.
  std::function<void(const SlotView&)> on_slot;
};

/// Everything a run reads besides the scenario itself.
struct RunInputs {
  World world;
  std::unique_ptr<TraceSource> trace;
  std::optional<LossTable> loss;
};

/// Loads or builds the map, opens or generates the traces and loads the loss
/// file named by the scenario.
RunInputs prepare_inputs(const Scenario& scenario);

/// Reference transmit period of F, V and E nodes.
inline constexpr double kReferencePeriod = 0.2;

/// Per-kind policy actually applied: P keeps its configured schedule, the
/// other kinds transmit every reference period with no context policy.
KindParams effective_params(const Scenario& scenario, NodeKind kind);

RunMetrics run(const Scenario& scenario, const RunOptions& options = {});
RunMetrics run(const Scenario& scenario, RunInputs& inputs, const RunOptions& options = {});

/// Every CSV output of a run concatenated, for byte comparison.
std::string metrics_fingerprint(const RunMetrics& m);

/// True when both runs produced identical outputs. Throws Error when the two
/// runs belong to different scenarios.
bool replay_check(const RunMetrics& a, const RunMetrics& b);
/// Runs the scenario twice with `seed` and compares the outputs.
bool replay_check(const Scenario& scenario, std::uint64_t seed);

}  // namespace odsim
