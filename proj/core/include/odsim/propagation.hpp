#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "odsim/loss_table.hpp"
#include "odsim/trace.hpp"
#include "odsim/urban_map.hpp"

namespace odsim {

/// Log-distance path loss with per-wall and per-floor penalties. All values in dB.
struct LossModel {
  double reference_loss_db{0.0};
  double path_loss_exponent{2.0};
  double wall_penalty_db{12.0};
  double floor_penalty_db{20.0};

  void validate() const;
};

/// Loss threshold attached to the transmitter's kind.
struct ContactThresholds {
  std::array<double, 4> alpha_db{-30.0, -30.0, -30.0, -45.0};

  double of(NodeKind k) const { return alpha_db[kind_index(k)]; }
  void set(NodeKind k, double db) { alpha_db[kind_index(k)] = db; }
  void validate() const;
};

/// Building outlines crossed by the ground segment a-b. A building holding
/// exactly one endpoint counts once; one traversed with both endpoints outside
/// counts twice. Footprints are closed: a point on a wall is inside.
int walls_crossed(Point2 a, Point2 b, const UrbanMap& map);

/// Loss between two co-slot records, always <= -reference_loss.
double channel_loss(const TraceRecord& a, const TraceRecord& b, const UrbanMap& map, const LossModel& model);

/// Largest ground distance at which a transmitter with threshold alpha can
/// still reach anyone (no walls, same level).
double max_range_m(double alpha_db, const LossModel& model);

enum class LossSource { Model, File, Override };

/// Directed reachability for one slot: receivers[i] lists, ascending, the
/// indices j of records that hear a transmission from record i.
struct ContactSet {
  std::vector<std::vector<std::size_t>> receivers;

  /// Unordered pairs {i, j}, i < j, reachable in at least one direction.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
};

/// Effective loss of a pair under the selected source; nullopt means no link.
struct LossContext {
  const UrbanMap* map{nullptr};
  LossModel model;
  LossSource source{LossSource::Model};
  const LossTable* table{nullptr};

  std::optional<double> loss(const TraceRecord& a, const TraceRecord& b) const;
};

/// Reference all-pairs computation. Throws TraceError on a duplicate node or
/// mixed slots.
ContactSet contacts(std::span<const TraceRecord> records, const LossContext& ctx, const ContactThresholds& thresholds);

/// Grid-pruned equivalent of contacts(), restricted to the transmitters flagged
/// in `transmitting` (every record when empty). Reuses its buffers across slots.
class ContactIndex {
 public:
  ContactIndex(LossContext ctx, ContactThresholds thresholds);

  void compute(std::span<const TraceRecord> records, std::span<const char> transmitting, ContactSet& out);

 private:
  LossContext ctx_;
  ContactThresholds thresholds_;
  double cell_;
  std::array<double, 4> range_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::pair<std::int64_t, std::int64_t>> cell_of_;
  std::vector<std::size_t> candidates_;
  int nx_{1};
  int ny_{1};
};

}  // namespace odsim
