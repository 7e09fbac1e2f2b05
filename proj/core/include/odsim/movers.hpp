#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "odsim/floor_state.hpp"
#include "odsim/rng.hpp"
#include "odsim/street_graph.hpp"
#include "odsim/trace.hpp"
#include "odsim/urban_map.hpp"

namespace odsim {

struct SpeedRange {
  double min_kmh{0.0};
  double max_kmh{0.0};

  double max_mps() const { return max_kmh / 3.6; }
};

/// Pedestrians alternate street walks between buildings and indoor visits.
/// An indoor visit is a chain of spots, each on a uniformly drawn floor; after
/// every spot the pedestrian leaves with probability `exit_probability`.
struct PedestrianParams {
  SpeedRange speed{2.5, 6.5};
  /// Fraction of pedestrians that start inside a building.
  double indoor_fraction{0.8};
  double dwell_min_s{300.0};
  double dwell_max_s{1800.0};
  double exit_probability{0.3};
  /// Vertical speed on stairs.
  double stair_speed_mps{0.5};
};

struct VehicleParams {
  SpeedRange speed{25.0, 67.0};
  /// Probability of pausing at a junction, and the longest pause.
  double stop_probability{0.2};
  double stop_max_s{10.0};
};

struct ElevatorSpec {
  std::size_t building{0};
  /// Stop time at every floor (deterministic).
  double stop_s{60.0};
  double speed_floors_per_s{1.0};
};

struct MoverState {
  Point3 pos;
  FloorState floor;
};

/// One node's synthetic mobility process, advanced one slot at a time.
class Mover {
 public:
  virtual ~Mover() = default;
  virtual const MoverState& current() const = 0;
  virtual void advance() = 0;
};

/// Map and street network shared by every mover of a population.
struct MobilityContext {
  explicit MobilityContext(UrbanMap m) : map(std::move(m)), graph(map) {}
  UrbanMap map;
  StreetGraph graph;
};

std::unique_ptr<Mover> make_pedestrian(std::shared_ptr<const MobilityContext> ctx, const PedestrianParams& params,
                                       double slot_len, Rng rng);
std::unique_ptr<Mover> make_vehicle(std::shared_ptr<const MobilityContext> ctx, const VehicleParams& params,
                                    double slot_len, Rng rng);
std::unique_ptr<Mover> make_elevator(std::shared_ptr<const MobilityContext> ctx, const ElevatorSpec& spec,
                                     double slot_len, Rng rng);
std::unique_ptr<Mover> make_fixed(MoverState state);

/// Streams the records of a set of movers for a fixed number of slots.
class SyntheticTraceSource final : public TraceSource {
 public:
  SyntheticTraceSource(TraceHeader header, std::int64_t slots);

  /// Movers must be added in ascending id order.
  void add(NodeId id, NodeKind kind, std::unique_ptr<Mover> mover);

  const TraceHeader& header() const override { return header_; }
  bool next_slot(std::vector<TraceRecord>& out) override;
  std::size_t node_count() const { return nodes_.size(); }
  std::int64_t slots() const { return slots_; }

 private:
  struct Entry {
    NodeId id;
    NodeKind kind;
    std::unique_ptr<Mover> mover;
  };
  TraceHeader header_;
  std::int64_t slots_;
  std::int64_t next_{0};
  std::vector<Entry> nodes_;
};

std::int64_t slot_count(double duration_s, double slot_len);

/// Every generator derives each node's stream from (seed, node id), so a
/// node's trajectory does not depend on the rest of the population.
std::unique_ptr<SyntheticTraceSource> generate_pedestrian_traces(const UrbanMap& map, std::size_t count,
                                                                 const PedestrianParams& params, double duration_s,
                                                                 double slot_len, std::uint64_t seed,
                                                                 NodeId first_id = 0);
std::unique_ptr<SyntheticTraceSource> generate_vehicle_traces(const UrbanMap& map, std::size_t count,
                                                              const VehicleParams& params, double duration_s,
                                                              double slot_len, std::uint64_t seed,
                                                              NodeId first_id = 0);
std::unique_ptr<SyntheticTraceSource> generate_elevator_traces(const UrbanMap& map, const ElevatorSpec& spec,
                                                               double duration_s, double slot_len,
                                                               std::uint64_t seed, NodeId id = 0);

/// Fixed relays at junctions (ground, outdoors) and building entrances (floor 0).
std::vector<MoverState> fixed_positions(const MobilityContext& ctx, std::size_t count, std::uint64_t seed);

/// Spreads `count` elevators round-robin over buildings with two or more floors.
std::vector<ElevatorSpec> place_elevators(const UrbanMap& map, std::size_t count, double stop_s,
                                          double speed_floors_per_s);

struct PopulationSpec {
  std::size_t fixed{54};
  std::size_t vehicles{50};
  std::size_t pedestrians{200};
  std::vector<ElevatorSpec> elevators;
  PedestrianParams pedestrian;
  VehicleParams vehicle;

  std::size_t total() const { return fixed + vehicles + pedestrians + elevators.size(); }
};

/// Node ids: F first, then V, P and E, contiguous from 0.
std::unique_ptr<SyntheticTraceSource> generate_population(const UrbanMap& map, const PopulationSpec& population,
                                                          double duration_s, double slot_len, std::uint64_t seed);

}  // namespace odsim
