#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "odsim/error.hpp"
#include "odsim/movers.hpp"
#include "odsim/trace.hpp"
#include "oracles.hpp"

using namespace odsim;

namespace {

constexpr double kSlot = 0.2;

UrbanMap ten_floor_map() {
  BlockMapParams p;
  p.width_m = 200.0;
  p.height_m = 200.0;
  p.blocks_x = 1;
  p.blocks_y = 1;
  p.split = 1;
  p.min_floors = 10;
  p.max_floors = 10;
  return make_block_map(p);
}

UrbanMap two_floor_map() {
  BlockMapParams p;
  p.width_m = 200.0;
  p.height_m = 200.0;
  p.blocks_x = 1;
  p.blocks_y = 1;
  p.split = 1;
  p.min_floors = 2;
  p.max_floors = 2;
  return make_block_map(p);
}

double ground_step(const TraceRecord& a, const TraceRecord& b) { return distance(a.pos.ground(), b.pos.ground()); }

/// True when record i is the first slot of an elevator stop: at a floor level
/// and not moving on to the next record.
bool stop_starts(const std::vector<TraceRecord>& recs, std::size_t i, double h) {
  const double z = recs[i].pos.z / h;
  if (std::abs(z - std::round(z)) > 1e-9) return false;
  if (i > 0 && recs[i - 1].pos.z == recs[i].pos.z) return false;
  return i + 1 == recs.size() || recs[i + 1].pos.z == recs[i].pos.z;
}

/// Per-record agreement between z and the floor state.
void expect_consistent(const TraceRecord& r, const UrbanMap& map) {
  if (r.floor.is_inside()) {
    const auto b = map.building_at(r.pos.ground());
    ASSERT_TRUE(b.has_value()) << "indoor record outside every footprint, node " << r.node << " slot " << r.slot;
    const Building& bld = map.buildings[*b];
    EXPECT_GE(r.floor.floor, 0);
    EXPECT_LT(r.floor.floor, bld.floor_count);
    EXPECT_LE(r.floor.floor * bld.floor_height_m, r.pos.z + 1e-9);
    EXPECT_LT(r.pos.z, (r.floor.floor + 1) * bld.floor_height_m);
  } else {
    EXPECT_EQ(r.pos.z, 0.0);
  }
}

}  // namespace

TEST(Pedestrian, OneSlotGivesOneRecord) {
  auto src = generate_pedestrian_traces(reference_map(), 1, {}, kSlot, kSlot, 1);
  const auto recs = collect(*src);
  ASSERT_EQ(recs.size(), 1u);
  const auto w = recs[0].floor.where;
  EXPECT_TRUE(w == FloorState::Where::WalkingOutside || w == FloorState::Where::Inside);
}

TEST(Pedestrian, DisplacementBoundAndConsistency) {
  const UrbanMap map = reference_map();
  PedestrianParams p;
  auto src = generate_pedestrian_traces(map, 40, p, 3600.0, kSlot, 9);
  const double bound = 6.5 / 3.6 * kSlot;
  EXPECT_NEAR(bound, 0.361, 1e-3);
  const double vbound = p.stair_speed_mps * kSlot;
  std::vector<TraceRecord> prev, cur;
  std::int64_t slots = 0;
  while (src->next_slot(cur)) {
    ++slots;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      expect_consistent(cur[i], map);
      if (!prev.empty()) {
        EXPECT_LE(ground_step(prev[i], cur[i]), bound + 1e-9);
        EXPECT_LE(std::abs(prev[i].pos.z - cur[i].pos.z), vbound + 1e-9);
      }
    }
    prev.swap(cur);
  }
  EXPECT_EQ(slots, 18000);
}

TEST(Pedestrian, NoFloorTeleporting) {
  const UrbanMap map = reference_map();
  auto src = generate_pedestrian_traces(map, 200, {}, 10800.0, kSlot, 4);
  std::vector<TraceRecord> prev, cur;
  std::size_t floor_changes = 0;
  std::size_t entries = 0;
  while (src->next_slot(cur)) {
    if (!prev.empty()) {
      for (std::size_t i = 0; i < cur.size(); ++i) {
        const FloorState& a = prev[i].floor;
        const FloorState& b = cur[i].floor;
        if (a == b) continue;
        if (a.is_inside() && b.is_inside()) {
          ASSERT_EQ(std::abs(a.floor - b.floor), 1) << "node " << cur[i].node << " slot " << cur[i].slot;
          ++floor_changes;
        } else if (b.is_inside()) {
          ASSERT_EQ(b.floor, 0) << "entered above ground, node " << cur[i].node;
          ++entries;
        } else {
          ASSERT_EQ(a.floor, 0) << "left from above ground, node " << cur[i].node;
        }
      }
    }
    prev.swap(cur);
  }
  EXPECT_GT(floor_changes, 0u);
  EXPECT_GT(entries, 0u);
}

TEST(Pedestrian, MapWithoutStreetsIsRejected) {
  UrbanMap m;
  m.width_m = 50.0;
  m.height_m = 50.0;
  EXPECT_THROW(generate_pedestrian_traces(m, 1, {}, 1.0, kSlot, 1), GeometryError);
  EXPECT_THROW(generate_vehicle_traces(m, 1, {}, 1.0, kSlot, 1), GeometryError);
}

TEST(Pedestrian, TrajectoryIndependentOfPopulation) {
  const UrbanMap map = reference_map();
  auto one = collect(*generate_pedestrian_traces(map, 1, {}, 600.0, kSlot, 2, 7));
  auto many = collect(*generate_pedestrian_traces(map, 5, {}, 600.0, kSlot, 2, 3));
  std::vector<TraceRecord> picked;
  for (const auto& r : many) {
    if (r.node == 7) picked.push_back(r);
  }
  EXPECT_EQ(one, picked);
}

TEST(Vehicle, OneSlotGivesOneDrivingRecord) {
  auto recs = collect(*generate_vehicle_traces(reference_map(), 1, {}, kSlot, kSlot, 1));
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].floor.where, FloorState::Where::DrivingInCar);
}

TEST(Vehicle, StaysOnStreetsWithinTheSpeedBound) {
  const UrbanMap map = reference_map();
  VehicleParams p;
  auto src = generate_vehicle_traces(map, 20, p, 3600.0, kSlot, 5);
  const double bound = 67.0 / 3.6 * kSlot;
  EXPECT_NEAR(bound, 3.723, 1e-3);
  std::vector<TraceRecord> prev, cur;
  double longest = 0.0;
  while (src->next_slot(cur)) {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const TraceRecord& r = cur[i];
      bool on_street = false;
      for (const Rect& s : map.streets) on_street = on_street || s.contains_closed(r.pos.ground(), 1e-9);
      ASSERT_TRUE(on_street) << "vehicle off street at (" << r.pos.x << ", " << r.pos.y << ")";
      EXPECT_EQ(r.floor.where, FloorState::Where::DrivingInCar);
      EXPECT_EQ(r.pos.z, 0.0);
      if (!prev.empty()) {
        const double d = ground_step(prev[i], r);
        longest = std::max(longest, d);
        EXPECT_LE(d, bound + 1e-9);
      }
    }
    prev.swap(cur);
  }
  EXPECT_GT(longest, 0.5 * bound);
}

TEST(Elevator, StopPhasesPerHour) {
  const UrbanMap map = ten_floor_map();
  ASSERT_EQ(map.buildings[0].floor_count, 10);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto recs = collect(*generate_elevator_traces(map, {0, 60.0, 1.0}, 3600.0, kSlot, seed));
    ASSERT_EQ(recs.size(), 18000u);
    const double h = map.buildings[0].floor_height_m;
    int stops = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) stops += stop_starts(recs, i, h) ? 1 : 0;
    EXPECT_GE(stops, 3600 / (60 + 9)) << "seed " << seed;
    EXPECT_LE(stops, 60) << "seed " << seed;
  }
}

TEST(Elevator, TravelTimeMatchesSpeed) {
  const UrbanMap map = ten_floor_map();
  const double h = map.buildings[0].floor_height_m;
  auto recs = collect(*generate_elevator_traces(map, {0, 5.0, 1.0}, 36000.0, kSlot, 3));
  int full_height_legs = 0;
  std::size_t depart = 0;
  bool moving = false;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& a = recs[i - 1];
    const auto& b = recs[i];
    EXPECT_EQ(a.pos.ground(), b.pos.ground());
    EXPECT_LE(std::abs(a.pos.z - b.pos.z), 1.0 * kSlot * h + 1e-9);
    expect_consistent(b, map);
    if (!moving && a.pos.z != b.pos.z) {
      moving = true;
      depart = i - 1;
    }
    if (moving && stop_starts(recs, i, h)) {
      const int floors = static_cast<int>(std::lround(std::abs(b.pos.z - recs[depart].pos.z) / h));
      EXPECT_EQ(static_cast<int>(i - depart), 5 * floors);
      if (floors == 9) ++full_height_legs;
      moving = false;
    }
  }
  EXPECT_GT(full_height_legs, 0);
}

TEST(Elevator, TwoFloorBuildingAlternates) {
  const UrbanMap map = two_floor_map();
  auto recs = collect(*generate_elevator_traces(map, {0, 10.0, 1.0}, 3600.0, kSlot, 8));
  std::vector<int> stops;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (stop_starts(recs, i, map.buildings[0].floor_height_m)) stops.push_back(recs[i].floor.floor);
  }
  ASSERT_GT(stops.size(), 100u);
  for (std::size_t i = 1; i < stops.size(); ++i) EXPECT_NE(stops[i], stops[i - 1]);
}

TEST(Elevator, SingleFloorBuildingIsRejected) {
  BlockMapParams p;
  p.width_m = 200.0;
  p.height_m = 200.0;
  p.blocks_x = 1;
  p.blocks_y = 1;
  p.split = 1;
  p.min_floors = 1;
  p.max_floors = 1;
  EXPECT_THROW(generate_elevator_traces(make_block_map(p), {0, 60.0, 1.0}, 10.0, kSlot, 1), GeometryError);
  EXPECT_THROW(place_elevators(make_block_map(p), 1, 60.0, 1.0), GeometryError);
}

TEST(Fixed, PositionsNeverChange) {
  const UrbanMap map = reference_map();
  PopulationSpec pop;
  pop.vehicles = 0;
  pop.pedestrians = 0;
  auto src = generate_population(map, pop, 600.0, kSlot, 3);
  std::vector<TraceRecord> first, cur;
  ASSERT_TRUE(src->next_slot(first));
  ASSERT_EQ(first.size(), 54u);
  while (src->next_slot(cur)) {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      EXPECT_EQ(cur[i].pos, first[i].pos);
      EXPECT_EQ(cur[i].floor, first[i].floor);
      EXPECT_EQ(cur[i].kind, NodeKind::Fixed);
    }
  }
}

TEST(Population, IdsAreContiguousByKind) {
  PopulationSpec pop;
  pop.fixed = 3;
  pop.vehicles = 2;
  pop.pedestrians = 4;
  pop.elevators = place_elevators(reference_map(), 2, 60.0, 1.0);
  auto src = generate_population(reference_map(), pop, kSlot, kSlot, 1);
  std::vector<TraceRecord> recs;
  ASSERT_TRUE(src->next_slot(recs));
  const std::vector<NodeKind> expected{NodeKind::Fixed,      NodeKind::Fixed,      NodeKind::Fixed,
                                       NodeKind::Vehicular,  NodeKind::Vehicular,  NodeKind::Pedestrian,
                                       NodeKind::Pedestrian, NodeKind::Pedestrian, NodeKind::Pedestrian,
                                       NodeKind::Elevator,   NodeKind::Elevator};
  ASSERT_EQ(recs.size(), expected.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].node, i);
    EXPECT_EQ(recs[i].kind, expected[i]);
  }
}

TEST(TraceFormat, RoundTripOfAGeneratedStream) {
  PopulationSpec pop;
  pop.fixed = 4;
  pop.vehicles = 5;
  pop.pedestrians = 10;
  pop.elevators = place_elevators(reference_map(), 2, 30.0, 1.0);
  auto src = generate_population(reference_map(), pop, 120.0, kSlot, 6);
  const auto original = collect(*generate_population(reference_map(), pop, 120.0, kSlot, 6));
  std::stringstream ss;
  EXPECT_EQ(write_traces(*src, ss), original.size());
  TraceHeader h;
  const auto back = load_traces(ss, &h);
  EXPECT_EQ(h, (TraceHeader{kSlot, 550.0, 500.0}));
  EXPECT_EQ(back, original);
}

TEST(TraceFormat, EmptyStreamRoundTrip) {
  const TraceHeader h{0.2, 100.0, 50.0};
  std::stringstream ss;
  EXPECT_EQ(write_traces(h, {}, ss), 0u);
  TraceHeader back_h;
  EXPECT_TRUE(load_traces(ss, &back_h).empty());
  EXPECT_EQ(back_h, h);
}

TEST(TraceFormat, SlotRegressionIsRejected) {
  std::istringstream in(
      "# odsim-trace 1 slot_len=0.2 width=100 height=100\n"
      "7,1,P,1,1,0,WO\n"
      "5,1,P,1,1,0,WO\n");
  try {
    load_traces(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("regression"), std::string::npos);
  }
}

TEST(TraceFormat, MalformedLinesNameTheLine) {
  const std::vector<std::string> bad{"0,1,P,1,1,WO", "0,1,Q,1,1,0,WO", "0,1,P,1,x,0,WO", "0,1,P,1,1,0,I:", "-1,1,P,1,1,0,WO"};
  for (const auto& line : bad) {
    std::istringstream in("# odsim-trace 1 slot_len=0.2 width=100 height=100\n0,0,P,1,1,0,WO\n" + line + "\n");
    try {
      load_traces(in);
      FAIL() << line;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 3u) << line;
    }
  }
}

TEST(TraceFormat, DuplicateAndOrderErrors) {
  std::istringstream dup("# odsim-trace 1 slot_len=0.2 width=100 height=100\n0,1,P,1,1,0,WO\n0,1,P,1,1,0,WO\n");
  EXPECT_THROW(load_traces(dup), ParseError);
  std::istringstream order("# odsim-trace 1 slot_len=0.2 width=100 height=100\n0,2,P,1,1,0,WO\n0,1,P,1,1,0,WO\n");
  EXPECT_THROW(load_traces(order), ParseError);
  std::istringstream header("slot,node\n");
  EXPECT_THROW(load_traces(header), ParseError);
}

TEST(TraceFormat, FloorCodesRoundTrip) {
  for (const auto& s : {FloorState::inside(0), FloorState::inside(11), FloorState::walking(), FloorState::driving(),
                        FloorState::outside_area(), FloorState{FloorState::Where::InParkingLot, 0},
                        FloorState{FloorState::Where::InSubwayStation, 0}}) {
    const auto back = floor_state_from_code(to_code(s));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, s);
  }
  EXPECT_FALSE(floor_state_from_code("XX").has_value());
}
