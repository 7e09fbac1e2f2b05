#include "odsim/movers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "odsim/error.hpp"

namespace odsim {

namespace {

int floor_of(double z, double floor_height) { return static_cast<int>(std::floor(z / floor_height + 1e-9)); }

std::int64_t seconds_to_slots(double s, double slot_len) {
  return std::max<std::int64_t>(1, std::llround(s / slot_len));
}

class FixedMover final : public Mover {
 public:
  explicit FixedMover(MoverState s) : state_(s) {}
  const MoverState& current() const override { return state_; }
  void advance() override {}

 private:
  MoverState state_;
};

class PedestrianMover final : public Mover {
 public:
  PedestrianMover(std::shared_ptr<const MobilityContext> ctx, const PedestrianParams& params, double slot_len, Rng rng)
      : ctx_(std::move(ctx)), params_(params), slot_len_(slot_len), rng_(std::move(rng)) {
    const auto& map = ctx_->map;
    streets_ = ctx_->graph.street_vertices();
    if (streets_.empty()) throw GeometryError("pedestrian generation needs at least one street");
    draw_speed();
    for (std::size_t b = 0; b < map.buildings.size(); ++b) {
      if (!ctx_->graph.entrances_of(b).empty()) enterable_.push_back(b);
    }
    if (!enterable_.empty() && uniform(rng_, 0.0, 1.0) < params_.indoor_fraction) {
      const std::size_t b = enterable_[uniform_int<std::size_t>(rng_, 0, enterable_.size() - 1)];
      const Building& bld = map.buildings[b];
      building_ = static_cast<int>(b);
      const int f = uniform_int<int>(rng_, 0, bld.floor_count - 1);
      pos_ = random_spot(bld);
      z_ = f * bld.floor_height_m;
      const double dwell = uniform(rng_, 0.0, params_.dwell_max_s);
      legs_.push_back(Leg::dwell(seconds_to_slots(dwell, slot_len_)));
    } else {
      vertex_ = streets_[uniform_int<std::size_t>(rng_, 0, streets_.size() - 1)];
      pos_ = ctx_->graph.vertex(vertex_).pos;
      plan_outdoor_trip();
    }
    publish();
  }

  const MoverState& current() const override { return state_; }

  void advance() override {
    double budget = speed_mps_ * slot_len_;
    bool used = false;
    int guard = 0;
    while (!used) {
      if (legs_.empty()) plan_next();
      if (++guard > 10000) break;
      Leg& leg = legs_.front();
      switch (leg.type) {
        case Leg::Walk: {
          budget -= step_towards(pos_, leg.target, budget);
          if (pos_ == leg.target) {
            legs_.pop_front();
            if (budget <= 1e-12) used = true;
          } else {
            used = true;
          }
          break;
        }
        case Leg::Climb: {
          const double h = building().floor_height_m;
          const double target = leg.floor * h;
          const double dz = params_.stair_speed_mps * slot_len_;
          if (std::abs(target - z_) <= dz) {
            z_ = target;
            legs_.pop_front();
          } else {
            z_ += target > z_ ? dz : -dz;
          }
          used = true;
          break;
        }
        case Leg::Dwell:
          if (--leg.slots <= 0) legs_.pop_front();
          used = true;
          break;
        case Leg::Enter:
          building_ = leg.building;
          z_ = 0.0;
          legs_.pop_front();
          break;
        case Leg::Exit:
          building_ = -1;
          z_ = 0.0;
          vertex_ = leg.vertex;
          legs_.pop_front();
          break;
      }
    }
    publish();
  }

 private:
  struct Leg {
    enum Type { Walk, Climb, Dwell, Enter, Exit } type;
    Point2 target{};
    int floor{0};
    std::int64_t slots{0};
    int building{-1};
    std::size_t vertex{0};

    static Leg walk(Point2 p) { return {Walk, p}; }
    static Leg climb(int f) { return {Climb, {}, f}; }
    static Leg dwell(std::int64_t n) { return {Dwell, {}, 0, n}; }
    static Leg enter(int b) { return {Enter, {}, 0, 0, b}; }
    static Leg exit(std::size_t v) { return {Exit, {}, 0, 0, -1, v}; }
  };

  const Building& building() const { return ctx_->map.buildings[static_cast<std::size_t>(building_)]; }

  void draw_speed() { speed_mps_ = uniform(rng_, params_.speed.min_kmh, params_.speed.max_kmh) / 3.6; }

  Point2 random_spot(const Building& b) {
    const Rect r = b.footprint.shrunk(1.0);
    return {r.x0 == r.x1 ? r.x0 : uniform(rng_, r.x0, r.x1), r.y0 == r.y1 ? r.y0 : uniform(rng_, r.y0, r.y1)};
  }

  int current_floor() const { return building_ < 0 ? 0 : floor_of(z_, building().floor_height_m); }

  void publish() {
    state_.pos = {pos_.x, pos_.y, z_};
    state_.floor = building_ < 0 ? FloorState::walking() : FloorState::inside(current_floor());
  }

  void plan_next() {
    if (building_ < 0) {
      plan_outdoor_trip();
    } else {
      plan_after_spot();
    }
  }

  void plan_outdoor_trip() {
    draw_speed();
    const auto& graph = ctx_->graph;
    for (int attempt = 0; attempt < 8 && !enterable_.empty(); ++attempt) {
      std::size_t b = enterable_[uniform_int<std::size_t>(rng_, 0, enterable_.size() - 1)];
      if (static_cast<int>(b) == last_building_ && enterable_.size() > 1) continue;
      const auto& doors = graph.entrances_of(b);
      const std::size_t door = doors[uniform_int<std::size_t>(rng_, 0, doors.size() - 1)];
      const auto path = graph.shortest_path(vertex_, door);
      if (path.empty()) continue;
      for (std::size_t i = 1; i < path.size(); ++i) legs_.push_back(Leg::walk(graph.vertex(path[i]).pos));
      legs_.push_back(Leg::enter(static_cast<int>(b)));
      plan_spot(ctx_->map.buildings[b], 0);
      return;
    }
    // No building reachable: wander to another street vertex.
    const std::size_t dest = streets_[uniform_int<std::size_t>(rng_, 0, streets_.size() - 1)];
    const auto path = graph.shortest_path(vertex_, dest);
    for (std::size_t i = 1; i < path.size(); ++i) legs_.push_back(Leg::walk(graph.vertex(path[i]).pos));
    vertex_ = path.empty() ? vertex_ : dest;
    legs_.push_back(Leg::dwell(1));
  }

  /// Walk to a fresh spot on a uniformly drawn floor, then dwell.
  void plan_spot(const Building& b, int from_floor) {
    const int f = uniform_int<int>(rng_, 0, b.floor_count - 1);
    if (f != from_floor) {
      legs_.push_back(Leg::walk(b.shaft()));
      legs_.push_back(Leg::climb(f));
    }
    legs_.push_back(Leg::walk(random_spot(b)));
    legs_.push_back(Leg::dwell(seconds_to_slots(uniform(rng_, params_.dwell_min_s, params_.dwell_max_s), slot_len_)));
  }

  void plan_after_spot() {
    const Building& b = building();
    const int f = current_floor();
    draw_speed();
    if (uniform(rng_, 0.0, 1.0) >= params_.exit_probability) {
      plan_spot(b, f);
      return;
    }
    const auto& doors = ctx_->graph.entrances_of(static_cast<std::size_t>(building_));
    const std::size_t door = doors[uniform_int<std::size_t>(rng_, 0, doors.size() - 1)];
    if (f != 0) {
      legs_.push_back(Leg::walk(b.shaft()));
      legs_.push_back(Leg::climb(0));
    }
    legs_.push_back(Leg::walk(ctx_->graph.vertex(door).pos));
    legs_.push_back(Leg::exit(door));
    last_building_ = building_;
  }

  std::shared_ptr<const MobilityContext> ctx_;
  PedestrianParams params_;
  double slot_len_;
  Rng rng_;
  std::vector<std::size_t> streets_;
  std::vector<std::size_t> enterable_;
  std::deque<Leg> legs_;
  Point2 pos_{};
  double z_{0.0};
  int building_{-1};
  int last_building_{-1};
  std::size_t vertex_{0};
  double speed_mps_{1.0};
  MoverState state_;
};

class VehicleMover final : public Mover {
 public:
  VehicleMover(std::shared_ptr<const MobilityContext> ctx, const VehicleParams& params, double slot_len, Rng rng)
      : ctx_(std::move(ctx)), params_(params), slot_len_(slot_len), rng_(std::move(rng)) {
    const auto& graph = ctx_->graph;
    std::vector<std::size_t> starts;
    for (std::size_t v : graph.street_vertices()) {
      if (!street_neighbors(v).empty()) starts.push_back(v);
    }
    if (starts.empty()) throw GeometryError("vehicle generation needs at least one street segment");
    from_ = starts[uniform_int<std::size_t>(rng_, 0, starts.size() - 1)];
    const auto next = street_neighbors(from_);
    to_ = next[uniform_int<std::size_t>(rng_, 0, next.size() - 1)];
    const Point2 a = graph.vertex(from_).pos;
    const Point2 b = graph.vertex(to_).pos;
    const double f = uniform(rng_, 0.0, 1.0);
    pos_ = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
    draw_speed();
    publish();
  }

  const MoverState& current() const override { return state_; }

  void advance() override {
    if (paused_ > 0) {
      --paused_;
      return;
    }
    double budget = speed_mps_ * slot_len_;
    const auto& graph = ctx_->graph;
    for (int guard = 0; budget > 1e-12 && guard < 1000; ++guard) {
      budget -= step_towards(pos_, graph.vertex(to_).pos, budget);
      if (!(pos_ == graph.vertex(to_).pos)) break;
      auto next = street_neighbors(to_);
      if (next.size() > 1) next.erase(std::remove(next.begin(), next.end(), from_), next.end());
      const std::size_t at = to_;
      from_ = at;
      to_ = next[uniform_int<std::size_t>(rng_, 0, next.size() - 1)];
      draw_speed();
      if (graph.neighbors(at).size() >= 3 && uniform(rng_, 0.0, 1.0) < params_.stop_probability) {
        paused_ = std::llround(uniform(rng_, 0.0, params_.stop_max_s) / slot_len_);
        break;
      }
    }
    publish();
  }

 private:
  std::vector<std::size_t> street_neighbors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& e : ctx_->graph.neighbors(v)) {
      if (ctx_->graph.vertex(e.to).kind == StreetGraph::VertexKind::Street) out.push_back(e.to);
    }
    return out;
  }

  void draw_speed() { speed_mps_ = uniform(rng_, params_.speed.min_kmh, params_.speed.max_kmh) / 3.6; }

  void publish() {
    state_.pos = {pos_.x, pos_.y, 0.0};
    state_.floor = FloorState::driving();
  }

  std::shared_ptr<const MobilityContext> ctx_;
  VehicleParams params_;
  double slot_len_;
  Rng rng_;
  std::size_t from_{0};
  std::size_t to_{0};
  Point2 pos_{};
  double speed_mps_{10.0};
  std::int64_t paused_{0};
  MoverState state_;
};

/// Alternates deterministic stops of `stop_s` with travel at constant speed
/// toward a floor drawn uniformly among all floors but the current one.
class ElevatorMover final : public Mover {
 public:
  ElevatorMover(std::shared_ptr<const MobilityContext> ctx, const ElevatorSpec& spec, double slot_len, Rng rng)
      : ctx_(std::move(ctx)), spec_(spec), slot_len_(slot_len), rng_(std::move(rng)) {
    if (spec.building >= ctx_->map.buildings.size()) throw GeometryError("elevator refers to a missing building");
    if (!(spec.stop_s > 0.0) || !(spec.speed_floors_per_s > 0.0)) {
      throw ModelError("elevator stop time and speed must be positive");
    }
    const Building& b = ctx_->map.buildings[spec.building];
    if (b.floor_count < 2) throw GeometryError("elevator building needs at least two floors");
    floors_ = b.floor_count;
    height_ = b.floor_height_m;
    shaft_ = b.shaft();
    stop_slots_ = seconds_to_slots(spec.stop_s, slot_len_);
    at_ = uniform_int<int>(rng_, 0, floors_ - 1);
    remaining_ = stop_slots_;
    z_floors_ = at_;
    publish();
  }

  const MoverState& current() const override { return state_; }

  void advance() override {
    if (!travelling_) {
      if (--remaining_ > 0) return;
      int dest = uniform_int<int>(rng_, 0, floors_ - 2);
      if (dest >= at_) ++dest;
      dest_ = dest;
      travel_slots_ = static_cast<std::int64_t>(
          std::ceil(std::abs(dest_ - at_) / (spec_.speed_floors_per_s * slot_len_) - 1e-9));
      progress_ = 0;
      travelling_ = true;
    }
    ++progress_;
    const double covered = std::min<double>(progress_ * spec_.speed_floors_per_s * slot_len_, std::abs(dest_ - at_));
    z_floors_ = at_ + (dest_ > at_ ? covered : -covered);
    if (progress_ >= travel_slots_) {
      z_floors_ = dest_;
      at_ = dest_;
      travelling_ = false;
      remaining_ = stop_slots_;
    }
    publish();
  }

 private:
  void publish() {
    state_.pos = {shaft_.x, shaft_.y, z_floors_ * height_};
    state_.floor = FloorState::inside(static_cast<int>(std::floor(z_floors_ + 1e-9)));
  }

  std::shared_ptr<const MobilityContext> ctx_;
  ElevatorSpec spec_;
  double slot_len_;
  Rng rng_;
  int floors_{2};
  double height_{3.5};
  Point2 shaft_{};
  std::int64_t stop_slots_{1};
  std::int64_t remaining_{0};
  bool travelling_{false};
  int at_{0};
  int dest_{0};
  std::int64_t travel_slots_{0};
  std::int64_t progress_{0};
  double z_floors_{0.0};
  MoverState state_;
};

}  // namespace

std::unique_ptr<Mover> make_pedestrian(std::shared_ptr<const MobilityContext> ctx, const PedestrianParams& params,
                                       double slot_len, Rng rng) {
  return std::make_unique<PedestrianMover>(std::move(ctx), params, slot_len, std::move(rng));
}

std::unique_ptr<Mover> make_vehicle(std::shared_ptr<const MobilityContext> ctx, const VehicleParams& params,
                                    double slot_len, Rng rng) {
  return std::make_unique<VehicleMover>(std::move(ctx), params, slot_len, std::move(rng));
}

std::unique_ptr<Mover> make_elevator(std::shared_ptr<const MobilityContext> ctx, const ElevatorSpec& spec,
                                     double slot_len, Rng rng) {
  return std::make_unique<ElevatorMover>(std::move(ctx), spec, slot_len, std::move(rng));
}

std::unique_ptr<Mover> make_fixed(MoverState state) { return std::make_unique<FixedMover>(state); }

SyntheticTraceSource::SyntheticTraceSource(TraceHeader header, std::int64_t slots) : header_(header), slots_(slots) {}

void SyntheticTraceSource::add(NodeId id, NodeKind kind, std::unique_ptr<Mover> mover) {
  if (!nodes_.empty() && id <= nodes_.back().id) throw Error("movers must be added in ascending id order");
  nodes_.push_back({id, kind, std::move(mover)});
}

bool SyntheticTraceSource::next_slot(std::vector<TraceRecord>& out) {
  out.clear();
  if (next_ >= slots_ || nodes_.empty()) return false;
  out.reserve(nodes_.size());
  for (auto& n : nodes_) {
    if (next_ > 0) n.mover->advance();
    const MoverState& s = n.mover->current();
    out.push_back({next_, n.id, n.kind, s.pos, s.floor});
  }
  ++next_;
  return true;
}

std::int64_t slot_count(double duration_s, double slot_len) {
  if (!(slot_len > 0.0)) throw ConfigError("slot length must be positive");
  if (duration_s < 0.0) throw ConfigError("duration must be non-negative");
  return std::llround(duration_s / slot_len);
}

namespace {

TraceHeader header_for(const UrbanMap& map, double slot_len) { return {slot_len, map.width_m, map.height_m}; }

}  // namespace

std::unique_ptr<SyntheticTraceSource> generate_pedestrian_traces(const UrbanMap& map, std::size_t count,
                                                                 const PedestrianParams& params, double duration_s,
                                                                 double slot_len, std::uint64_t seed,
                                                                 NodeId first_id) {
  auto ctx = std::make_shared<const MobilityContext>(map);
  auto src = std::make_unique<SyntheticTraceSource>(header_for(map, slot_len), slot_count(duration_s, slot_len));
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId id = first_id + static_cast<NodeId>(i);
    src->add(id, NodeKind::Pedestrian, make_pedestrian(ctx, params, slot_len, make_rng(seed, Stream::Trace, id)));
  }
  return src;
}

std::unique_ptr<SyntheticTraceSource> generate_vehicle_traces(const UrbanMap& map, std::size_t count,
                                                              const VehicleParams& params, double duration_s,
                                                              double slot_len, std::uint64_t seed,
                                                              NodeId first_id) {
  auto ctx = std::make_shared<const MobilityContext>(map);
  auto src = std::make_unique<SyntheticTraceSource>(header_for(map, slot_len), slot_count(duration_s, slot_len));
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId id = first_id + static_cast<NodeId>(i);
    src->add(id, NodeKind::Vehicular, make_vehicle(ctx, params, slot_len, make_rng(seed, Stream::Trace, id)));
  }
  return src;
}

std::unique_ptr<SyntheticTraceSource> generate_elevator_traces(const UrbanMap& map, const ElevatorSpec& spec,
                                                               double duration_s, double slot_len,
                                                               std::uint64_t seed, NodeId id) {
  auto ctx = std::make_shared<const MobilityContext>(map);
  auto src = std::make_unique<SyntheticTraceSource>(header_for(map, slot_len), slot_count(duration_s, slot_len));
  src->add(id, NodeKind::Elevator, make_elevator(ctx, spec, slot_len, make_rng(seed, Stream::Trace, id)));
  return src;
}

std::vector<MoverState> fixed_positions(const MobilityContext& ctx, std::size_t count, std::uint64_t seed) {
  std::vector<MoverState> sites;
  for (std::size_t v : ctx.graph.junctions()) sites.push_back({{ctx.graph.vertex(v).pos.x, ctx.graph.vertex(v).pos.y, 0.0}, FloorState::walking()});
  for (std::size_t b = 0; b < ctx.map.buildings.size(); ++b) {
    for (std::size_t v : ctx.graph.entrances_of(b)) {
      sites.push_back({{ctx.graph.vertex(v).pos.x, ctx.graph.vertex(v).pos.y, 0.0}, FloorState::inside(0)});
    }
  }
  if (sites.empty()) {
    for (std::size_t v : ctx.graph.street_vertices()) {
      sites.push_back({{ctx.graph.vertex(v).pos.x, ctx.graph.vertex(v).pos.y, 0.0}, FloorState::walking()});
    }
  }
  if (count > 0 && sites.empty()) throw GeometryError("no site available for fixed nodes");
  Rng rng = make_rng(seed, Stream::Trace, 0xF1ED5173ULL);
  std::shuffle(sites.begin(), sites.end(), rng);
  std::vector<MoverState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sites[i % sites.size()]);
  return out;
}

std::vector<ElevatorSpec> place_elevators(const UrbanMap& map, std::size_t count, double stop_s,
                                          double speed_floors_per_s) {
  std::vector<std::size_t> tall;
  for (std::size_t b = 0; b < map.buildings.size(); ++b) {
    if (map.buildings[b].floor_count >= 2) tall.push_back(b);
  }
  if (count > 0 && tall.empty()) throw GeometryError("no building with two or more floors for elevators");
  std::vector<ElevatorSpec> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({tall[i % tall.size()], stop_s, speed_floors_per_s});
  return out;
}

std::unique_ptr<SyntheticTraceSource> generate_population(const UrbanMap& map, const PopulationSpec& pop,
                                                          double duration_s, double slot_len, std::uint64_t seed) {
  auto ctx = std::make_shared<const MobilityContext>(map);
  auto src = std::make_unique<SyntheticTraceSource>(header_for(map, slot_len), slot_count(duration_s, slot_len));
  NodeId id = 0;
  for (const MoverState& s : fixed_positions(*ctx, pop.fixed, seed)) src->add(id++, NodeKind::Fixed, make_fixed(s));
  for (std::size_t i = 0; i < pop.vehicles; ++i, ++id) {
    src->add(id, NodeKind::Vehicular, make_vehicle(ctx, pop.vehicle, slot_len, make_rng(seed, Stream::Trace, id)));
  }
  for (std::size_t i = 0; i < pop.pedestrians; ++i, ++id) {
    src->add(id, NodeKind::Pedestrian,
             make_pedestrian(ctx, pop.pedestrian, slot_len, make_rng(seed, Stream::Trace, id)));
  }
  for (const ElevatorSpec& e : pop.elevators) {
    src->add(id, NodeKind::Elevator, make_elevator(ctx, e, slot_len, make_rng(seed, Stream::Trace, id)));
    ++id;
  }
  return src;
}

}  // namespace odsim
