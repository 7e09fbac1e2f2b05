#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odsim/geometry.hpp"
#include "odsim/rng.hpp"
#include "odsim/urban_map.hpp"

namespace odsim {

struct TileIndex {
  int x{0};
  int y{0};

  friend bool operator==(const TileIndex&, const TileIndex&) = default;
  friend auto operator<=>(const TileIndex&, const TileIndex&) = default;
};

/// One versioned information record i(x, y, t).
struct InfoItem {
  TileIndex tile;
  double version{0.0};

  friend bool operator==(const InfoItem&, const InfoItem&) = default;
};

/// The delta-resolution information field over the world.
///
/// Accessibility is fixed at construction. Versions start at 0 and only move
/// forward through set_version().
class TileGrid {
 public:
  TileGrid(double tile_side_m, double width_m, double height_m, std::vector<bool> accessible);

  double tile_side() const { return side_; }
  double width_m() const { return width_; }
  double height_m() const { return height_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return versions_.size(); }

  bool in_range(TileIndex t) const { return t.x >= 0 && t.y >= 0 && t.x < nx_ && t.y < ny_; }
  std::size_t linear(TileIndex t) const {
    return static_cast<std::size_t>(t.y) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(t.x);
  }
  TileIndex from_linear(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(nx_)), static_cast<int>(i / static_cast<std::size_t>(nx_))};
  }
  Point2 tile_center(TileIndex t) const { return {(t.x + 0.5) * side_, (t.y + 0.5) * side_}; }

  bool accessible(TileIndex t) const { return accessible_[linear(t)]; }
  double version(TileIndex t) const { return versions_[linear(t)]; }
  std::span<const TileIndex> accessible_tiles() const { return accessible_list_; }
  std::size_t accessible_count() const { return accessible_list_.size(); }
  std::span<const double> versions() const { return versions_; }

  /// Throws Error when `version` would move the tile backwards in time.
  void set_version(TileIndex t, double version);

 private:
  double side_;
  double width_;
  double height_;
  int nx_;
  int ny_;
  std::vector<bool> accessible_;
  std::vector<double> versions_;
  std::vector<TileIndex> accessible_list_;
};

struct World {
  UrbanMap map;
  TileGrid grid;
};

/// Validates the map and rasterises it; a tile is accessible iff its square
/// shares positive area with a street or a building footprint.
World build_world(UrbanMap map, double tile_side_m);

/// Ground-plane projection onto the grid. Edges belong to the higher index;
/// the far world edge clamps into the last tile. Throws TraceError outside the world.
TileIndex tile_of(const Point3& position, const TileGrid& grid);

/// Information dynamics: one random accessible tile refreshed every `period_s`
/// seconds, or nothing at all when static.
struct InfoDynamics {
  std::optional<double> period_s;

  static InfoDynamics static_info() { return {}; }
  static InfoDynamics every(double seconds) { return {seconds}; }
  bool is_static() const { return !period_s.has_value(); }
};

/// Info update at the slot boundary `boundary` (time boundary * slot_len).
/// The period must be a whole number of slots; one update fires on every
/// positive multiple of it.
std::optional<TileIndex> apply_info_update(TileGrid& grid, const InfoDynamics& dynamics, std::int64_t boundary,
                                           double slot_len, Rng& rng);

/// Converts a duration to a whole number of slots; throws ConfigError if it is
/// not a multiple of slot_len.
std::int64_t to_slots(double seconds, double slot_len, const char* what);

}  // namespace odsim
