#include "odsim/tile_grid.hpp"

#include <cmath>
#include <string>

#include "odsim/error.hpp"

namespace odsim {

TileGrid::TileGrid(double tile_side_m, double width_m, double height_m, std::vector<bool> accessible)
    : side_(tile_side_m),
      width_(width_m),
      height_(height_m),
      nx_(static_cast<int>(std::ceil(width_m / tile_side_m - 1e-9))),
      ny_(static_cast<int>(std::ceil(height_m / tile_side_m - 1e-9))),
      accessible_(std::move(accessible)) {
  if (!(tile_side_m > 0.0)) throw GeometryError("tile side must be positive");
  if (nx_ < 1 || ny_ < 1) throw GeometryError("world smaller than one tile");
  if (accessible_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {
    throw GeometryError("accessibility mask does not match grid dimensions");
  }
  versions_.assign(accessible_.size(), 0.0);
  for (std::size_t i = 0; i < accessible_.size(); ++i) {
    if (accessible_[i]) accessible_list_.push_back(from_linear(i));
  }
  if (accessible_list_.empty()) throw GeometryError("world has no accessible tile");
}

void TileGrid::set_version(TileIndex t, double version) {
  double& v = versions_[linear(t)];
  if (version < v) throw Error("tile version may not decrease");
  v = version;
}

World build_world(UrbanMap map, double tile_side_m) {
  validate(map);
  if (!(tile_side_m > 0.0)) throw GeometryError("tile side must be positive");
  const int nx = static_cast<int>(std::ceil(map.width_m / tile_side_m - 1e-9));
  const int ny = static_cast<int>(std::ceil(map.height_m / tile_side_m - 1e-9));
  std::vector<bool> mask(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), false);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const Rect tile{x * tile_side_m, y * tile_side_m, (x + 1) * tile_side_m, (y + 1) * tile_side_m};
      bool hit = false;
      for (const Rect& s : map.streets) hit = hit || tile.overlaps_interior(s);
      for (const Building& b : map.buildings) hit = hit || tile.overlaps_interior(b.footprint);
      mask[static_cast<std::size_t>(y) * nx + x] = hit;
    }
  }
  TileGrid grid(tile_side_m, map.width_m, map.height_m, std::move(mask));
  return World{std::move(map), std::move(grid)};
}

TileIndex tile_of(const Point3& p, const TileGrid& grid) {
  if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= grid.width_m() && p.y <= grid.height_m())) {
    throw TraceError("position (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") outside the world");
  }
  int tx = static_cast<int>(std::floor(p.x / grid.tile_side()));
  int ty = static_cast<int>(std::floor(p.y / grid.tile_side()));
  if (tx >= grid.nx()) tx = grid.nx() - 1;
  if (ty >= grid.ny()) ty = grid.ny() - 1;
  return {tx, ty};
}

std::int64_t to_slots(double seconds, double slot_len, const char* what) {
  const double ratio = seconds / slot_len;
  const double rounded = std::round(ratio);
  if (!std::isfinite(ratio) || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, std::abs(ratio))) {
    throw ConfigError(std::string(what) + " must be a multiple of the slot length");
  }
  return static_cast<std::int64_t>(rounded);
}

std::optional<TileIndex> apply_info_update(TileGrid& grid, const InfoDynamics& dynamics, std::int64_t boundary,
                                           double slot_len, Rng& rng) {
  if (dynamics.is_static()) return std::nullopt;
  const std::int64_t period = to_slots(*dynamics.period_s, slot_len, "info update period");
  if (period <= 0) throw ConfigError("info update period must be positive");
  if (boundary <= 0 || boundary % period != 0) return std::nullopt;
  const auto tiles = grid.accessible_tiles();
  const TileIndex t = tiles[uniform_int<std::size_t>(rng, 0, tiles.size() - 1)];
  grid.set_version(t, static_cast<double>(boundary) * slot_len);
  return t;
}

}  // namespace odsim
