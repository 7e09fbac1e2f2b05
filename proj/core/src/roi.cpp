#include "odsim/roi.hpp"

#include <algorithm>
#include <cmath>

#include "odsim/error.hpp"

namespace odsim {

std::string to_string(RoiModel m) {
  switch (m) {
    case RoiModel::Linked: return "linked";
    case RoiModel::Floating: return "floating";
    case RoiModel::StaticSync: return "static_sync";
    case RoiModel::StaticAsync: return "static_async";
  }
  return "?";
}

std::optional<RoiModel> roi_model_from_string(std::string_view s) {
  if (s == "linked") return RoiModel::Linked;
  if (s == "floating") return RoiModel::Floating;
  if (s == "static_sync") return RoiModel::StaticSync;
  if (s == "static_async") return RoiModel::StaticAsync;
  return std::nullopt;
}

TileWindow roi_window(const RoiSquare& roi, const TileGrid& grid) {
  const double d = grid.tile_side();
  const double h = 0.5 * roi.side;
  auto lo = [&](double c) { return static_cast<int>(std::floor((c - h) / d - 0.5)); };
  auto hi = [&](double c) { return static_cast<int>(std::ceil((c + h) / d - 0.5)); };
  TileWindow w{std::max(0, lo(roi.center.x)), std::max(0, lo(roi.center.y)), std::min(grid.nx() - 1, hi(roi.center.x)),
               std::min(grid.ny() - 1, hi(roi.center.y))};
  // Tighten the one-tile safety margin with the exact membership test.
  while (w.x0 <= w.x1 && !roi.contains({grid.tile_center({w.x0, 0}).x, roi.center.y})) ++w.x0;
  while (w.x1 >= w.x0 && !roi.contains({grid.tile_center({w.x1, 0}).x, roi.center.y})) --w.x1;
  while (w.y0 <= w.y1 && !roi.contains({roi.center.x, grid.tile_center({0, w.y0}).y})) ++w.y0;
  while (w.y1 >= w.y0 && !roi.contains({roi.center.x, grid.tile_center({0, w.y1}).y})) --w.y1;
  return w;
}

std::size_t roi_accessible_count(const RoiSquare& roi, const TileGrid& grid) {
  const TileWindow w = roi_window(roi, grid);
  std::size_t n = 0;
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      if (grid.accessible({x, y})) ++n;
    }
  }
  return n;
}

RoiTable draw_roi_table(const TileGrid& grid, std::size_t count, Rng& rng, std::span<const Point2> exclude) {
  if (count == 0) throw ConfigError("static ROI table needs at least one entry");
  std::vector<Point2> pool;
  std::vector<Point2> fallback;
  for (const TileIndex& t : grid.accessible_tiles()) {
    const Point2 c = grid.tile_center(t);
    const bool excluded = std::find(exclude.begin(), exclude.end(), c) != exclude.end();
    (excluded ? fallback : pool).push_back(c);
  }
  if (pool.size() + fallback.size() < count) {
    throw ConfigError("static ROI table larger than the number of accessible tiles");
  }
  RoiTable table;
  std::sample(pool.begin(), pool.end(), std::back_inserter(table.centers), std::min(count, pool.size()), rng);
  if (table.centers.size() < count) {
    std::sample(fallback.begin(), fallback.end(), std::back_inserter(table.centers), count - table.centers.size(), rng);
  }
  std::shuffle(table.centers.begin(), table.centers.end(), rng);
  return table;
}

}  // namespace odsim
