#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odsim/geometry.hpp"
#include "odsim/rng.hpp"
#include "odsim/tile_grid.hpp"

namespace odsim {

enum class RoiModel { Linked, Floating, StaticSync, StaticAsync };

std::string to_string(RoiModel m);
std::optional<RoiModel> roi_model_from_string(std::string_view s);

/// Delta x Delta ground square. Membership is half-open: [c - s/2, c + s/2).
struct RoiSquare {
  Point2 center;
  double side{0.0};

  bool contains(Point2 p) const {
    const double h = 0.5 * side;
    return p.x >= center.x - h && p.x < center.x + h && p.y >= center.y - h && p.y < center.y + h;
  }
};

/// A tile belongs to the ROI when its centre does.
inline bool tile_in_roi(TileIndex t, const RoiSquare& roi, const TileGrid& grid) {
  return roi.contains(grid.tile_center(t));
}

/// In-range tile index window that can hold ROI members (clipped to the grid).
struct TileWindow {
  int x0, y0, x1, y1;  // inclusive; empty when x0 > x1 or y0 > y1
};
TileWindow roi_window(const RoiSquare& roi, const TileGrid& grid);

/// Accessible tiles of the grid inside the ROI.
std::size_t roi_accessible_count(const RoiSquare& roi, const TileGrid& grid);

/// Shared table of static ROI centres, drawn among accessible tile centres.
struct RoiTable {
  std::vector<Point2> centers;
  std::uint64_t generation{0};
};

/// Draws `count` distinct accessible tile centres. Centres listed in
/// `exclude` are avoided while enough other tiles remain.
RoiTable draw_roi_table(const TileGrid& grid, std::size_t count, Rng& rng, std::span<const Point2> exclude = {});

}  // namespace odsim
