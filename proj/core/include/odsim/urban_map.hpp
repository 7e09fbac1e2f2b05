#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odsim/geometry.hpp"

namespace odsim {

struct Building {
  Rect footprint;
  int floor_count{1};
  double floor_height_m{3.5};
  /// Doors on the footprint outline; each must also lie on a street boundary.
  std::vector<Point2> entrances;

  /// Stairwell and elevator shaft location.
  Point2 shaft() const { return footprint.center(); }
};

/// Rectilinear urban area: street corridors plus multi-floor buildings.
struct UrbanMap {
  double width_m{0.0};
  double height_m{0.0};
  std::vector<Rect> streets;
  std::vector<Building> buildings;

  Rect bounds() const { return {0.0, 0.0, width_m, height_m}; }

  /// Index of the building whose closed footprint contains p, if any.
  std::optional<std::size_t> building_at(Point2 p) const;
};

/// Throws GeometryError naming the offending elements when an invariant fails.
void validate(const UrbanMap& map);

/// Parametric grid of rectangular blocks separated by streets on every side.
struct BlockMapParams {
  double width_m{550.0};
  double height_m{500.0};
  int blocks_x{3};
  int blocks_y{3};
  /// Width of the north-south streets (they separate blocks along x).
  double street_width_x_m{25.0};
  /// Width of the east-west streets.
  double street_width_y_m{20.0};
  /// Each block is split into split x split buildings.
  int split{2};
  int min_floors{6};
  int max_floors{12};
  double floor_height_m{3.5};
  /// Block (column, row) replaced by four buildings ringing an open courtyard.
  std::optional<std::pair<int, int>> courtyard_block{};
  double courtyard_side_m{50.0};
};

UrbanMap make_block_map(const BlockMapParams& params);

/// 550 m x 500 m, 3x3 blocks, one 50 m courtyard in the centre block aligned to
/// the 25 m tile grid.
BlockMapParams reference_map_params();
UrbanMap reference_map();

UrbanMap parse_map(std::istream& in, const std::string& source = "<map>");
UrbanMap load_map(const std::filesystem::path& path);
void write_map(std::ostream& out, const UrbanMap& map);

}  // namespace odsim
