#include "odsim/urban_map.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "odsim/error.hpp"
#include "odsim/text.hpp"

namespace odsim {

namespace {

constexpr double kEps = 1e-9;

std::string describe(const Rect& r) {
  std::ostringstream os;
  os << "[" << r.x0 << "," << r.x1 << "]x[" << r.y0 << "," << r.y1 << "]";
  return os.str();
}

bool within(const Rect& r, const Rect& bounds) {
  return r.x0 >= bounds.x0 - kEps && r.y0 >= bounds.y0 - kEps && r.x1 <= bounds.x1 + kEps &&
         r.y1 <= bounds.y1 + kEps;
}

}  // namespace

std::optional<std::size_t> UrbanMap::building_at(Point2 p) const {
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    if (buildings[i].footprint.contains_closed(p)) return i;
  }
  return std::nullopt;
}

void validate(const UrbanMap& map) {
  if (!(map.width_m > 0.0) || !(map.height_m > 0.0)) {
    throw GeometryError("world dimensions must be positive");
  }
  const Rect bounds = map.bounds();
  for (std::size_t i = 0; i < map.streets.size(); ++i) {
    const Rect& s = map.streets[i];
    if (!s.valid()) throw GeometryError("street " + std::to_string(i) + " " + describe(s) + " is degenerate");
    if (!within(s, bounds)) {
      throw GeometryError("street " + std::to_string(i) + " " + describe(s) + " lies outside the world");
    }
  }
  for (std::size_t i = 0; i < map.buildings.size(); ++i) {
    const Building& b = map.buildings[i];
    const std::string name = "building " + std::to_string(i) + " " + describe(b.footprint);
    if (!b.footprint.valid()) throw GeometryError(name + " is degenerate");
    if (!within(b.footprint, bounds)) throw GeometryError(name + " lies outside the world");
    if (b.floor_count < 1) throw GeometryError(name + " has no floors");
    if (!(b.floor_height_m > 0.0)) throw GeometryError(name + " has non-positive floor height");
    for (std::size_t j = 0; j < map.streets.size(); ++j) {
      if (b.footprint.overlaps_interior(map.streets[j])) {
        throw GeometryError(name + " overlaps street " + std::to_string(j) + " " + describe(map.streets[j]));
      }
    }
    for (std::size_t j = i + 1; j < map.buildings.size(); ++j) {
      if (b.footprint.overlaps_interior(map.buildings[j].footprint)) {
        throw GeometryError(name + " overlaps building " + std::to_string(j) + " " +
                            describe(map.buildings[j].footprint));
      }
    }
    if (b.entrances.empty()) throw GeometryError(name + " has no entrance");
    for (std::size_t k = 0; k < b.entrances.size(); ++k) {
      const Point2 e = b.entrances[k];
      const std::string ename = name + " entrance " + std::to_string(k);
      if (!b.footprint.on_boundary(e, 1e-6)) throw GeometryError(ename + " is not on the footprint outline");
      bool on_street = false;
      for (const Rect& s : map.streets) on_street = on_street || s.on_boundary(e, 1e-6);
      if (!on_street) throw GeometryError(ename + " does not touch a street boundary");
    }
  }
}

BlockMapParams reference_map_params() {
  BlockMapParams p;
  p.courtyard_block = std::pair{1, 1};
  return p;
}

UrbanMap reference_map() { return make_block_map(reference_map_params()); }

UrbanMap make_block_map(const BlockMapParams& p) {
  if (p.blocks_x < 1 || p.blocks_y < 1 || p.split < 1) throw GeometryError("block counts must be positive");
  if (p.min_floors < 1 || p.max_floors < p.min_floors) throw GeometryError("invalid floor range");
  UrbanMap map;
  map.width_m = p.width_m;
  map.height_m = p.height_m;

  const double block_w = (p.width_m - (p.blocks_x + 1) * p.street_width_x_m) / p.blocks_x;
  const double block_h = (p.height_m - (p.blocks_y + 1) * p.street_width_y_m) / p.blocks_y;
  if (!(block_w > 0.0) || !(block_h > 0.0)) throw GeometryError("streets leave no room for blocks");

  for (int i = 0; i <= p.blocks_x; ++i) {
    const double x0 = i * (block_w + p.street_width_x_m);
    map.streets.push_back({x0, 0.0, x0 + p.street_width_x_m, p.height_m});
  }
  for (int j = 0; j <= p.blocks_y; ++j) {
    const double y0 = j * (block_h + p.street_width_y_m);
    map.streets.push_back({0.0, y0, p.width_m, y0 + p.street_width_y_m});
  }

  const int floor_span = p.max_floors - p.min_floors + 1;
  for (int j = 0; j < p.blocks_y; ++j) {
    for (int i = 0; i < p.blocks_x; ++i) {
      const Rect block{p.street_width_x_m + i * (block_w + p.street_width_x_m),
                       p.street_width_y_m + j * (block_h + p.street_width_y_m),
                       p.street_width_x_m + i * (block_w + p.street_width_x_m) + block_w,
                       p.street_width_y_m + j * (block_h + p.street_width_y_m) + block_h};
      std::vector<Rect> parts;
      if (p.courtyard_block && p.courtyard_block->first == i && p.courtyard_block->second == j) {
        const Point2 c = block.center();
        const double h = 0.5 * p.courtyard_side_m;
        const Rect yard{c.x - h, c.y - h, c.x + h, c.y + h};
        if (yard.x0 <= block.x0 || yard.x1 >= block.x1 || yard.y0 <= block.y0 || yard.y1 >= block.y1) {
          throw GeometryError("courtyard does not fit inside its block");
        }
        parts.push_back({block.x0, block.y0, yard.x0, block.y1});
        parts.push_back({yard.x1, block.y0, block.x1, block.y1});
        parts.push_back({yard.x0, block.y0, yard.x1, yard.y0});
        parts.push_back({yard.x0, yard.y1, yard.x1, block.y1});
      } else {
        const double w = block.width() / p.split;
        const double h = block.height() / p.split;
        for (int b = 0; b < p.split; ++b) {
          for (int a = 0; a < p.split; ++a) {
            const double x0 = a == 0 ? block.x0 : block.x0 + a * w;
            const double y0 = b == 0 ? block.y0 : block.y0 + b * h;
            const double x1 = a == p.split - 1 ? block.x1 : block.x0 + (a + 1) * w;
            const double y1 = b == p.split - 1 ? block.y1 : block.y0 + (b + 1) * h;
            parts.push_back({x0, y0, x1, y1});
          }
        }
      }
      for (std::size_t q = 0; q < parts.size(); ++q) {
        Building bld;
        bld.footprint = parts[q];
        bld.floor_count = p.min_floors + (3 * i + 5 * j + 2 * static_cast<int>(q) + i * j) % floor_span;
        bld.floor_height_m = p.floor_height_m;
        const Rect& f = bld.footprint;
        // One door at the midpoint of every side that faces a street.
        if (f.x0 == block.x0) bld.entrances.push_back({f.x0, 0.5 * (f.y0 + f.y1)});
        if (f.x1 == block.x1) bld.entrances.push_back({f.x1, 0.5 * (f.y0 + f.y1)});
        if (f.y0 == block.y0) bld.entrances.push_back({0.5 * (f.x0 + f.x1), f.y0});
        if (f.y1 == block.y1) bld.entrances.push_back({0.5 * (f.x0 + f.x1), f.y1});
        map.buildings.push_back(std::move(bld));
      }
    }
  }
  validate(map);
  return map;
}

UrbanMap parse_map(std::istream& in, const std::string& source) {
  UrbanMap map;
  std::string line;
  std::size_t line_no = 0;
  bool have_schema = false;
  bool have_world = false;
  auto number = [&](std::string_view tok) {
    auto v = text::parse_double(tok);
    if (!v) throw ParseError(source, line_no, "expected a number, got '" + std::string(tok) + "'");
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    auto tok = text::split(body);
    if (!have_schema) {
      if (tok.size() != 2 || tok[0] != "odsim-map" || tok[1] != "1") {
        throw ParseError(source, line_no, "expected schema line 'odsim-map 1'");
      }
      have_schema = true;
      continue;
    }
    if (tok[0] == "world") {
      if (tok.size() != 3) throw ParseError(source, line_no, "usage: world <width_m> <height_m>");
      map.width_m = number(tok[1]);
      map.height_m = number(tok[2]);
      have_world = true;
    } else if (tok[0] == "street") {
      if (tok.size() != 5) throw ParseError(source, line_no, "usage: street <x0> <y0> <x1> <y1>");
      map.streets.push_back({number(tok[1]), number(tok[2]), number(tok[3]), number(tok[4])});
    } else if (tok[0] == "building") {
      if (tok.size() < 5) throw ParseError(source, line_no, "usage: building <x0> <y0> <x1> <y1> ...");
      Building b;
      b.footprint = {number(tok[1]), number(tok[2]), number(tok[3]), number(tok[4])};
      for (std::size_t i = 5; i < tok.size();) {
        if (tok[i] == "floors" && i + 1 < tok.size()) {
          auto n = text::parse_int<int>(tok[i + 1]);
          if (!n) throw ParseError(source, line_no, "floors expects an integer");
          b.floor_count = *n;
          i += 2;
        } else if (tok[i] == "height" && i + 1 < tok.size()) {
          b.floor_height_m = number(tok[i + 1]);
          i += 2;
        } else if (tok[i] == "entrance" && i + 2 < tok.size()) {
          b.entrances.push_back({number(tok[i + 1]), number(tok[i + 2])});
          i += 3;
        } else {
          throw ParseError(source, line_no, "unknown building attribute '" + std::string(tok[i]) + "'");
        }
      }
      map.buildings.push_back(std::move(b));
    } else {
      throw ParseError(source, line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_schema) throw ParseError(source, line_no, "empty map file");
  if (!have_world) throw ParseError(source, line_no, "missing 'world' record");
  validate(map);
  return map;
}

UrbanMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file " + path.string());
  return parse_map(in, path.string());
}

void write_map(std::ostream& out, const UrbanMap& map) {
  using text::format_double;
  out << "odsim-map 1\n";
  out << "world " << format_double(map.width_m) << ' ' << format_double(map.height_m) << '\n';
  for (const Rect& s : map.streets) {
    out << "street " << format_double(s.x0) << ' ' << format_double(s.y0) << ' ' << format_double(s.x1) << ' '
        << format_double(s.y1) << '\n';
  }
  for (const Building& b : map.buildings) {
    const Rect& f = b.footprint;
    out << "building " << format_double(f.x0) << ' ' << format_double(f.y0) << ' ' << format_double(f.x1) << ' '
        << format_double(f.y1) << " floors " << b.floor_count << " height " << format_double(b.floor_height_m);
    for (const Point2& e : b.entrances) out << " entrance " << format_double(e.x) << ' ' << format_double(e.y);
    out << '\n';
  }
}

}  // namespace odsim
