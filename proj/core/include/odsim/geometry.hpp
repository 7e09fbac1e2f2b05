#pragma once

#include <cmath>

namespace odsim {

struct Point2 {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  Point2 ground() const { return {x, y}; }

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

/// Axis-aligned rectangle in the ground plane, x0 <= x1 and y0 <= y1.
struct Rect {
  double x0{0.0};
  double y0{0.0};
  double x1{0.0};
  double y1{0.0};

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Point2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool valid() const { return x1 > x0 && y1 > y0; }

  bool contains_closed(Point2 p, double eps = 0.0) const {
    return p.x >= x0 - eps && p.x <= x1 + eps && p.y >= y0 - eps && p.y <= y1 + eps;
  }
  bool contains_open(Point2 p) const { return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1; }

  /// True when the point lies on the rectangle outline (within eps).
  bool on_boundary(Point2 p, double eps = 1e-9) const;

  /// True when the two rectangles share a region of positive area.
  bool overlaps_interior(const Rect& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }

  Rect shrunk(double margin) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// True when segment [a,b] passes through the open interior of r.
bool segment_crosses_interior(Point2 a, Point2 b, const Rect& r);

/// Move from `from` towards `to` by at most `step`; returns the distance actually covered.
double step_towards(Point2& from, Point2 to, double step);

}  // namespace odsim
