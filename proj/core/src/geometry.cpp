#include "odsim/geometry.hpp"

#include <algorithm>

namespace odsim {

bool Rect::on_boundary(Point2 p, double eps) const {
  if (!contains_closed(p, eps)) return false;
  return std::abs(p.x - x0) <= eps || std::abs(p.x - x1) <= eps || std::abs(p.y - y0) <= eps ||
         std::abs(p.y - y1) <= eps;
}

Rect Rect::shrunk(double margin) const {
  Rect r{x0 + margin, y0 + margin, x1 - margin, y1 - margin};
  if (r.x0 > r.x1) r.x0 = r.x1 = 0.5 * (x0 + x1);
  if (r.y0 > r.y1) r.y0 = r.y1 = 0.5 * (y0 + y1);
  return r;
}

bool segment_crosses_interior(Point2 a, Point2 b, const Rect& r) {
  // Liang-Barsky clipping against the closed rectangle, then test the clipped
  // midpoint against the open interior so boundary-hugging segments do not count.
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x0, r.x1 - a.x, a.y - r.y0, r.y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  if (t1 - t0 <= 0.0) return r.contains_open(a);
  const double tm = 0.5 * (t0 + t1);
  return r.contains_open({a.x + tm * dx, a.y + tm * dy});
}

double step_towards(Point2& from, Point2 to, double step) {
  const double d = distance(from, to);
  if (d <= step) {
    from = to;
    return d;
  }
  const double f = step / d;
  from.x += (to.x - from.x) * f;
  from.y += (to.y - from.y) * f;
  return step;
}

}  // namespace odsim
