#include "odsim/street_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>

namespace odsim {

namespace {

struct Centerline {
  Point2 a;
  Point2 b;
  bool horizontal;
};

Centerline centerline_of(const Rect& s) {
  if (s.width() >= s.height()) {
    const double y = 0.5 * (s.y0 + s.y1);
    return {{s.x0, y}, {s.x1, y}, true};
  }
  const double x = 0.5 * (s.x0 + s.x1);
  return {{x, s.y0}, {x, s.y1}, false};
}

bool on_line(const Centerline& c, Point2 p) {
  constexpr double eps = 1e-6;
  if (c.horizontal) return std::abs(p.y - c.a.y) <= eps && p.x >= c.a.x - eps && p.x <= c.b.x + eps;
  return std::abs(p.x - c.a.x) <= eps && p.y >= c.a.y - eps && p.y <= c.b.y + eps;
}

Point2 project(const Centerline& c, Point2 p) {
  if (c.horizontal) return {std::clamp(p.x, c.a.x, c.b.x), c.a.y};
  return {c.a.x, std::clamp(p.y, c.a.y, c.b.y)};
}

}  // namespace

StreetGraph::StreetGraph(const UrbanMap& map) : entrances_(map.buildings.size()) {
  std::vector<Centerline> lines;
  lines.reserve(map.streets.size());
  for (const Rect& s : map.streets) lines.push_back(centerline_of(s));

  std::vector<Point2> points;
  for (const auto& c : lines) {
    points.push_back(c.a);
    points.push_back(c.b);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& h = lines[i].horizontal ? lines[i] : lines[j];
      const auto& v = lines[i].horizontal ? lines[j] : lines[i];
      if (h.horizontal == v.horizontal) continue;
      const Point2 x{v.a.x, h.a.y};
      if (on_line(h, x) && on_line(v, x)) points.push_back(x);
    }
  }

  std::vector<std::pair<std::size_t, Point2>> spurs;  // entrance vertex, centreline attachment
  for (std::size_t b = 0; b < map.buildings.size(); ++b) {
    for (const Point2& e : map.buildings[b].entrances) {
      for (std::size_t s = 0; s < map.streets.size(); ++s) {
        if (!map.streets[s].on_boundary(e, 1e-6)) continue;
        const Point2 p = project(lines[s], e);
        points.push_back(p);
        const std::size_t ev = intern(e, VertexKind::Entrance, static_cast<int>(b));
        entrances_[b].push_back(ev);
        spurs.emplace_back(ev, p);
        break;
      }
    }
  }

  for (const auto& c : lines) {
    std::vector<std::pair<double, Point2>> on;
    for (const Point2& p : points) {
      if (on_line(c, p)) on.emplace_back(c.horizontal ? p.x : p.y, p);
    }
    std::sort(on.begin(), on.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (const auto& [t, p] : on) {
      const std::size_t v = intern(project(c, p), VertexKind::Street, -1);
      if (prev != std::numeric_limits<std::size_t>::max() && prev != v) connect(prev, v);
      prev = v;
    }
  }
  for (const auto& [ev, p] : spurs) {
    connect(ev, intern(p, VertexKind::Street, -1));
  }
}

std::size_t StreetGraph::intern(Point2 p, VertexKind kind, int building) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (v.kind == kind && std::abs(v.pos.x - p.x) <= 1e-6 && std::abs(v.pos.y - p.y) <= 1e-6) return i;
  }
  vertices_.push_back({p, kind, building});
  adjacency_.emplace_back();
  return vertices_.size() - 1;
}

void StreetGraph::connect(std::size_t a, std::size_t b) {
  for (const auto& e : adjacency_[a]) {
    if (e.to == b) return;
  }
  const double len = distance(vertices_[a].pos, vertices_[b].pos);
  adjacency_[a].push_back({b, len});
  adjacency_[b].push_back({a, len});
}

std::vector<std::size_t> StreetGraph::junctions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].kind == VertexKind::Street && adjacency_[i].size() >= 3) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> StreetGraph::street_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].kind == VertexKind::Street) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> StreetGraph::shortest_path(std::size_t from, std::size_t to) const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(vertices_.size(), inf);
  std::vector<std::size_t> prev(vertices_.size(), std::numeric_limits<std::size_t>::max());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[from] = 0.0;
  queue.emplace(0.0, from);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    if (v == to) break;
    for (const auto& e : adjacency_[v]) {
      // Entrance spurs are dead ends; only route through them as the destination.
      if (vertices_[e.to].kind == VertexKind::Entrance && e.to != to) continue;
      const double nd = d + e.length;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        prev[e.to] = v;
        queue.emplace(nd, e.to);
      }
    }
  }
  if (dist[to] == inf) return {};
  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = prev[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace odsim
