#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "odsim/geometry.hpp"
#include "odsim/urban_map.hpp"

namespace odsim {

/// Walkable/drivable network: street centrelines split at every crossing,
/// plus a short spur from the centreline to each building entrance.
class StreetGraph {
 public:
  enum class VertexKind { Street, Entrance };

  struct Vertex {
    Point2 pos;
    VertexKind kind{VertexKind::Street};
    int building{-1};
  };

  struct Edge {
    std::size_t to;
    double length;
  };

  explicit StreetGraph(const UrbanMap& map);

  std::size_t size() const { return vertices_.size(); }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const std::vector<Edge>& neighbors(std::size_t v) const { return adjacency_[v]; }

  /// Street vertices where three or more edges meet.
  std::vector<std::size_t> junctions() const;
  std::vector<std::size_t> street_vertices() const;
  const std::vector<std::size_t>& entrances_of(std::size_t building) const { return entrances_[building]; }

  /// Vertex sequence from `from` to `to` inclusive; empty when unreachable.
  std::vector<std::size_t> shortest_path(std::size_t from, std::size_t to) const;

 private:
  std::size_t intern(Point2 p, VertexKind kind, int building);
  void connect(std::size_t a, std::size_t b);

  std::vector<Vertex> vertices_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::vector<std::size_t>> entrances_;
};

}  // namespace odsim
