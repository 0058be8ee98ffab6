#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bssn {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

using Triangle = std::array<std::size_t, 3>;
using Edge = std::array<std::size_t, 2>;

/// Uniform P1 triangulation of the unit square.
///
/// Nodes are numbered lexicographically, row by row with the column index
/// running fastest: node (row r, column c) has index r * (n + 1) + c and sits
/// at (c * h, r * h). Each grid cell is split along its lower-left to
/// upper-right diagonal and both triangles are stored counterclockwise.
/// Boundary edges run counterclockwise around the square.
class TriMesh {
 public:
  static constexpr int kMinLevel = 1;
  static constexpr int kMaxLevel = 12;

  /// Throws ConfigError unless kMinLevel <= level <= kMaxLevel.
  static TriMesh uniform(int level);

  int level() const noexcept { return level_; }
  /// Cells per side, 2^level.
  std::size_t cells_per_side() const noexcept { return cells_; }
  /// Nodes per side, 2^level + 1.
  std::size_t nodes_per_side() const noexcept { return cells_ + 1; }
  double h() const noexcept { return h_; }

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }

  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<Edge>& boundary_edges() const noexcept { return boundary_edges_; }

  /// Bounds-checked coordinate lookup.
  const Point& node(std::size_t i) const { return nodes_.at(i); }

  /// Signed area of triangle t (positive for counterclockwise).
  double signed_area(std::size_t t) const;

 private:
  TriMesh() = default;

  int level_ = 0;
  std::size_t cells_ = 0;
  double h_ = 0.0;
  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> boundary_edges_;
};

inline TriMesh build_uniform_mesh(int level) { return TriMesh::uniform(level); }

inline const Point& node_coordinates(const TriMesh& mesh, std::size_t i) { return mesh.node(i); }

}  // namespace bssn
