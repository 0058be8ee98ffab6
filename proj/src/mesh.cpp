#include "bssn/mesh.hpp"

#include <string>

#include "bssn/errors.hpp"

namespace bssn {

TriMesh TriMesh::uniform(int level) {
  if (level < kMinLevel || level > kMaxLevel) {
    throw ConfigError("mesh level must lie in [" + std::to_string(kMinLevel) + ", " +
                      std::to_string(kMaxLevel) + "], got " + std::to_string(level));
  }

  TriMesh mesh;
  mesh.level_ = level;
  mesh.cells_ = std::size_t{1} << level;
  mesh.h_ = 1.0 / static_cast<double>(mesh.cells_);

  const std::size_t n = mesh.cells_;
  const std::size_t np = n + 1;
  auto id = [np](std::size_t row, std::size_t col) { return row * np + col; };

  mesh.nodes_.reserve(np * np);
  for (std::size_t r = 0; r < np; ++r) {
    for (std::size_t c = 0; c < np; ++c) {
      // Integer division keeps boundary coordinates exact (c == n gives 1.0).
      mesh.nodes_.push_back({static_cast<double>(c) / static_cast<double>(n),
                             static_cast<double>(r) / static_cast<double>(n)});
    }
  }

  mesh.triangles_.reserve(2 * n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t ll = id(r, c);
      const std::size_t lr = id(r, c + 1);
      const std::size_t ur = id(r + 1, c + 1);
      const std::size_t ul = id(r + 1, c);
      mesh.triangles_.push_back({ll, lr, ur});
      mesh.triangles_.push_back({ll, ur, ul});
    }
  }

  mesh.boundary_edges_.reserve(4 * n);
  for (std::size_t c = 0; c < n; ++c) mesh.boundary_edges_.push_back({id(0, c), id(0, c + 1)});
  for (std::size_t r = 0; r < n; ++r) mesh.boundary_edges_.push_back({id(r, n), id(r + 1, n)});
  for (std::size_t c = n; c > 0; --c) mesh.boundary_edges_.push_back({id(n, c), id(n, c - 1)});
  for (std::size_t r = n; r > 0; --r) mesh.boundary_edges_.push_back({id(r, 0), id(r - 1, 0)});

  return mesh;
}

double TriMesh::signed_area(std::size_t t) const {
  const Triangle& tri = triangles_.at(t);
  const Point& a = nodes_[tri[0]];
  const Point& b = nodes_[tri[1]];
  const Point& c = nodes_[tri[2]];
  return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

}  // namespace bssn
