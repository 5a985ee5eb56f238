#pragma once

#include <span>
#include <vector>

#include "forge/mesh/mesh.hpp"

namespace forge {

// Convex hull of a point set. Lower-dimensional inputs are kept as such: a
// single point (dimension 0), a segment (1) or a flat convex polygon (2).
class ConvexHull {
 public:
  ConvexHull() = default;

  static ConvexHull build(std::span<const Vec3> points);

  int dimension() const { return dimension_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  // Outward-wound facets for dimension 3; a fan over the polygon for
  // dimension 2; empty otherwise.
  const std::vector<Triangle>& facets() const { return facets_; }
  double tolerance() const { return tolerance_; }
  double volume() const;

  // Dimension 3: largest facet-plane distance (<= 0 inside). Lower
  // dimensions: Euclidean distance to the set (>= 0).
  double signed_distance(const Vec3& p) const;
  bool contains(const Vec3& p) const { return signed_distance(p) <= tolerance_; }
  // Nearest point of the hull boundary (the set itself for dimension < 3).
  Vec3 closest_surface_point(const Vec3& p) const;
  // 0 for contained points, distance to the boundary otherwise.
  double distance(const Vec3& p) const;

 private:
  int dimension_ = -1;
  double tolerance_ = 0.0;
  std::vector<Vec3> vertices_;
  std::vector<Triangle> facets_;
  std::vector<Vec3> normals_;
  std::vector<double> offsets_;
  Vec3 plane_normal_ = Vec3::UnitZ();
};

// Closest point to p on triangle abc.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace forge
