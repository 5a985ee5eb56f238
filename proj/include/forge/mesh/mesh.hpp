#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// All geometry is expressed in millimeters.
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class Axis { X = 0, Y = 1, Z = 2 };

inline int index_of(Axis a) { return static_cast<int>(a); }
Vec3 unit_vector(Axis a);
std::string_view to_string(Axis a);
std::optional<Axis> parse_axis(std::string_view text);

struct Box3 {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 extents() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
  double volume() const;
  bool contains(const Vec3& p, double slack = 0.0) const;
  // True when p lies in the open interior (farther than `margin` from every face).
  bool strictly_contains(const Vec3& p, double margin = 0.0) const;
  bool overlaps(const Box3& other, double slack = 0.0) const;
  Box3 inflated(double amount) const;
  void expand(const Vec3& p);
  static Box3 empty();
};

struct Plane {
  Vec3 origin = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();

  // Normalizes `normal`; throws DegenerateAxis for a zero vector.
  static Plane make(const Vec3& origin, const Vec3& normal);
  double signed_distance(const Vec3& p) const { return normal.dot(p - origin); }
  // Right-handed in-plane basis (u, v) with u x v = normal.
  std::pair<Vec3, Vec3> basis() const;
};

using Triangle = std::array<int, 3>;

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string name;

  bool empty() const { return triangles.empty(); }
  Vec3 corner(int tri, int k) const { return vertices[triangles[tri][k]]; }
};

// Tight axis-aligned box of all referenced vertices. Throws EmptyMesh.
Box3 bounding_box(const Mesh& m);

// Signed volume by tetrahedron fan from the origin.
double volume(const Mesh& m);
double surface_area(const Mesh& m);
// Volume centroid; falls back to the vertex mean for zero-volume meshes.
Vec3 centroid(const Mesh& m);

// Every undirected edge is used by exactly two triangles with opposite
// orientations.
bool is_watertight(const Mesh& m);

// Drops unreferenced vertices and renumbers.
Mesh compact(const Mesh& m);
// Concatenates meshes without merging vertices.
Mesh concatenate(const std::vector<Mesh>& parts, std::string name = {});
Mesh transformed(const Mesh& m, const Eigen::Isometry3d& xf);
Mesh translated(const Mesh& m, const Vec3& offset);
Mesh scaled(const Mesh& m, double factor);
Mesh flipped(const Mesh& m);

// Merges vertices closer than `tolerance` and drops triangles that collapse
// or have (near) zero area.
Mesh weld(const Mesh& m, double tolerance);

// Area-weighted centroid of the triangles lying in `plane` (within `tolerance`)
// whose normals face along `facing` (sign of dot product). Returns nullopt when
// no triangle qualifies.
std::optional<Vec3> face_centroid_on_plane(const Mesh& m, const Plane& plane, double tolerance,
                                           int facing = 0);

}  // namespace forge
