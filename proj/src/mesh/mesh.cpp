#include "forge/mesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "forge/error.hpp"
#include "spatial_hash.hpp"

namespace forge {

Vec3 unit_vector(Axis a) {
  Vec3 v = Vec3::Zero();
  v[index_of(a)] = 1.0;
  return v;
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

std::optional<Axis> parse_axis(std::string_view text) {
  if (text == "X" || text == "x") return Axis::X;
  if (text == "Y" || text == "y") return Axis::Y;
  if (text == "Z" || text == "z") return Axis::Z;
  return std::nullopt;
}

double Box3::volume() const {
  const Vec3 e = extents().cwiseMax(0.0);
  return e.x() * e.y() * e.z();
}

bool Box3::contains(const Vec3& p, double slack) const {
  return (p.array() >= min.array() - slack).all() && (p.array() <= max.array() + slack).all();
}

bool Box3::strictly_contains(const Vec3& p, double margin) const {
  return (p.array() > min.array() + margin).all() && (p.array() < max.array() - margin).all();
}

bool Box3::overlaps(const Box3& other, double slack) const {
  return (min.array() <= other.max.array() + slack).all() &&
         (other.min.array() <= max.array() + slack).all();
}

Box3 Box3::inflated(double amount) const {
  return Box3{min - Vec3::Constant(amount), max + Vec3::Constant(amount)};
}

void Box3::expand(const Vec3& p) {
  min = min.cwiseMin(p);
  max = max.cwiseMax(p);
}

Box3 Box3::empty() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Box3{Vec3::Constant(inf), Vec3::Constant(-inf)};
}

Plane Plane::make(const Vec3& origin, const Vec3& normal) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::DegenerateAxis, "plane normal has zero length");
  return Plane{origin, normal / n};
}

std::pair<Vec3, Vec3> Plane::basis() const {
  // Helper axis: the coordinate axis least aligned with the normal (first on ties).
  int helper = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(normal[i]) < std::abs(normal[helper]) - 1e-12) helper = i;
  }
  Vec3 h = Vec3::Zero();
  h[helper] = 1.0;
  Vec3 u = (h - h.dot(normal) * normal).normalized();
  Vec3 v = normal.cross(u);
  return {u, v};
}

Box3 bounding_box(const Mesh& m) {
  if (m.triangles.empty()) fail(ErrorCode::EmptyMesh, "bounding box of empty mesh '" + m.name + "'");
  Box3 box = Box3::empty();
  for (const Triangle& t : m.triangles) {
    for (int k : t) box.expand(m.vertices[k]);
  }
  return box;
}

double volume(const Mesh& m) {
  double six_v = 0.0;
  for (const Triangle& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    six_v += a.dot(b.cross(c));
  }
  return six_v / 6.0;
}

double surface_area(const Mesh& m) {
  double area = 0.0;
  for (const Triangle& t : m.triangles) {
    area += 0.5 * (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]).norm();
  }
  return area;
}

Vec3 centroid(const Mesh& m) {
  if (m.triangles.empty()) fail(ErrorCode::EmptyMesh, "centroid of empty mesh");
  // Shift to the box center to keep the tetrahedron sums well conditioned.
  const Vec3 ref = bounding_box(m).center();
  double six_v = 0.0;
  Vec3 acc = Vec3::Zero();
  for (const Triangle& t : m.triangles) {
    const Vec3 a = m.vertices[t[0]] - ref;
    const Vec3 b = m.vertices[t[1]] - ref;
    const Vec3 c = m.vertices[t[2]] - ref;
    const double w = a.dot(b.cross(c));
    six_v += w;
    acc += w * (a + b + c) / 4.0;
  }
  if (std::abs(six_v) < 1e-12) {
    Vec3 mean = Vec3::Zero();
    int count = 0;
    for (const Triangle& t : m.triangles) {
      for (int k : t) {
        mean += m.vertices[k];
        ++count;
      }
    }
    return mean / count;
  }
  return ref + acc / six_v;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

bool is_watertight(const Mesh& m) {
  if (m.triangles.empty()) return false;
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(m.triangles.size() * 3);
  for (const Triangle& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (a == b) return false;
      if (++directed[edge_key(a, b)] > 1) return false;
    }
  }
  for (const auto& [key, count] : directed) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    if (!directed.contains(edge_key(b, a))) return false;
  }
  return true;
}

Mesh compact(const Mesh& m) {
  Mesh out;
  out.name = m.name;
  std::vector<int> remap(m.vertices.size(), -1);
  out.triangles.reserve(m.triangles.size());
  for (const Triangle& t : m.triangles) {
    Triangle nt{};
    for (int k = 0; k < 3; ++k) {
      int& r = remap[t[k]];
      if (r < 0) {
        r = static_cast<int>(out.vertices.size());
        out.vertices.push_back(m.vertices[t[k]]);
      }
      nt[k] = r;
    }
    out.triangles.push_back(nt);
  }
  return out;
}

Mesh concatenate(const std::vector<Mesh>& parts, std::string name) {
  Mesh out;
  out.name = std::move(name);
  for (const Mesh& p : parts) {
    const int base = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), p.vertices.begin(), p.vertices.end());
    for (const Triangle& t : p.triangles) out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  return out;
}

Mesh transformed(const Mesh& m, const Eigen::Isometry3d& xf) {
  Mesh out = m;
  for (Vec3& v : out.vertices) v = xf * v;
  return out;
}

Mesh translated(const Mesh& m, const Vec3& offset) {
  Mesh out = m;
  for (Vec3& v : out.vertices) v += offset;
  return out;
}

Mesh scaled(const Mesh& m, double factor) {
  Mesh out = m;
  for (Vec3& v : out.vertices) v *= factor;
  return out;
}

Mesh flipped(const Mesh& m) {
  Mesh out = m;
  for (Triangle& t : out.triangles) std::swap(t[1], t[2]);
  return out;
}

Mesh weld(const Mesh& m, double tolerance) {
  detail::VertexWelder welder(tolerance);
  std::vector<int> remap(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i) remap[i] = welder.insert(m.vertices[i]);

  Mesh out;
  out.name = m.name;
  out.vertices = welder.take_points();
  out.triangles.reserve(m.triangles.size());
  for (const Triangle& t : m.triangles) {
    const Triangle nt{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (nt[0] == nt[1] || nt[1] == nt[2] || nt[0] == nt[2]) continue;
    const Vec3& a = out.vertices[nt[0]];
    const Vec3 cross = (out.vertices[nt[1]] - a).cross(out.vertices[nt[2]] - a);
    if (cross.norm() <= 1e-12) continue;
    out.triangles.push_back(nt);
  }
  return compact(out);
}

std::optional<Vec3> face_centroid_on_plane(const Mesh& m, const Plane& plane, double tolerance,
                                           int facing) {
  double total = 0.0;
  Vec3 acc = Vec3::Zero();
  for (const Triangle& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    if (std::abs(plane.signed_distance(a)) > tolerance || std::abs(plane.signed_distance(b)) > tolerance ||
        std::abs(plane.signed_distance(c)) > tolerance) {
      continue;
    }
    const Vec3 cross = (b - a).cross(c - a);
    if (facing != 0 && cross.dot(plane.normal) * facing <= 0.0) continue;
    const double area = 0.5 * cross.norm();
    total += area;
    acc += area * (a + b + c) / 3.0;
  }
  if (total <= 0.0) return std::nullopt;
  return acc / total;
}

}  // namespace forge
