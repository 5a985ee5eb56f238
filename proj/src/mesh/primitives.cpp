#include "forge/mesh/primitives.hpp"

#include <cmath>
#include <numbers>

#include "forge/error.hpp"

namespace forge {
namespace {

void add_grid_face(Mesh& m, const Vec3& origin, const Vec3& e1, const Vec3& e2, int n1, int n2) {
  const int base = static_cast<int>(m.vertices.size());
  for (int j = 0; j <= n2; ++j) {
    for (int i = 0; i <= n1; ++i) {
      m.vertices.push_back(origin + e1 * (static_cast<double>(i) / n1) + e2 * (static_cast<double>(j) / n2));
    }
  }
  auto at = [&](int i, int j) { return base + j * (n1 + 1) + i; };
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      m.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      m.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
}

std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& axis) {
  return Plane::make(Vec3::Zero(), axis).basis();
}

}  // namespace

Mesh oriented_outward(Mesh m) {
  if (volume(m) < 0.0) return flipped(m);
  return m;
}

Mesh make_subdivided_box(const Box3& box, int divisions, std::string name) {
  if (divisions < 1) divisions = 1;
  const Vec3 e = box.extents();
  if ((e.array() <= 0.0).any()) fail(ErrorCode::DegenerateAxis, "box with non-positive extent");
  const Vec3 lo = box.min;
  const Vec3 hi = box.max;
  const Vec3 ex(e.x(), 0, 0), ey(0, e.y(), 0), ez(0, 0, e.z());
  Mesh m;
  // Each face listed with e1 x e2 pointing outward.
  add_grid_face(m, lo, ey, ex, divisions, divisions);                      // -Z
  add_grid_face(m, Vec3(lo.x(), lo.y(), hi.z()), ex, ey, divisions, divisions);  // +Z
  add_grid_face(m, lo, ex, ez, divisions, divisions);                      // -Y
  add_grid_face(m, Vec3(lo.x(), hi.y(), lo.z()), ez, ex, divisions, divisions);  // +Y
  add_grid_face(m, lo, ez, ey, divisions, divisions);                      // -X
  add_grid_face(m, Vec3(hi.x(), lo.y(), lo.z()), ey, ez, divisions, divisions);  // +X
  m = weld(m, 1e-9 * (1.0 + e.maxCoeff()));
  m.name = std::move(name);
  return m;
}

Mesh make_box(const Box3& box, std::string name) { return make_subdivided_box(box, 1, std::move(name)); }

Mesh make_cylinder(const Vec3& axis_start, const Vec3& axis_end, double radius, int segments) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidRadius, "cylinder radius must be positive");
  const Vec3 axis = axis_end - axis_start;
  if (axis.norm() <= 1e-12) fail(ErrorCode::DegenerateAxis, "cylinder axis start equals end");
  if (segments < 8) fail(ErrorCode::DegenerateAxis, "cylinder needs at least 8 segments");
  const auto [u, v] = perpendicular_basis(axis);

  Mesh m;
  m.name = "cylinder";
  for (int i = 0; i < segments; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / segments;
    const Vec3 offset = radius * (std::cos(phi) * u + std::sin(phi) * v);
    m.vertices.push_back(axis_start + offset);
    m.vertices.push_back(axis_end + offset);
  }
  const int bottom_center = static_cast<int>(m.vertices.size());
  m.vertices.push_back(axis_start);
  const int top_center = bottom_center + 1;
  m.vertices.push_back(axis_end);
  for (int i = 0; i < segments; ++i) {
    const int j = (i + 1) % segments;
    const int b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    m.triangles.push_back({b0, b1, t1});
    m.triangles.push_back({b0, t1, t0});
    m.triangles.push_back({top_center, t0, t1});
    m.triangles.push_back({bottom_center, b1, b0});
  }
  return oriented_outward(std::move(m));
}

Mesh make_tube(const Vec3& axis_start, const Vec3& axis_end, double inner_radius, double outer_radius,
               int segments) {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) {
    fail(ErrorCode::InvalidRadius, "tube needs 0 < inner radius < outer radius");
  }
  const Vec3 axis = axis_end - axis_start;
  if (axis.norm() <= 1e-12) fail(ErrorCode::DegenerateAxis, "tube axis start equals end");
  if (segments < 8) fail(ErrorCode::DegenerateAxis, "tube needs at least 8 segments");
  const auto [u, v] = perpendicular_basis(axis);

  Mesh m;
  m.name = "tube";
  // Per segment: outer bottom, outer top, inner bottom, inner top.
  for (int i = 0; i < segments; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / segments;
    const Vec3 dir = std::cos(phi) * u + std::sin(phi) * v;
    m.vertices.push_back(axis_start + outer_radius * dir);
    m.vertices.push_back(axis_end + outer_radius * dir);
    m.vertices.push_back(axis_start + inner_radius * dir);
    m.vertices.push_back(axis_end + inner_radius * dir);
  }
  for (int i = 0; i < segments; ++i) {
    const int j = (i + 1) % segments;
    const int ob0 = 4 * i, ot0 = 4 * i + 1, ib0 = 4 * i + 2, it0 = 4 * i + 3;
    const int ob1 = 4 * j, ot1 = 4 * j + 1, ib1 = 4 * j + 2, it1 = 4 * j + 3;
    m.triangles.push_back({ob0, ob1, ot1});
    m.triangles.push_back({ob0, ot1, ot0});
    m.triangles.push_back({ib0, it1, ib1});
    m.triangles.push_back({ib0, it0, it1});
    m.triangles.push_back({ot0, ot1, it1});
    m.triangles.push_back({ot0, it1, it0});
    m.triangles.push_back({ob0, ib1, ob1});
    m.triangles.push_back({ob0, ib0, ib1});
  }
  return oriented_outward(std::move(m));
}

Mesh make_sphere(const Vec3& center, double radius, int slices, int stacks) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidRadius, "sphere radius must be positive");
  slices = std::max(slices, 3);
  stacks = std::max(stacks, 2);
  Mesh m;
  m.name = "sphere";
  m.vertices.push_back(center + Vec3(0, 0, radius));
  for (int s = 1; s < stacks; ++s) {
    const double theta = std::numbers::pi * s / stacks;
    for (int i = 0; i < slices; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / slices;
      m.vertices.push_back(center + radius * Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                                  std::cos(theta)));
    }
  }
  const int south = static_cast<int>(m.vertices.size());
  m.vertices.push_back(center - Vec3(0, 0, radius));
  auto ring = [&](int s, int i) { return 1 + (s - 1) * slices + (i % slices); };
  for (int i = 0; i < slices; ++i) m.triangles.push_back({0, ring(1, i), ring(1, i + 1)});
  for (int s = 1; s + 1 < stacks; ++s) {
    for (int i = 0; i < slices; ++i) {
      m.triangles.push_back({ring(s, i), ring(s + 1, i), ring(s + 1, i + 1)});
      m.triangles.push_back({ring(s, i), ring(s + 1, i + 1), ring(s, i + 1)});
    }
  }
  for (int i = 0; i < slices; ++i) m.triangles.push_back({south, ring(stacks - 1, i + 1), ring(stacks - 1, i)});
  return oriented_outward(std::move(m));
}

Mesh make_torus(const Vec3& center, const Vec3& axis, double major_radius, double minor_radius, int major_segments,
                int minor_segments) {
  if (!(minor_radius > 0.0) || !(major_radius > minor_radius)) {
    fail(ErrorCode::InvalidRadius, "torus needs 0 < minor radius < major radius");
  }
  major_segments = std::max(major_segments, 3);
  minor_segments = std::max(minor_segments, 3);
  const Vec3 n = axis.normalized();
  const auto [u, v] = perpendicular_basis(n);
  Mesh m;
  m.name = "torus";
  for (int i = 0; i < major_segments; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / major_segments;
    const Vec3 radial = std::cos(phi) * u + std::sin(phi) * v;
    for (int j = 0; j < minor_segments; ++j) {
      const double psi = 2.0 * std::numbers::pi * j / minor_segments;
      m.vertices.push_back(center + (major_radius + minor_radius * std::cos(psi)) * radial +
                           minor_radius * std::sin(psi) * n);
    }
  }
  auto at = [&](int i, int j) { return (i % major_segments) * minor_segments + (j % minor_segments); };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      m.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      m.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return oriented_outward(std::move(m));
}

}  // namespace forge
