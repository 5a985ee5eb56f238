#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "forge/mesh/csg.hpp"
#include "forge/mesh/primitives.hpp"

namespace fixture {

Mesh bar(double length, double width, double height, int divisions) {
  return forge::make_subdivided_box({Vec3(0, -width / 2, -height / 2), Vec3(length, width / 2, height / 2)},
                                    divisions, "bar");
}

Mesh banded_cylinder(double radius, double height, int segments, int rings) {
  Mesh m;
  m.name = "cylinder";
  for (int r = 0; r <= rings; ++r) {
    const double z = height * r / rings;
    for (int i = 0; i < segments; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / segments;
      m.vertices.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
    }
  }
  auto at = [&](int r, int i) { return r * segments + (i % segments); };
  for (int r = 0; r < rings; ++r) {
    for (int i = 0; i < segments; ++i) {
      m.triangles.push_back({at(r, i), at(r, i + 1), at(r + 1, i + 1)});
      m.triangles.push_back({at(r, i), at(r + 1, i + 1), at(r + 1, i)});
    }
  }
  const int bottom = static_cast<int>(m.vertices.size());
  m.vertices.emplace_back(0, 0, 0);
  const int top = bottom + 1;
  m.vertices.emplace_back(0, 0, height);
  for (int i = 0; i < segments; ++i) {
    m.triangles.push_back({bottom, at(0, i + 1), at(0, i)});
    m.triangles.push_back({top, at(rings, i), at(rings, i + 1)});
  }
  return m;
}

Mesh spatula() {
  const Mesh handle = forge::make_subdivided_box({Vec3(0, -20, 0), Vec3(240, 20, 32)}, 30, "handle");
  const Mesh blade = forge::make_box({Vec3(236, -40, 11), Vec3(340, 40, 21)}, "blade");
  Mesh m = forge::boolean_op(handle, blade, forge::BooleanOp::UNION);
  m.name = "spatula";
  return m;
}

Mesh piggybank() {
  Mesh m = banded_cylinder(60.0, 200.0, 96, 52);
  m.name = "piggybank";
  return m;
}

std::string unit_cube_ascii_stl() {
  const Mesh cube = forge::make_box({Vec3::Zero(), Vec3::Ones()});
  std::ostringstream out;
  out << "solid cube\n";
  for (const auto& t : cube.triangles) {
    out << "  facet normal 0 0 0\n    outer loop\n";
    for (int k = 0; k < 3; ++k) {
      const Vec3& v = cube.vertices[t[k]];
      out << "      vertex " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid cube\n";
  return out.str();
}

}  // namespace fixture
