#pragma once

#include "forge/mesh/mesh.hpp"

namespace forge {

Mesh make_box(const Box3& box, std::string name = "box");
// Box whose faces are split into a regular grid of `divisions` cells per edge.
Mesh make_subdivided_box(const Box3& box, int divisions, std::string name = "box");

// Closed prism approximating a cylinder between two axis points.
// Throws DegenerateAxis (start == end, segments < 8) or InvalidRadius.
Mesh make_cylinder(const Vec3& axis_start, const Vec3& axis_end, double radius, int segments);
// Thick-walled tube; inner radius must be below the outer one.
Mesh make_tube(const Vec3& axis_start, const Vec3& axis_end, double inner_radius, double outer_radius,
               int segments);
Mesh make_sphere(const Vec3& center, double radius, int slices, int stacks);
// Torus around `axis` through `center`.
Mesh make_torus(const Vec3& center, const Vec3& axis, double major_radius, double minor_radius, int major_segments,
                int minor_segments);

// Reverses winding when the signed volume is negative.
Mesh oriented_outward(Mesh m);

}  // namespace forge
