#pragma once

#include "forge/mesh/mesh.hpp"

namespace fixture {

using forge::Mesh;
using forge::Vec3;

// Axis-aligned bar [0,length] x [-w/2,w/2] x [-h/2,h/2].
Mesh bar(double length, double width, double height, int divisions = 1);

// Closed cylinder along +Z with `rings` bands on the side wall.
Mesh banded_cylinder(double radius, double height, int segments, int rings);

// Kitchen spatula: long handle along +X joined to a thinner, wider blade.
// The handle spans x in [0,240]; just over 10k triangles.
Mesh spatula();

// Upright barrel-shaped piggy bank, radius 60 mm, z in [0,200]; just over 10k triangles.
Mesh piggybank();

// ASCII STL text of the unit cube with 12 facets.
std::string unit_cube_ascii_stl();

}  // namespace fixture
