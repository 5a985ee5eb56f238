#pragma once

#include <vector>

#include "forge/mesh/mesh.hpp"

namespace forge {

// Splits a mesh into vertex-connected pieces. Components are ordered by their
// lowest triangle index, and triangles keep their relative order.
std::vector<Mesh> connected_components(const Mesh& m);

struct CrossSection {
  // Closed loops of the slice, each oriented counter-clockwise about the
  // plane normal for outer boundaries and clockwise for holes.
  std::vector<std::vector<Vec3>> loops;
  double area = 0.0;
  // Area centroid of the slice; only meaningful when area > 0.
  Vec3 centroid = Vec3::Zero();
};

// Slice of a watertight mesh by a plane. Throws NonWatertightInput.
CrossSection cross_section(const Mesh& m, const Plane& p);

}  // namespace forge
