#pragma once

#include <optional>
#include <vector>

#include "forge/mesh/csg.hpp"
#include "forge/mesh/mesh.hpp"

namespace forge {

struct SweepSelection {
  Axis axis = Axis::X;
  double start = 0.0;
  double end = 0.0;
};

struct PartSplit {
  Mesh transformable;
  std::vector<Mesh> statics;
  std::optional<Mesh> pillar;
  SweepSelection selection;
  Mesh source;
};

enum class ShapeKind { SLENDER, NON_SLENDER };

struct ShapeClass {
  ShapeKind kind = ShapeKind::SLENDER;
  Axis longest_axis = Axis::X;
  // Normal of the largest axis-aligned cross-section. For slender parts this
  // is the longest axis.
  Vec3 principal_axis = Vec3::UnitX();
};

struct SelectionOptions {
  // Static fragments below this volume (mm^3) are treated as CSG noise.
  double min_static_volume = 1.0;
  CsgOptions csg;
};

// The cuboid swept along sel.axis over [start, end]. It reaches 1 mm past the
// object on the other axes, and past the object ends when the sweep touches them.
Box3 sweep_cuboid(const Box3& object_box, const SweepSelection& sel);

// Throws SelectionOutOfRange, EmptySelection, NonWatertightInput.
PartSplit select_part(const Mesh& source, const SweepSelection& sel, const SelectionOptions& options = {});

struct PillarOptions {
  double radius_factor = 0.25;
  double min_radius = 1.0;
  int segments = 32;
};

// Joins two static pieces with a cylinder along the selection axis.
// Throws NotDisjoint or InsufficientClearance.
PartSplit bridge_disjoint(const PartSplit& split, double motor_clearance, const PillarOptions& options = {});

// Throws EmptyMesh.
ShapeClass classify_shape(const Mesh& part, int offsets_per_axis = 9);

std::string_view to_string(ShapeKind k);

}  // namespace forge
