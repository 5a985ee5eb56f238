#pragma once

#include <array>
#include <optional>
#include <vector>

#include "forge/mesh/csg.hpp"
#include "forge/mesh/mesh.hpp"

namespace forge {

enum class SegmentationMode { SLENDER_QUARTER, ANGULAR_QUARTER };

std::string_view to_string(SegmentationMode m);

struct SegmentationResult {
  // Four links, the one next to the static part first.
  std::vector<Mesh> links;
  // Joint between static part and link 0, the three link-to-link joints,
  // then the far end of link 3.
  std::array<Vec3, 5> joint_anchors{};
  SegmentationMode mode = SegmentationMode::SLENDER_QUARTER;
  // Quartering axis: the long axis or the principal axis.
  Vec3 axis = Vec3::UnitX();
  // Slender: the three cut offsets along the axis. Angular: the cut origin.
  std::vector<double> cuts;
  Vec3 cut_origin = Vec3::Zero();
};

struct SegmentationOptions {
  // Box of the static part(s); decides which end or sector comes first.
  std::optional<Box3> static_box;
  // Angular mode only: overrides the part centroid as the sector origin.
  std::optional<Vec3> cut_origin;
  CsgOptions csg;
};

// Four equal-length slabs along `axis`. Throws EmptyLink, EmptyMesh.
SegmentationResult segment_slender(const Mesh& part, Axis axis, const SegmentationOptions& options = {});

// Four 90 degree sectors about `principal_axis` (must be +-X/Y/Z).
// Throws EmptyLink, EmptyMesh, DegenerateAxis.
SegmentationResult segment_nonslender(const Mesh& part, const Vec3& principal_axis,
                                      const SegmentationOptions& options = {});

}  // namespace forge
