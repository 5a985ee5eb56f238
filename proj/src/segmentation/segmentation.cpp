#include "forge/segmentation/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"
#include "forge/mesh/primitives.hpp"

namespace forge {

std::string_view to_string(SegmentationMode m) {
  return m == SegmentationMode::SLENDER_QUARTER ? "SLENDER_QUARTER" : "ANGULAR_QUARTER";
}

namespace {

double box_distance(const Box3& a, const Box3& b) {
  const Vec3 gap = (a.min - b.max).cwiseMax(b.min - a.max).cwiseMax(0.0);
  return gap.norm();
}

Mesh cut_link(const Mesh& part, const Box3& region, int index, const CsgOptions& csg) {
  Mesh link = boolean_op(part, make_box(region), BooleanOp::INTERSECT, csg);
  const double v = link.empty() ? 0.0 : volume(link);
  if (!(v > 1e-6 * std::max(1.0, std::abs(volume(part))))) {
    fail(ErrorCode::EmptyLink, "link " + std::to_string(index) + " has no material");
  }
  return link;
}

// Centroid of the link's faces on `plane`, or the plane point nearest the
// link's box centre when the link does not touch it with a face.
Vec3 anchor_on(const Mesh& link, const Plane& plane, double tol) {
  if (auto c = face_centroid_on_plane(link, plane, tol)) return *c;
  const Vec3 c = bounding_box(link).center();
  return c - plane.signed_distance(c) * plane.normal;
}

}  // namespace

SegmentationResult segment_slender(const Mesh& part, Axis axis, const SegmentationOptions& options) {
  const Box3 box = bounding_box(part);
  const int k = index_of(axis);
  const double lo = box.min[k];
  const double len = box.extents()[k];
  const double tol = 1e-6 * (1.0 + box.extents().maxCoeff());

  SegmentationResult out;
  out.mode = SegmentationMode::SLENDER_QUARTER;
  out.axis = unit_vector(axis);
  std::array<double, 5> bounds{};
  for (int i = 0; i <= 4; ++i) bounds[i] = lo + len * i / 4.0;
  out.cuts = {bounds[1], bounds[2], bounds[3]};

  std::vector<Mesh> links;
  for (int i = 0; i < 4; ++i) {
    Box3 region = box.inflated(1.0);
    if (i > 0) region.min[k] = bounds[i];
    if (i < 3) region.max[k] = bounds[i + 1];
    links.push_back(cut_link(part, region, i, options.csg));
  }
  // Order from the static side: reverse when the static box is nearer the far end.
  bool reversed = false;
  if (options.static_box) {
    Box3 first = box, last = box;
    first.max[k] = bounds[1];
    last.min[k] = bounds[3];
    reversed = box_distance(last, *options.static_box) < box_distance(first, *options.static_box);
  }
  std::array<Vec3, 5> anchors;
  for (int i = 0; i <= 4; ++i) {
    Vec3 origin = box.center();
    origin[k] = bounds[i];
    const Plane plane = Plane::make(origin, out.axis);
    anchors[i] = anchor_on(links[std::min(i, 3)], plane, tol);
  }
  if (reversed) {
    std::reverse(links.begin(), links.end());
    std::reverse(anchors.begin(), anchors.end());
  }
  for (int i = 0; i < 4; ++i) links[i].name = "link_" + std::to_string(i);
  out.links = std::move(links);
  out.joint_anchors = anchors;
  return out;
}

SegmentationResult segment_nonslender(const Mesh& part, const Vec3& principal_axis,
                                      const SegmentationOptions& options) {
  int k = -1;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(std::abs(principal_axis[a]) - 1.0) < 1e-9) k = a;
  }
  if (k < 0 || std::abs(principal_axis.norm() - 1.0) > 1e-9) {
    fail(ErrorCode::DegenerateAxis, "principal axis must be a coordinate axis");
  }
  const Box3 box = bounding_box(part);
  const Vec3 origin = options.cut_origin.value_or(centroid(part));
  const int i = (k + 1) % 3;
  const int j = (k + 2) % 3;
  const double tol = 1e-6 * (1.0 + box.extents().maxCoeff());

  // Sectors counter-clockwise about +axis_k: (+i,+j), (-i,+j), (-i,-j), (+i,-j).
  const std::array<std::array<int, 2>, 4> signs{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  std::vector<Mesh> sectors;
  std::vector<Box3> regions;
  for (int s = 0; s < 4; ++s) {
    Box3 region = box.inflated(1.0);
    (signs[s][0] > 0 ? region.min[i] : region.max[i]) = origin[i];
    (signs[s][1] > 0 ? region.min[j] : region.max[j]) = origin[j];
    regions.push_back(region);
    sectors.push_back(cut_link(part, region, s, options.csg));
  }
  // boundary[s] is the half-plane shared by sector s and sector s+1.
  std::array<Vec3, 4> boundary;
  for (int s = 0; s < 4; ++s) {
    // Sectors 0|1 and 2|3 meet on the i-plane, 1|2 and 3|0 on the j-plane.
    const int normal_axis = s % 2 == 0 ? i : j;
    Vec3 n = Vec3::Zero();
    n[normal_axis] = 1.0;
    boundary[s] = anchor_on(sectors[s], Plane::make(origin, n), tol);
  }

  int first = 0;
  if (options.static_box) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 4; ++s) {
      const double d = box_distance(bounding_box(sectors[s]), *options.static_box);
      if (d < best - 1e-9) {
        best = d;
        first = s;
      }
    }
  }
  SegmentationResult out;
  out.mode = SegmentationMode::ANGULAR_QUARTER;
  out.axis = principal_axis;
  out.cut_origin = origin;
  for (int n = 0; n < 4; ++n) {
    Mesh link = std::move(sectors[(first + n) % 4]);
    link.name = "link_" + std::to_string(n);
    out.links.push_back(std::move(link));
  }
  out.joint_anchors[0] = boundary[(first + 3) % 4];
  for (int n = 1; n <= 3; ++n) out.joint_anchors[n] = boundary[(first + n - 1) % 4];
  out.joint_anchors[4] = out.joint_anchors[0];
  return out;
}

}  // namespace forge
