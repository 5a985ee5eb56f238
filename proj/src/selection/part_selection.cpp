#include "forge/selection/part_selection.hpp"

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"
#include "forge/mesh/primitives.hpp"
#include "forge/mesh/topology.hpp"

namespace forge {

std::string_view to_string(ShapeKind k) { return k == ShapeKind::SLENDER ? "SLENDER" : "NON_SLENDER"; }

Box3 sweep_cuboid(const Box3& object_box, const SweepSelection& sel) {
  constexpr double kMargin = 1.0;
  const int k = index_of(sel.axis);
  Box3 box = object_box.inflated(kMargin);
  const double tol = 1e-9 * (1.0 + object_box.extents().maxCoeff());
  box.min[k] = sel.start <= object_box.min[k] + tol ? object_box.min[k] - kMargin : sel.start;
  box.max[k] = sel.end >= object_box.max[k] - tol ? object_box.max[k] + kMargin : sel.end;
  return box;
}

PartSplit select_part(const Mesh& source, const SweepSelection& sel, const SelectionOptions& options) {
  const Box3 bbox = bounding_box(source);
  const int k = index_of(sel.axis);
  const double tol = 1e-9 * (1.0 + bbox.extents().maxCoeff());
  if (!(sel.start < sel.end) || sel.start < bbox.min[k] - tol || sel.end > bbox.max[k] + tol) {
    fail(ErrorCode::SelectionOutOfRange, "selection [" + std::to_string(sel.start) + ", " + std::to_string(sel.end) +
                                             "] on " + std::string(to_string(sel.axis)) + " is outside [" +
                                             std::to_string(bbox.min[k]) + ", " + std::to_string(bbox.max[k]) + "]");
  }
  if (!is_watertight(source)) fail(ErrorCode::NonWatertightInput, "source mesh is not watertight");

  const Mesh cuboid = make_box(sweep_cuboid(bbox, sel), "sweep");
  PartSplit split;
  split.selection = sel;
  split.source = source;
  split.transformable = boolean_op(source, cuboid, BooleanOp::INTERSECT, options.csg);
  split.transformable.name = "transformable";
  if (split.transformable.empty() || volume(split.transformable) <= 1e-9 * std::max(1.0, volume(source))) {
    fail(ErrorCode::EmptySelection, "selection does not intersect the object");
  }
  const Mesh rest = boolean_op(source, cuboid, BooleanOp::SUBTRACT, options.csg);
  if (!rest.empty()) {
    for (Mesh& piece : connected_components(rest)) {
      if (volume(piece) < options.min_static_volume) continue;
      piece.name = "static_" + std::to_string(split.statics.size());
      split.statics.push_back(std::move(piece));
    }
  }
  return split;
}

PartSplit bridge_disjoint(const PartSplit& split, double motor_clearance, const PillarOptions& options) {
  if (split.statics.size() != 2) {
    fail(ErrorCode::NotDisjoint, "bridging needs exactly 2 static parts, got " + std::to_string(split.statics.size()));
  }
  const int k = index_of(split.selection.axis);
  Box3 a = bounding_box(split.statics[0]);
  Box3 b = bounding_box(split.statics[1]);
  if (a.center()[k] > b.center()[k]) std::swap(a, b);

  const Box3 part = bounding_box(split.transformable);
  const int i = (k + 1) % 3;
  const int j = (k + 2) % 3;
  const double lateral = std::min(part.extents()[i], part.extents()[j]);
  double radius = options.radius_factor * lateral;
  if ((lateral - 2.0 * radius) / 2.0 < motor_clearance) radius = lateral / 2.0 - motor_clearance;
  if (radius < options.min_radius) {
    fail(ErrorCode::InsufficientClearance, "no pillar radius >= " + std::to_string(options.min_radius) +
                                               " mm leaves " + std::to_string(motor_clearance) + " mm clearance");
  }
  Vec3 start = part.center();
  Vec3 end = part.center();
  start[k] = a.max[k];
  end[k] = b.min[k];
  if (!(end[k] > start[k])) fail(ErrorCode::NotDisjoint, "static parts overlap along the selection axis");

  PartSplit out = split;
  out.pillar = make_cylinder(start, end, radius, options.segments);
  out.pillar->name = "pillar";
  return out;
}

namespace {

// Half the projected area of a closed surface. Used when the part is not a
// clean 2-manifold (voxel fallback output) and slicing is not possible.
double projected_area(const Mesh& m, int axis) {
  double total = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const int ti = static_cast<int>(t);
    const Vec3 n = (m.corner(ti, 1) - m.corner(ti, 0)).cross(m.corner(ti, 2) - m.corner(ti, 0));
    total += 0.5 * std::abs(n[axis]);
  }
  return 0.5 * total;
}

}  // namespace

ShapeClass classify_shape(const Mesh& part, int offsets_per_axis) {
  const Box3 box = bounding_box(part);
  const Vec3 e = box.extents();
  ShapeClass out;
  int longest = 0;
  for (int a = 1; a < 3; ++a) {
    if (e[a] > e[longest]) longest = a;
  }
  out.longest_axis = static_cast<Axis>(longest);
  const bool slender = e[longest] >= 4.0 * e[(longest + 1) % 3] && e[longest] >= 4.0 * e[(longest + 2) % 3];
  if (slender) {
    out.kind = ShapeKind::SLENDER;
    out.principal_axis = unit_vector(out.longest_axis);
    return out;
  }
  out.kind = ShapeKind::NON_SLENDER;
  const bool sliceable = is_watertight(part);
  int best_axis = 0;
  double best_area = -1.0;
  for (int a = 0; a < 3; ++a) {
    double area = 0.0;
    if (sliceable) {
      for (int s = 0; s < offsets_per_axis; ++s) {
        Vec3 origin = box.center();
        origin[a] = box.min[a] + e[a] * (s + 1) / (offsets_per_axis + 1);
        area = std::max(area, cross_section(part, Plane::make(origin, unit_vector(static_cast<Axis>(a)))).area);
      }
    } else {
      area = projected_area(part, a);
    }
    if (area > best_area * (1.0 + 1e-9)) {
      best_area = area;
      best_axis = a;
    }
  }
  out.principal_axis = unit_vector(static_cast<Axis>(best_axis));
  return out;
}

}  // namespace forge
