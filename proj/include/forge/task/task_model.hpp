#pragma once

#include <Eigen/Geometry>

#include <optional>
#include <string>
#include <vector>

#include "forge/mesh/mesh.hpp"
#include "forge/selection/part_selection.hpp"

namespace forge {

enum class Action { PICK, PLACE, TRAJECTORY, ATTACH };

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view text);

struct MotionPoint {
  Vec3 position = Vec3::Zero();
  // Desired direction of the tool X axis; absent means any orientation.
  std::optional<Vec3> orientation;
  Action action = Action::TRAJECTORY;
};

enum class SurfaceKind { CYLINDER, RECTANGULAR_PRISM, FLAT_PLANE };

std::string_view to_string(SurfaceKind k);
std::optional<SurfaceKind> parse_surface_kind(std::string_view text);

struct AttachSurface {
  SurfaceKind kind = SurfaceKind::CYLINDER;
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::UnitZ();
  // cylinder: radius, length; prism: w, h, d; plane: w, h.
  std::vector<double> dimensions;
};

struct ReferenceObject {
  Mesh mesh;
  Eigen::Isometry3d transform = Eigen::Isometry3d::Identity();
};

inline constexpr double kLoopThreshold = 50.0;

// Ordered motion points plus their context. Values are immutable: every
// modifier returns a new spec.
class TaskSpec {
 public:
  TaskSpec() = default;

  // Rebuilds a spec exactly as stored (no role reassignment), e.g. from a
  // design file. Use validate() to check it.
  static TaskSpec from_parts(std::vector<MotionPoint> points, std::optional<AttachSurface> surface,
                             std::vector<ReferenceObject> references = {});

  // PICK and PLACE are one class: odd additions become PICK, even ones PLACE.
  // Throws AttachWithoutSurface.
  TaskSpec add_point(MotionPoint p) const;
  TaskSpec with_surface(AttachSurface s) const;
  TaskSpec with_reference(ReferenceObject r) const;

  const std::vector<MotionPoint>& points() const { return points_; }
  const std::optional<AttachSurface>& attach_surface() const { return surface_; }
  const std::vector<ReferenceObject>& references() const { return references_; }
  bool is_loop() const;
  bool has_action(Action a) const;

 private:
  std::vector<MotionPoint> points_;
  std::optional<AttachSurface> surface_;
  std::vector<ReferenceObject> references_;
};

struct Violation {
  std::string code;
  std::string message;
  std::optional<std::size_t> point_index;
};

// Empty when the spec obeys every placement rule.
std::vector<Violation> validate(const TaskSpec& spec);

// Plane the next point is placed on: through the transformable part's box
// centre for the first point, through the last point afterwards.
Plane reference_plane(const TaskSpec& spec, const PartSplit& part);

Vec3 lift_to_3d(const Plane& plane, const Vec2& plane_point, double offset);
// Inverse of lift_to_3d: in-plane coordinates and offset along the normal.
std::pair<Vec2, double> project_to_plane(const Plane& plane, const Vec3& p);

}  // namespace forge
