#include "forge/task/task_model.hpp"

#include <cmath>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::PICK: return "PICK";
    case Action::PLACE: return "PLACE";
    case Action::TRAJECTORY: return "TRAJECTORY";
    case Action::ATTACH: return "ATTACH";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view text) {
  for (Action a : {Action::PICK, Action::PLACE, Action::TRAJECTORY, Action::ATTACH}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::CYLINDER: return "CYLINDER";
    case SurfaceKind::RECTANGULAR_PRISM: return "RECTANGULAR_PRISM";
    case SurfaceKind::FLAT_PLANE: return "FLAT_PLANE";
  }
  return "?";
}

std::optional<SurfaceKind> parse_surface_kind(std::string_view text) {
  for (SurfaceKind k : {SurfaceKind::CYLINDER, SurfaceKind::RECTANGULAR_PRISM, SurfaceKind::FLAT_PLANE}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

namespace {

bool pick_place_class(Action a) { return a == Action::PICK || a == Action::PLACE; }

std::size_t expected_dimensions(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::CYLINDER: return 2;
    case SurfaceKind::RECTANGULAR_PRISM: return 3;
    case SurfaceKind::FLAT_PLANE: return 2;
  }
  return 0;
}

}  // namespace

TaskSpec TaskSpec::from_parts(std::vector<MotionPoint> points, std::optional<AttachSurface> surface,
                              std::vector<ReferenceObject> references) {
  TaskSpec s;
  s.points_ = std::move(points);
  s.surface_ = std::move(surface);
  s.references_ = std::move(references);
  return s;
}

TaskSpec TaskSpec::add_point(MotionPoint p) const {
  if (p.action == Action::ATTACH && !surface_) {
    fail(ErrorCode::AttachWithoutSurface, "attach point added before an attach surface was set");
  }
  if (pick_place_class(p.action)) {
    std::size_t count = 0;
    for (const MotionPoint& q : points_) count += pick_place_class(q.action) ? 1 : 0;
    p.action = count % 2 == 0 ? Action::PICK : Action::PLACE;
  }
  TaskSpec out = *this;
  out.points_.push_back(std::move(p));
  return out;
}

TaskSpec TaskSpec::with_surface(AttachSurface s) const {
  TaskSpec out = *this;
  out.surface_ = std::move(s);
  return out;
}

TaskSpec TaskSpec::with_reference(ReferenceObject r) const {
  TaskSpec out = *this;
  out.references_.push_back(std::move(r));
  return out;
}

bool TaskSpec::is_loop() const {
  if (points_.size() < 2) return false;
  return (points_.back().position - points_.front().position).norm() < kLoopThreshold;
}

bool TaskSpec::has_action(Action a) const {
  for (const MotionPoint& p : points_) {
    if (p.action == a) return true;
  }
  return false;
}

std::vector<Violation> validate(const TaskSpec& spec) {
  std::vector<Violation> out;
  if (spec.points().empty()) out.push_back({"NoPoints", "task has no motion points", std::nullopt});
  std::size_t picks = 0, places = 0;
  for (std::size_t i = 0; i < spec.points().size(); ++i) {
    const MotionPoint& p = spec.points()[i];
    if (!p.position.allFinite()) out.push_back({"NonFinitePosition", "position is not finite", i});
    if (p.action == Action::PICK) ++picks;
    if (p.action == Action::PLACE) ++places;
    if (places > picks) {
      out.push_back({"PlaceBeforePick", "place without a preceding pick", i});
      places = picks;
    } else if (picks > places + 1) {
      out.push_back({"PickWithoutPlace", "second pick before the previous object was placed", i});
      picks = places + 1;
    }
    if (p.action == Action::ATTACH && !spec.attach_surface()) {
      out.push_back({"AttachWithoutSurface", "attach point without an attach surface", i});
    }
    if (p.orientation && std::abs(p.orientation->norm() - 1.0) > 1e-9) {
      out.push_back({"NonUnitOrientation", "orientation must be a unit vector", i});
    }
  }
  if (const auto& s = spec.attach_surface()) {
    bool ok = s->dimensions.size() == expected_dimensions(s->kind);
    for (double d : s->dimensions) ok = ok && d > 0.0 && std::isfinite(d);
    if (!ok) out.push_back({"InvalidSurface", "attach surface dimensions must be positive and match its kind", std::nullopt});
    if (std::abs(s->orientation.norm() - 1.0) > 1e-9) {
      out.push_back({"NonUnitOrientation", "attach surface orientation must be a unit vector", std::nullopt});
    }
  }
  return out;
}

Plane reference_plane(const TaskSpec& spec, const PartSplit& part) {
  const Vec3 normal = unit_vector(part.selection.axis);
  if (spec.points().empty()) return Plane::make(bounding_box(part.transformable).center(), normal);
  return Plane::make(spec.points().back().position, normal);
}

Vec3 lift_to_3d(const Plane& plane, const Vec2& plane_point, double offset) {
  const auto [u, v] = plane.basis();
  return plane.origin + plane_point.x() * u + plane_point.y() * v + offset * plane.normal;
}

std::pair<Vec2, double> project_to_plane(const Plane& plane, const Vec3& p) {
  const auto [u, v] = plane.basis();
  const Vec3 d = p - plane.origin;
  return {Vec2(d.dot(u), d.dot(v)), d.dot(plane.normal)};
}

}  // namespace forge
