#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "forge/error.hpp"
#include "forge/fabrication/fabrication.hpp"
#include "forge/mesh/primitives.hpp"

namespace forge {

std::string_view to_string(ConnectorType t) {
  switch (t) {
    case ConnectorType::A: return "A";
    case ConnectorType::B: return "B";
    case ConnectorType::HINGE: return "HINGE";
  }
  return "?";
}

std::string_view to_string(EndEffectorKind k) {
  switch (k) {
    case EndEffectorKind::GRIPPER: return "GRIPPER";
    case EndEffectorKind::C_CLAMP: return "C_CLAMP";
    case EndEffectorKind::U_CHANNEL: return "U_CHANNEL";
    case EndEffectorKind::PAD: return "PAD";
  }
  return "?";
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::Isometry3d frame(const Vec3& origin, const Vec3& x, const Vec3& y, const Vec3& z) {
  Eigen::Isometry3d f = Eigen::Isometry3d::Identity();
  f.linear().col(0) = x;
  f.linear().col(1) = y;
  f.linear().col(2) = z;
  f.translation() = origin;
  return f;
}

Mesh box_in(const Eigen::Isometry3d& f, const Vec3& lo, const Vec3& hi) {
  return transformed(make_box({lo, hi}), f);
}

std::pair<double, double> span_along(const Mesh& m, const Vec3& origin, const Vec3& dir) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : m.triangles) {
    for (int v : t) {
      const double s = (m.vertices[v] - origin).dot(dir);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  return {lo, hi};
}

// Direction from the pivot into `part`, perpendicular to the joint axis.
// Falls back to the in-plane direction along which the part is widest.
Vec3 depth_direction(const Mesh& part, const Vec3& pivot, const Vec3& axis) {
  const Vec3 d = centroid(part) - pivot;
  const Vec3 in_plane = d - d.dot(axis) * axis;
  if (in_plane.norm() > 0.3 * d.norm() && in_plane.norm() > 1e-9) return in_plane.normalized();
  const auto [u, v] = Plane::make(pivot, axis).basis();
  const auto [ulo, uhi] = span_along(part, pivot, u);
  const auto [vlo, vhi] = span_along(part, pivot, v);
  Vec3 dir = (vhi - vlo) > (uhi - ulo) + 1e-9 ? v : u;
  if (d.dot(dir) < 0.0) dir = -dir;
  return dir;
}

// Half width of the part's end at the pivot, across the link in the motion plane.
double end_half_width(const Mesh& part, const Vec3& pivot, const Vec3& axis, const Vec3& depth) {
  const Vec3 lateral = axis.cross(depth);
  double hw = 0.0;
  for (const auto& t : part.triangles) {
    for (int v : t) {
      const Vec3 r = part.vertices[v] - pivot;
      if (std::abs(r.dot(depth)) <= 0.5) hw = std::max(hw, std::abs(r.dot(lateral)));
    }
  }
  return hw;
}

const Mesh& part_of(const SegmentationResult& seg, int link) { return seg.links[link]; }

Vec3 driving_axis(const ArmConfiguration& config) {
  for (std::size_t j = 0; j < 4; ++j) {
    if (config.dh_table[j].kind == JointKind::DRIVING) return config.joint_axes[j].normalized();
  }
  return config.joint_axes.back().normalized();
}

void require_links(const SegmentationResult& seg, const ArmConfiguration& config) {
  if (seg.links.size() != 4) fail(ErrorCode::BadLinkCount, "fabrication needs 4 links");
  if (config.joint_points.size() != 4 || config.joint_axes.size() != 4 || config.dh_table.size() < 4) {
    fail(ErrorCode::BadLinkCount, "configuration must have 4 joints");
  }
}

}  // namespace

std::vector<JointSite> joint_sites(const SegmentationResult& seg, const ArmConfiguration& config) {
  require_links(seg, config);
  const bool base = config.base_mode == BaseMode::STATIC_IS_BASE;
  std::vector<JointSite> out;
  for (int j = 0; j < 4; ++j) {
    JointSite s;
    s.joint = j;
    s.anchor = base ? j : 3 - j;
    const int moved = config.link_for_joint[j];
    s.pocket_link = moved >= 0 ? moved : s.anchor;
    s.neighbour = base ? s.anchor - 1 : (moved >= 0 ? s.anchor : -1);
    s.pivot = config.joint_points[j];
    s.axis = config.joint_axes[j].normalized();
    const DHRow& row = config.dh_table[j];
    s.locked = !row.actuated() || row.theta_range[1] - row.theta_range[0] <= 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<Connector> attach_connectors(const SegmentationResult& seg, const ArmConfiguration& config,
                                         bool motorized, const FabricationOptions& options) {
  const auto sites = joint_sites(seg, config);
  const Vec3 drive = driving_axis(config);
  const double cos_tol = std::cos(options.parallel_tolerance_deg * kDeg);
  const double sin_tol = std::sin(options.parallel_tolerance_deg * kDeg);

  std::vector<Connector> out;
  for (const JointSite& s : sites) {
    Connector c;
    c.joint = s.joint;
    c.link_a = s.neighbour;
    c.link_b = s.pocket_link;
    c.pivot = s.pivot;
    c.axis = s.axis;

    const Mesh& body = part_of(seg, s.pocket_link);
    const Vec3 depth = depth_direction(body, s.pivot, s.axis);
    const auto [t_lo, t_hi] = span_along(body, s.pivot, s.axis);
    const auto f = frame(s.pivot, depth.cross(s.axis), depth, s.axis);

    if (!motorized) {
      c.type = ConnectorType::HINGE;
      const double r = options.hinge_pin_radius;
      const double ri = r + options.hinge_clearance;
      const int n = options.segments;
      // Pin with a knuckle on each side; the clearance gap keeps them separate.
      c.mesh = concatenate({transformed(make_cylinder(Vec3(0, 0, t_lo - 4.0), Vec3(0, 0, t_hi + 4.0), r, n), f),
                            transformed(make_tube(Vec3(0, 0, t_hi + 0.5), Vec3(0, 0, t_hi + 4.0), ri, ri + 3.2, n), f),
                            transformed(make_tube(Vec3(0, 0, t_lo - 4.0), Vec3(0, 0, t_lo - 0.5), ri, ri + 3.2, n), f)},
                           "hinge");
      out.push_back(std::move(c));
      continue;
    }

    bool same_plane = std::abs(s.axis.dot(drive)) >= cos_tol;
    for (int link : {s.pocket_link, s.neighbour}) {
      if (link < 0) continue;
      const Vec3 d = centroid(part_of(seg, link)) - s.pivot;
      if (d.norm() > 1e-9 && std::abs(d.normalized().dot(s.axis)) > sin_tol) same_plane = false;
    }

    if (same_plane) {
      c.type = ConnectorType::A;
      for (int link : {s.pocket_link, s.neighbour}) {
        if (link < 0) continue;
        const Mesh& m = part_of(seg, link);
        c.fillet_radius = std::max(c.fillet_radius, end_half_width(m, s.pivot, s.axis, depth_direction(m, s.pivot, s.axis)));
      }
      c.mesh = transformed(make_tube(Vec3(0, 0, t_hi), Vec3(0, 0, t_hi + 3.0), 1.5, 9.0, options.segments), f);
      c.mesh.name = "connector_a";
    } else {
      c.type = ConnectorType::B;
      // Two screwed side plates bridging the offset between the moving planes.
      std::vector<Mesh> plates;
      for (const auto& [z0, z1] : {std::pair{t_hi + 0.5, t_hi + 3.5}, std::pair{t_lo - 3.5, t_lo - 0.5}}) {
        Mesh plate = make_box({Vec3(-12, -20, z0), Vec3(12, 20, z1)});
        std::vector<Mesh> holes;
        for (double x : {-7.0, 7.0}) {
          for (double y : {-14.0, 14.0}) {
            holes.push_back(make_cylinder(Vec3(x, y, z0 - 1.0), Vec3(x, y, z1 + 1.0), 1.1, 16));
          }
        }
        plates.push_back(transformed(boolean_op(plate, concatenate(holes), BooleanOp::SUBTRACT, options.csg), f));
      }
      c.mesh = concatenate(plates, "connector_b");
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<MotorShell> place_motor_shells(const SegmentationResult& seg, const ArmConfiguration& config,
                                           const MotorSpec& motor, const FabricationOptions& options) {
  const auto sites = joint_sites(seg, config);
  const double clr = options.pocket_clearance;
  const Vec3 half = 0.5 * motor.body;

  std::vector<MotorShell> out;
  for (const JointSite& s : sites) {
    if (s.locked) continue;
    const Mesh& link = part_of(seg, s.pocket_link);
    const Vec3 y = depth_direction(link, s.pivot, s.axis);
    const Vec3 x = y.cross(s.axis);
    const auto [xlo, xhi] = span_along(link, s.pivot, x);
    const auto [zlo, zhi] = span_along(link, s.pivot, s.axis);
    const double need_x = motor.body.x() + 2.0 * options.wall;
    const double need_z = motor.body.z() + 2.0 * options.wall;
    if (xhi - xlo < need_x || zhi - zlo < need_z) {
      fail(ErrorCode::MotorDoesNotFit, "link " + std::to_string(s.pocket_link) + " cross-section " +
                                           std::to_string(xhi - xlo) + " x " + std::to_string(zhi - zlo) +
                                           " mm is smaller than the motor footprint with walls (" +
                                           std::to_string(need_x) + " x " + std::to_string(need_z) + " mm)");
    }

    MotorShell sh;
    sh.joint = s.joint;
    sh.link = s.pocket_link;
    sh.neighbour = s.neighbour;
    sh.pivot = s.pivot;
    sh.axis = s.axis;
    // Horn on the joint axis, body centred across the link thickness.
    const Vec3 body_center(-motor.horn_offset.x(), -motor.horn_offset.y(), 0.0);
    const auto f = frame(s.pivot, x, y, s.axis);
    sh.body_frame = f * Eigen::Translation3d(body_center);
    const Vec3 h = half + Vec3::Constant(clr);
    sh.pocket = transformed(make_box({-h, h}), sh.body_frame);
    sh.pocket.name = "motor_pocket";

    for (const RivetHole& hole : motor.rivet_holes) {
      // The hole runs along the normal of the body face it sits on.
      int k = 0;
      for (int i = 1; i < 3; ++i) {
        if (std::abs(hole.position[i]) / half[i] > std::abs(hole.position[k]) / half[k]) k = i;
      }
      Vec3 dir = Vec3::Zero();
      dir[k] = hole.position[k] < 0.0 ? -1.0 : 1.0;
      const Vec3 start = hole.position - dir;
      const Vec3 end = hole.position + dir * (clr + 8.0);
      sh.rivet_holes.push_back(transformed(make_cylinder(start, end, 0.5 * hole.diameter, 16), sh.body_frame));
    }

    // Corners of the pocket behind the pivot sweep into the neighbour.
    for (double cx : {-h.x(), h.x()}) {
      for (double cy : {-h.y(), h.y()}) {
        const Vec3 corner = body_center + Vec3(cx, cy, 0.0);
        if (corner.y() < 0.0) sh.sweep_radius = std::max(sh.sweep_radius, corner.head<2>().norm());
      }
    }
    if (sh.sweep_radius > 0.0) {
      sh.sweep_radius += options.wall;
      sh.sweep_clearance =
          transformed(make_cylinder(Vec3(0, 0, -h.z()), Vec3(0, 0, h.z()), sh.sweep_radius, options.segments), f);
    }
    out.push_back(std::move(sh));
  }
  return out;
}

std::vector<Mesh> apply_link_features(const SegmentationResult& seg, const ArmConfiguration& config,
                                      const std::vector<Connector>& connectors, const std::vector<MotorShell>& shells,
                                      const FabricationOptions& options) {
  require_links(seg, config);
  std::vector<std::vector<Mesh>> cutters(4);

  for (const Connector& c : connectors) {
    for (int link : {c.link_a, c.link_b}) {
      if (link < 0) continue;
      const Mesh& m = part_of(seg, link);
      const auto [t_lo, t_hi] = span_along(m, c.pivot, c.axis);
      const Vec3 depth = depth_direction(m, c.pivot, c.axis);
      const auto f = frame(c.pivot, depth.cross(c.axis), depth, c.axis);
      if (c.type == ConnectorType::HINGE) {
        const double r = options.hinge_pin_radius + options.hinge_clearance;
        cutters[link].push_back(
            transformed(make_cylinder(Vec3(0, 0, t_lo - 1.0), Vec3(0, 0, t_hi + 1.0), r, options.segments), f));
      } else if (c.type == ConnectorType::A) {
        const double r = end_half_width(m, c.pivot, c.axis, depth);
        if (r <= 1.0) continue;
        // Round the link end: keep a disc that crosses the end face slightly
        // so the cut never grazes it.
        const Mesh slab = box_in(f, Vec3(-r - 1.0, -1.0, t_lo - 1.0), Vec3(r + 1.0, r, t_hi + 1.0));
        const Mesh disc =
            transformed(make_cylinder(Vec3(0, r - 0.5, t_lo - 2.0), Vec3(0, r - 0.5, t_hi + 2.0), r, 64), f);
        cutters[link].push_back(boolean_op(slab, disc, BooleanOp::SUBTRACT, options.csg));
      }
    }
  }
  for (const MotorShell& sh : shells) {
    cutters[sh.link].push_back(sh.pocket);
    if (!sh.rivet_holes.empty()) cutters[sh.link].push_back(concatenate(sh.rivet_holes));
    if (sh.neighbour >= 0 && !sh.sweep_clearance.empty()) cutters[sh.neighbour].push_back(sh.sweep_clearance);
  }

  std::vector<Mesh> out;
  for (int i = 0; i < 4; ++i) {
    Mesh m = seg.links[i];
    for (const Mesh& cut : cutters[i]) {
      if (!cut.empty()) m = boolean_op(m, cut, BooleanOp::SUBTRACT, options.csg);
    }
    m.name = "link_" + std::to_string(i);
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Partial annulus about +z, open around +x.
Mesh c_profile(double inner, double outer, double length, double span_deg, int segments) {
  const double half = 0.5 * span_deg * kDeg;
  Mesh m;
  m.name = "c_clamp";
  for (int i = 0; i <= segments; ++i) {
    const double phi = std::numbers::pi - half + 2.0 * half * i / segments;
    const Vec3 dir(std::cos(phi), std::sin(phi), 0.0);
    m.vertices.push_back(inner * dir);
    m.vertices.push_back(outer * dir);
    m.vertices.push_back(inner * dir + Vec3(0, 0, length));
    m.vertices.push_back(outer * dir + Vec3(0, 0, length));
  }
  auto quad = [&](int a, int b, int c, int d) {
    m.triangles.push_back({a, b, c});
    m.triangles.push_back({a, c, d});
  };
  for (int i = 0; i < segments; ++i) {
    const int a = 4 * i, b = 4 * (i + 1);
    quad(a + 1, b + 1, b + 3, a + 3);  // outer
    quad(a, a + 2, b + 2, b);          // inner
    quad(a, b, b + 1, a + 1);          // bottom
    quad(a + 2, a + 3, b + 3, b + 2);  // top
  }
  const int e = 4 * segments;
  quad(0, 1, 3, 2);
  quad(e, e + 2, e + 3, e + 1);
  return oriented_outward(std::move(m));
}

void check_envelope(const Mesh& m, double envelope) {
  const Vec3 e = bounding_box(m).extents();
  if (e.maxCoeff() > envelope) {
    fail(ErrorCode::UnsupportedSurface,
         "end effector needs " + std::to_string(e.maxCoeff()) + " mm, printable envelope is " +
             std::to_string(envelope) + " mm");
  }
}

double dimension(const AttachSurface& s, std::size_t i) {
  if (s.dimensions.size() <= i || !(s.dimensions[i] > 0.0)) {
    fail(ErrorCode::UnsupportedSurface, std::string(to_string(s.kind)) + " surface is missing dimension " +
                                            std::to_string(i));
  }
  return s.dimensions[i];
}

Mesh gripper(const MotorSpec& motor) {
  const Vec3 b = motor.body;
  const double wall = 5.0;
  const Vec3 lo(-0.5 * b.x() - wall, -0.5 * b.y() - wall, 0.0);
  const Vec3 hi(0.5 * b.x() + wall, 0.5 * b.y() + wall, b.z() + wall);
  // Pocket open at the top so the motor drops in.
  const Vec3 plo(-0.5 * b.x() - 0.3, -0.5 * b.y() - 0.3, wall - 0.3);
  const Vec3 phi(0.5 * b.x() + 0.3, 0.5 * b.y() + 0.3, hi.z() + 1.0);
  Mesh base = boolean_op(make_box({lo, hi}), make_box({plo, phi}), BooleanOp::SUBTRACT);
  const double top = hi.z() + 2.0;
  Mesh left = make_box({Vec3(lo.x(), -6.0, top), Vec3(lo.x() + 6.0, 6.0, top + 50.0)});
  Mesh right = make_box({Vec3(hi.x() - 6.0, -6.0, top), Vec3(hi.x(), 6.0, top + 50.0)});
  return concatenate({base, left, right}, "gripper");
}

}  // namespace

std::optional<EndEffector> make_end_effector(const TaskSpec& spec, const MotorSpec& motor, double envelope) {
  EndEffector ee;
  if (spec.has_action(Action::PICK) || spec.has_action(Action::PLACE)) {
    ee.kind = EndEffectorKind::GRIPPER;
    ee.mesh = gripper(motor);
    ee.needs_motor = true;
  } else if (spec.has_action(Action::ATTACH)) {
    if (!spec.attach_surface()) fail(ErrorCode::AttachWithoutSurface, "attach task has no surface");
    const AttachSurface& s = *spec.attach_surface();
    switch (s.kind) {
      case SurfaceKind::CYLINDER: {
        ee.kind = EndEffectorKind::C_CLAMP;
        ee.inner_radius = dimension(s, 0) + kClampClearance;
        const double length = s.dimensions.size() > 1 ? std::clamp(s.dimensions[1], 5.0, 40.0) : 20.0;
        ee.mesh = c_profile(ee.inner_radius, ee.inner_radius + 4.0, length, 300.0, 120);
        break;
      }
      case SurfaceKind::RECTANGULAR_PRISM: {
        ee.kind = EndEffectorKind::U_CHANNEL;
        const double w = dimension(s, 0) + 2.0 * kClampClearance;
        const double h = std::min(dimension(s, 1), 20.0);
        const double len = std::clamp(dimension(s, 2), 5.0, 40.0);
        const double wall = 4.0;
        const Mesh outer = make_box({Vec3(-0.5 * w - wall, -wall, 0.0), Vec3(0.5 * w + wall, h, len)});
        check_envelope(outer, envelope);
        const Mesh inner = make_box({Vec3(-0.5 * w, 0.0, -1.0), Vec3(0.5 * w, h + 1.0, len + 1.0)});
        ee.mesh = boolean_op(outer, inner, BooleanOp::SUBTRACT);
        ee.mesh.name = "u_channel";
        break;
      }
      case SurfaceKind::FLAT_PLANE: {
        ee.kind = EndEffectorKind::PAD;
        const double w = dimension(s, 0);
        const double h = dimension(s, 1);
        const Mesh plate = make_box({Vec3(-0.5 * w, -0.5 * h, 0.0), Vec3(0.5 * w, 0.5 * h, 4.0)});
        check_envelope(plate, envelope);
        if (std::min(w, h) < 16.0) fail(ErrorCode::UnsupportedSurface, "plane too small for a screw pad");
        std::vector<Mesh> holes;
        for (double x : {-0.5 * w + 6.0, 0.5 * w - 6.0}) {
          for (double y : {-0.5 * h + 6.0, 0.5 * h - 6.0}) {
            holes.push_back(make_cylinder(Vec3(x, y, -1.0), Vec3(x, y, 5.0), 1.6, 16));
          }
        }
        ee.mesh = boolean_op(plate, concatenate(holes), BooleanOp::SUBTRACT);
        ee.mesh.name = "pad";
        break;
      }
    }
  } else {
    return std::nullopt;
  }
  check_envelope(ee.mesh, envelope);
  return ee;
}

}  // namespace forge
