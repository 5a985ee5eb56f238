#include "forge/kinematics/dh.hpp"

#include <cmath>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(JointKind k) {
  switch (k) {
    case JointKind::STEERING: return "STEERING";
    case JointKind::DRIVING: return "DRIVING";
    case JointKind::END_EFFECTOR: return "END_EFFECTOR";
    case JointKind::LOCKED: return "LOCKED";
  }
  return "?";
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::inverse() const { return {rotation.transpose(), -(rotation.transpose() * translation)}; }

Pose Pose::operator*(const Pose& other) const {
  return {rotation * other.rotation, rotation * other.translation + translation};
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) { return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()}; }

Pose dh_transform(const DHRow& row) {
  const double ct = std::cos(row.theta), st = std::sin(row.theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Pose p;
  p.rotation << ct, -st, 0.0,
                st * ca, ct * ca, -sa,
                st * sa, ct * sa, ca;
  p.translation = Vec3(row.a, -sa * row.d, ca * row.d);
  return p;
}

std::size_t actuated_count(std::span<const DHRow> rows) {
  std::size_t n = 0;
  for (const DHRow& r : rows) n += r.actuated() ? 1 : 0;
  return n;
}

std::vector<Pose> frame_chain(std::span<const DHRow> rows, std::span<const double> values) {
  if (values.size() != actuated_count(rows)) {
    fail(ErrorCode::ValueCountMismatch, "expected " + std::to_string(actuated_count(rows)) + " joint values, got " +
                                            std::to_string(values.size()));
  }
  std::vector<Pose> frames;
  frames.reserve(rows.size());
  Pose acc;
  std::size_t next = 0;
  for (DHRow row : rows) {
    if (row.actuated()) row.theta = values[next++];
    acc = acc * dh_transform(row);
    frames.push_back(acc);
  }
  return frames;
}

Pose forward_kinematics(std::span<const DHRow> rows, std::span<const double> values) {
  if (values.size() != actuated_count(rows)) {
    fail(ErrorCode::ValueCountMismatch, "expected " + std::to_string(actuated_count(rows)) + " joint values, got " +
                                            std::to_string(values.size()));
  }
  Pose acc;
  std::size_t next = 0;
  for (DHRow row : rows) {
    if (row.actuated()) row.theta = values[next++];
    acc = acc * dh_transform(row);
  }
  return acc;
}

std::vector<double> rest_values(std::span<const DHRow> rows) {
  std::vector<double> out;
  for (const DHRow& r : rows) {
    if (r.actuated()) out.push_back(r.theta);
  }
  return out;
}

namespace {

constexpr double kLineTol = 1e-9;

Vec3 perpendicular_to(const Vec3& z, const Vec3& hint) {
  Vec3 v = hint - hint.dot(z) * z;
  if (v.norm() > 1e-6) return v.normalized();
  return Plane::make(Vec3::Zero(), z).basis().first;
}

struct Frame {
  Vec3 origin;
  Vec3 x;
  Vec3 z;
};

// Frame on line 1 whose x axis is the common normal towards line 2.
Frame common_normal(const Vec3& q1, const Vec3& z1, const Vec3& q2, const Vec3& z2, const Vec3& x_hint) {
  const Vec3 c = z1.cross(z2);
  if (c.norm() > kLineTol) {
    const Vec3 w0 = q1 - q2;
    const double b = z1.dot(z2);
    const double d = z1.dot(w0);
    const double e = z2.dot(w0);
    const double denom = 1.0 - b * b;
    const double s = (b * e - d) / denom;
    const double t = (e - b * d) / denom;
    const Vec3 f1 = q1 + s * z1;
    const Vec3 f2 = q2 + t * z2;
    const Vec3 diff = f2 - f1;
    // x along z1 x z2, pointing from line 1 towards line 2.
    Vec3 x = c.normalized();
    if (diff.norm() > kLineTol && diff.dot(x) < 0.0) x = -x;
    return {f1, x, z1};
  }
  const Vec3 w = q2 - q1;
  const Vec3 perp = w - w.dot(z1) * z1;
  if (perp.norm() > kLineTol) return {q1, perp.normalized(), z1};
  return {q1, perpendicular_to(z1, x_hint), z1};
}

double angle_about(const Vec3& from, const Vec3& to, const Vec3& axis) {
  return std::atan2(from.cross(to).dot(axis), from.dot(to));
}

}  // namespace

Chain build_chain(std::span<const JointLine> joints, const Vec3& tool_point) {
  if (joints.empty()) fail(ErrorCode::BadLinkCount, "chain without joints");
  const std::size_t n = joints.size();
  std::vector<Frame> frames(n);
  Vec3 x_hint = Vec3::UnitX();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = joints[i].axis.norm();
    if (!(len > 1e-12)) fail(ErrorCode::DegenerateAxis, "joint axis has zero length");
    const Vec3 z = joints[i].axis / len;
    if (i + 1 < n) {
      frames[i] = common_normal(joints[i].point, z, joints[i + 1].point, joints[i + 1].axis.normalized(), x_hint);
    } else {
      const Vec3 w = tool_point - joints[i].point;
      const Vec3 perp = w - w.dot(z) * z;
      const Vec3 foot = joints[i].point + w.dot(z) * z;
      if (perp.norm() > kLineTol) {
        frames[i] = {foot, perp.normalized(), z};
      } else {
        frames[i] = {joints[i].point, perpendicular_to(z, x_hint), z};
      }
    }
    x_hint = frames[i].x;
  }

  Chain chain;
  const Frame& f0 = frames[0];
  chain.base_frame.rotation.col(0) = f0.x;
  chain.base_frame.rotation.col(1) = f0.z.cross(f0.x);
  chain.base_frame.rotation.col(2) = f0.z;
  chain.base_frame.translation = f0.origin;

  for (std::size_t i = 0; i < n; ++i) {
    DHRow row;
    row.kind = joints[i].kind;
    if (i > 0) {
      const Frame& p = frames[i - 1];
      const Frame& f = frames[i];
      row.a = (f.origin - p.origin).dot(p.x);
      row.alpha = angle_about(p.z, f.z, p.x);
      row.d = (f.origin - p.origin).dot(f.z);
      row.theta = angle_about(p.x, f.x, f.z);
    }
    const double half = row.kind == JointKind::LOCKED ? 0.0 : joints[i].half_range;
    row.theta_range = {row.theta - half, row.theta + half};
    chain.rows.push_back(row);
    chain.joint_offsets.push_back((joints[i].point - frames[i].origin).dot(frames[i].z));
  }
  DHRow tool;
  tool.kind = JointKind::END_EFFECTOR;
  const Frame& last = frames[n - 1];
  tool.a = (tool_point - last.origin).dot(last.x);
  tool.d = (tool_point - last.origin).dot(last.z);
  tool.theta_range = {0.0, 0.0};
  chain.rows.push_back(tool);
  chain.joint_offsets.push_back(0.0);
  return chain;
}

}  // namespace forge
