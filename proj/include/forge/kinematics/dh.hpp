#pragma once

#include <Eigen/Core>

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "forge/mesh/mesh.hpp"

namespace forge {

enum class JointKind { STEERING, DRIVING, END_EFFECTOR, LOCKED };

std::string_view to_string(JointKind k);

// One row of a modified DH table: a and alpha describe the previous link,
// d and theta this joint. Lengths in mm, angles in radians.
struct DHRow {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta = 0.0;
  std::array<double, 2> theta_range{0.0, 0.0};
  JointKind kind = JointKind::DRIVING;

  bool actuated() const { return kind == JointKind::STEERING || kind == JointKind::DRIVING; }
};

// Rigid transform. Rotation columns are n, o, a.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 n() const { return rotation.col(0); }
  Vec3 o() const { return rotation.col(1); }
  Vec3 a() const { return rotation.col(2); }
  Eigen::Matrix4d matrix() const;
  Pose inverse() const;
  Pose operator*(const Pose& other) const;
  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

  static Pose identity() { return {}; }
  static Pose from_matrix(const Eigen::Matrix4d& m);
};

Pose dh_transform(const DHRow& row);

std::size_t actuated_count(std::span<const DHRow> rows);

// Product of the row transforms with theta of each actuated row replaced by
// the next entry of `values`. Throws ValueCountMismatch.
Pose forward_kinematics(std::span<const DHRow> rows, std::span<const double> values);

// Cumulative frames: element i is the pose of frame i+1 in the chain base.
std::vector<Pose> frame_chain(std::span<const DHRow> rows, std::span<const double> values);

// Rest values of the actuated rows (their stored theta).
std::vector<double> rest_values(std::span<const DHRow> rows);

// A revolute joint given as a line in world coordinates.
struct JointLine {
  Vec3 point = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  JointKind kind = JointKind::DRIVING;
  // Symmetric range about the rest angle, radians.
  double half_range = 0.0;
};

struct Chain {
  std::vector<DHRow> rows;  // one per joint, then the tool row
  Pose base_frame;          // world pose of the chain base (frame 1 at rest)
  // Position of each joint point along its frame's z axis (0 for the tool row).
  std::vector<double> joint_offsets;
};

// DH table of the serial chain through `joints` ending at `tool_point`. The
// tool frame's z is parallel to the last joint axis and its x points from that
// axis to the tool point. Rest thetas reproduce the given geometry.
// Throws DegenerateAxis for a zero axis.
Chain build_chain(std::span<const JointLine> joints, const Vec3& tool_point);

}  // namespace forge
