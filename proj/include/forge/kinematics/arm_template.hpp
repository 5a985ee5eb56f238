#pragma once

#include <array>
#include <vector>

#include "forge/kinematics/dh.hpp"
#include "forge/segmentation/segmentation.hpp"
#include "forge/selection/part_selection.hpp"

namespace forge {

enum class BaseMode { STATIC_IS_BASE, STATIC_IS_EE };
enum class ArmCase { UNFOLDED, FOLDED_EE_ON_TRANSFORMABLE, FOLDED_EE_ON_STATIC };

std::string_view to_string(BaseMode m);
std::string_view to_string(ArmCase c);

inline constexpr int kConfigCount = 3;

// One of the three searchable arms: the steering joint turns about world
// X, Y or Z (config index 0, 1, 2).
struct ArmConfiguration {
  int index = 0;
  ArmCase arm_case = ArmCase::UNFOLDED;
  BaseMode base_mode = BaseMode::STATIC_IS_BASE;
  std::vector<DHRow> dh_table;      // 4 joints + tool row
  std::vector<double> joint_values;  // rest angles of the 4 joints
  std::array<double, 4> link_lengths{};
  Pose base_frame;
  std::vector<double> joint_offsets;
  // Rest geometry in object coordinates.
  std::vector<Vec3> joint_points;
  std::vector<Vec3> joint_axes;
  Vec3 tool_point = Vec3::Zero();
  // Chain position (0..3) of the steering joint.
  int steering_joint = 0;
  // Segmentation link moved by each chain joint (link index, base-adjacent first).
  std::array<int, 4> link_for_joint{};
};

struct ArmTemplate {
  // Seven rows: the joints in chain order with the three steering candidates
  // side by side at the steering position, then the tool row.
  std::vector<DHRow> rows;
  Pose base_frame;
  std::vector<double> joint_offsets;
  // masks[c][r] is true when row r is actuated in configuration c.
  std::array<std::array<bool, 7>, kConfigCount> masks{};
  // Row index of each configuration's steering joint.
  std::array<int, kConfigCount> steering_rows{};
  BaseMode base_mode = BaseMode::STATIC_IS_BASE;
  ArmCase arm_case = ArmCase::UNFOLDED;
  std::array<ArmConfiguration, kConfigCount> configurations;

  // The template rows with the other two steering rows locked at rest.
  std::vector<DHRow> masked_rows(int config) const;
};

struct KinematicsOptions {
  double driving_half_range_deg = 90.0;
  double steering_half_range_deg = 150.0;
};

ArmCase choose_case(ShapeKind kind, BaseMode mode);

// Throws BadLinkCount.
ArmTemplate build_template(const PartSplit& split, const ShapeClass& shape, BaseMode base_mode,
                           const SegmentationResult& links, const KinematicsOptions& options = {});

// World pose of the tool for the given joint values.
Pose tool_pose(const ArmConfiguration& config, std::span<const double> values);
// World positions of the 4 joint points followed by the tool point.
std::vector<Vec3> joint_positions(const ArmConfiguration& config, std::span<const double> values);

}  // namespace forge
