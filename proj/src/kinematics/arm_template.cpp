#include "forge/kinematics/arm_template.hpp"

#include <cmath>
#include <numbers>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(BaseMode m) { return m == BaseMode::STATIC_IS_BASE ? "STATIC_IS_BASE" : "STATIC_IS_EE"; }

std::string_view to_string(ArmCase c) {
  switch (c) {
    case ArmCase::UNFOLDED: return "UNFOLDED";
    case ArmCase::FOLDED_EE_ON_TRANSFORMABLE: return "FOLDED_EE_ON_TRANSFORMABLE";
    case ArmCase::FOLDED_EE_ON_STATIC: return "FOLDED_EE_ON_STATIC";
  }
  return "?";
}

ArmCase choose_case(ShapeKind kind, BaseMode mode) {
  if (kind == ShapeKind::SLENDER) return ArmCase::UNFOLDED;
  return mode == BaseMode::STATIC_IS_BASE ? ArmCase::FOLDED_EE_ON_TRANSFORMABLE : ArmCase::FOLDED_EE_ON_STATIC;
}

std::vector<DHRow> ArmTemplate::masked_rows(int config) const {
  std::vector<DHRow> out = rows;
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (out[r].kind == JointKind::STEERING && !masks[config][r]) {
      out[r].kind = JointKind::LOCKED;
      out[r].theta_range = {out[r].theta, out[r].theta};
    }
  }
  return out;
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 driving_axis(const PartSplit& split, const ShapeClass& shape) {
  if (shape.kind == ShapeKind::NON_SLENDER) return shape.principal_axis;
  // Slender parts bend about their thinnest cross axis.
  const Vec3 e = bounding_box(split.transformable).extents();
  const int k = index_of(shape.longest_axis);
  const int i = (k + 1) % 3;
  const int j = (k + 2) % 3;
  const int thin = e[j] < e[i] || (e[j] == e[i] && j < i) ? j : i;
  return unit_vector(static_cast<Axis>(thin));
}

Vec3 static_anchor(const PartSplit& split, const SegmentationResult& links) {
  if (split.statics.empty()) return links.joint_anchors[0];
  return centroid(concatenate(split.statics));
}

struct Layout {
  std::array<Vec3, 4> points;
  std::array<int, 4> link_for_joint;
  Vec3 tool;
  int steering = 0;
};

Layout layout(const PartSplit& split, BaseMode mode, ArmCase arm_case, const SegmentationResult& links) {
  Layout out;
  const auto& p = links.joint_anchors;
  if (mode == BaseMode::STATIC_IS_BASE) {
    out.points = {p[0], p[1], p[2], p[3]};
    out.link_for_joint = {0, 1, 2, 3};
    out.tool = p[4];
  } else {
    // The far link stays put; the static part rides on the tool.
    out.points = {p[3], p[2], p[1], p[0]};
    out.link_for_joint = {2, 1, 0, -1};
    out.tool = static_anchor(split, links);
  }
  out.steering = arm_case == ArmCase::FOLDED_EE_ON_TRANSFORMABLE ? 1 : 0;
  return out;
}

ArmConfiguration make_configuration(int index, const Layout& lay, const Vec3& drive, const KinematicsOptions& opt,
                                    ArmCase arm_case, BaseMode mode) {
  std::vector<JointLine> lines;
  for (int j = 0; j < 4; ++j) {
    JointLine line;
    line.point = lay.points[j];
    if (j == lay.steering) {
      line.axis = unit_vector(static_cast<Axis>(index));
      line.kind = JointKind::STEERING;
      line.half_range = opt.steering_half_range_deg * kDeg;
    } else {
      line.axis = drive;
      line.kind = JointKind::DRIVING;
      line.half_range = opt.driving_half_range_deg * kDeg;
    }
    lines.push_back(line);
  }
  const Chain chain = build_chain(lines, lay.tool);
  ArmConfiguration c;
  c.index = index;
  c.arm_case = arm_case;
  c.base_mode = mode;
  c.dh_table = chain.rows;
  c.joint_values = rest_values(chain.rows);
  c.base_frame = chain.base_frame;
  c.joint_offsets = chain.joint_offsets;
  c.steering_joint = lay.steering;
  c.link_for_joint = lay.link_for_joint;
  c.tool_point = lay.tool;
  for (const JointLine& l : lines) {
    c.joint_points.push_back(l.point);
    c.joint_axes.push_back(l.axis);
  }
  for (int j = 0; j < 4; ++j) {
    const Vec3 next = j < 3 ? lay.points[j + 1] : lay.tool;
    c.link_lengths[j] = (next - lay.points[j]).norm();
  }
  return c;
}

}  // namespace

ArmTemplate build_template(const PartSplit& split, const ShapeClass& shape, BaseMode base_mode,
                           const SegmentationResult& links, const KinematicsOptions& options) {
  if (links.links.size() != 4) {
    fail(ErrorCode::BadLinkCount, "arm template needs 4 links, got " + std::to_string(links.links.size()));
  }
  ArmTemplate t;
  t.base_mode = base_mode;
  t.arm_case = choose_case(shape.kind, base_mode);
  const Layout lay = layout(split, base_mode, t.arm_case, links);
  const Vec3 drive = driving_axis(split, shape);

  std::vector<JointLine> lines;
  for (int j = 0; j < 4; ++j) {
    if (j == lay.steering) {
      for (int c = 0; c < kConfigCount; ++c) {
        t.steering_rows[c] = static_cast<int>(lines.size());
        lines.push_back({lay.points[j], unit_vector(static_cast<Axis>(c)), JointKind::STEERING,
                         options.steering_half_range_deg * kDeg});
      }
    } else {
      lines.push_back({lay.points[j], drive, JointKind::DRIVING, options.driving_half_range_deg * kDeg});
    }
  }
  const Chain chain = build_chain(lines, lay.tool);
  t.rows = chain.rows;
  t.base_frame = chain.base_frame;
  t.joint_offsets = chain.joint_offsets;
  for (int c = 0; c < kConfigCount; ++c) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const bool steering = t.rows[r].kind == JointKind::STEERING;
      t.masks[c][r] = t.rows[r].kind == JointKind::DRIVING || (steering && static_cast<int>(r) == t.steering_rows[c]);
    }
    t.configurations[c] = make_configuration(c, lay, drive, options, t.arm_case, base_mode);
  }
  return t;
}

Pose tool_pose(const ArmConfiguration& config, std::span<const double> values) {
  return config.base_frame * forward_kinematics(config.dh_table, values);
}

std::vector<Vec3> joint_positions(const ArmConfiguration& config, std::span<const double> values) {
  const std::vector<Pose> frames = frame_chain(config.dh_table, values);
  std::vector<Vec3> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out.push_back(config.base_frame * (frames[i] * Vec3(0, 0, config.joint_offsets[i])));
  }
  return out;
}

}  // namespace forge
