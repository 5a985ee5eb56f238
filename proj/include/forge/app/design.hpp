#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/kinematics/arm_template.hpp"
#include "forge/task/task_model.hpp"

namespace forge {

struct ReferenceEntry {
  std::filesystem::path mesh_path;
  Eigen::Isometry3d transform = Eigen::Isometry3d::Identity();
};

// Inputs of one run. Relative mesh paths resolve against the design file's
// directory.
struct DesignFile {
  std::string name;
  std::filesystem::path mesh_path;
  SweepSelection selection;
  BaseMode base_mode = BaseMode::STATIC_IS_BASE;  // end_effector_on: TRANSFORMABLE
  bool motorized = true;
  std::vector<MotionPoint> motion_points;
  std::optional<AttachSurface> attach_surface;
  std::vector<ReferenceEntry> references;
  std::optional<int> resolution;
  std::optional<double> speed_deg_s;
};

// Throws InvalidDesign with the offending field in the message.
DesignFile parse_design(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
// Throws IOFailure, ParseError, InvalidDesign (also for missing mesh files).
DesignFile load_design_file(const std::filesystem::path& path);

// Field parsers shared with the HTTP API. All throw InvalidDesign.
SweepSelection parse_selection(const nlohmann::json& j);
BaseMode parse_end_effector_on(const nlohmann::json& j);
std::vector<MotionPoint> parse_motion_points(const nlohmann::json& j);
AttachSurface parse_attach_surface(const nlohmann::json& j);

nlohmann::json to_json(const MotionPoint& p);

}  // namespace forge
