#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/workspace/workspace.hpp"

namespace forge {

struct Waypoint {
  double time = 0.0;            // seconds
  std::vector<double> angles;   // radians, one per actuated joint
  std::string action;           // REST, PICK, PLACE, TRAJECTORY, ATTACH
  double residual = 0.0;        // mm from the motion point
};

struct JointTrajectory {
  std::vector<Waypoint> waypoints;
  bool motorized = true;
};

struct IkOptions {
  double damping = 0.05;
  double orientation_weight = 0.3;
  int max_iterations = 200;
  int seeds = 8;
  double divergence = 2.0;  // mm
  double tolerance = 1e-9;  // mm
};

struct IkResult {
  std::vector<double> values;
  double residual = 0.0;  // mm
};

// Damped least squares from each seed; the best converged result wins,
// preferring the one closest to `previous`. Joint limits are enforced by
// clamping. Throws IKDivergence.
IkResult solve_ik(const ArmConfiguration& config, const Vec3& target, const std::optional<Vec3>& direction,
                  std::span<const std::vector<double>> seeds, const std::vector<double>& previous,
                  const IkOptions& options = {});

inline constexpr double kDefaultSpeed = 60.0;  // deg/s
inline constexpr double kMinSegmentTime = 0.1;

// Waypoint 0 is the rest pose. Points listed in `approximate` (typically
// snapped ones) take the best solution found instead of failing.
// Throws PointOutsideWorkspace, IKDivergence.
JointTrajectory plan_trajectory(const ArmConfiguration& config, const Workspace& ws, const TaskSpec& spec,
                                double speed_deg_s = kDefaultSpeed, const IkOptions& options = {},
                                std::span<const std::size_t> approximate = {});

std::string trajectory_csv(const JointTrajectory& trajectory);

}  // namespace forge
