#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "forge/kinematics/arm_template.hpp"
#include "forge/mesh/convex_hull.hpp"
#include "forge/task/task_model.hpp"

namespace forge {

struct WorkspaceSample {
  Vec3 position = Vec3::Zero();
  Vec3 n_axis = Vec3::UnitX();
  std::vector<double> joint_values;
};

struct Workspace {
  std::vector<WorkspaceSample> samples;
  ConvexHull hull;

  bool empty() const { return samples.empty(); }
};

struct ConfigScore {
  int config_index = 0;
  double rmse = 0.0;
  std::vector<double> per_point_distance;
};

enum class ScoringMode {
  SURFACE,         // 0 inside the hull, else distance to the hull surface
  NEAREST_SAMPLE,  // distance to the closest sampled position
};

inline constexpr int kDefaultResolution = 15;
inline constexpr double kOrientationThreshold = 0.5;

// Evaluates FK on a regular grid over every actuated joint's range
// (resolution^actuated samples) in the frame given by `base`.
// Throws DegenerateWorkspace, InvalidDesign (resolution < 2).
Workspace sample_workspace(std::span<const DHRow> rows, const Pose& base, int resolution);
Workspace sample_workspace(const ArmConfiguration& config, int resolution = kDefaultResolution);

// Keeps samples with |n - dir| <= threshold. Throws NoMatchingOrientation.
Workspace filter_orientation(const Workspace& ws, const Vec3& dir, double threshold = kOrientationThreshold);

// Drops samples whose joint points or tool point lie strictly inside an
// obstacle. May return an empty workspace.
Workspace eliminate_collisions(const Workspace& ws, std::span<const Box3> obstacles, const ArmConfiguration& config,
                               double margin = 0.0);

// Points with an orientation are scored against the matching filtered
// workspace. Throws EmptyWorkspace, NoMatchingOrientation.
ConfigScore score_config(const Workspace& ws, std::span<const MotionPoint> points,
                         ScoringMode mode = ScoringMode::SURFACE);

// Static part boxes when the static part is the base; nothing otherwise.
std::vector<Box3> obstacles_for(const PartSplit& split, BaseMode mode);

struct SearchOptions {
  int resolution = kDefaultResolution;
  ScoringMode mode = ScoringMode::SURFACE;
  // Scores within this many mm count as equal; the lower index wins.
  double tie_tolerance = 1e-6;
  // Treats a configuration as infeasible when any point lies off its workspace.
  bool require_reachable = false;
};

struct ConfigChoice {
  ArmConfiguration configuration;
  ConfigScore score;
  // Workspace of the chosen configuration after obstacle elimination.
  Workspace workspace;
  // Score of every configuration; empty when it was infeasible.
  std::array<std::optional<ConfigScore>, kConfigCount> scores;
};

// Throws AllConfigsInfeasible.
ConfigChoice select_configuration(const ArmTemplate& tpl, const TaskSpec& spec, std::span<const Box3> obstacles,
                                  const SearchOptions& options = {});

// Nearest point of the hull surface for exterior points; interior points are
// returned unchanged. Throws EmptyWorkspace.
Vec3 snap_point(const Workspace& ws, const Vec3& p);
bool inside_workspace(const Workspace& ws, const Vec3& p);

}  // namespace forge
