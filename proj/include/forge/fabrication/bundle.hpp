#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/fabrication/fabrication.hpp"
#include "forge/fabrication/trajectory.hpp"

namespace forge {

struct NamedMesh {
  std::string file;
  std::string kind;  // link, connector, hinge, pivot, end_effector, static, pillar
  const Mesh* mesh = nullptr;
};

struct FabricationBundle {
  std::string object_name;
  bool motorized = true;
  std::vector<Mesh> link_components;
  std::vector<Connector> connectors;
  std::vector<MotorShell> shells;
  std::optional<EndEffector> end_effector;
  std::vector<Mesh> statics;
  std::optional<Mesh> pillar;
  JointTrajectory trajectory;
  nlohmann::json manifest;

  // Every exported mesh with its file name, in assembly order.
  std::vector<NamedMesh> meshes() const;
};

struct BundleOptions {
  std::string object_name = "object";
  bool motorized = true;
  MotorSpec motor = xl320();
  double speed_deg_s = kDefaultSpeed;
  FabricationOptions fabrication;
  IkOptions ik;
  // Motion points whose position was snapped; IK on them is best effort.
  std::vector<std::size_t> snapped;
};

// Throws MotorDoesNotFit, UnsupportedSurface, PointOutsideWorkspace,
// IKDivergence and the CSG errors.
FabricationBundle build_bundle(const PartSplit& split, const SegmentationResult& seg, const ArmConfiguration& config,
                               const Workspace& ws, const TaskSpec& spec, const BundleOptions& options = {});

nlohmann::json dh_table_json(const ArmConfiguration& config);

// File name -> contents. Identical bundles give identical bytes.
std::map<std::string, std::string> render_bundle(const FabricationBundle& bundle);

// Writes the rendered files into `dir` (created if missing). Throws IOFailure.
nlohmann::json export_bundle(const FabricationBundle& bundle, const std::filesystem::path& dir);

}  // namespace forge
