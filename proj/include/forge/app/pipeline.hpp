#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "forge/app/design.hpp"
#include "forge/error.hpp"
#include "forge/fabrication/bundle.hpp"

namespace forge {

inline constexpr const char* kStepSelection = "#1 selection";
inline constexpr const char* kStepTask = "#2 task";
inline constexpr const char* kStepGeneration = "#3 generation";
inline constexpr const char* kStepFabrication = "#4 fabrication";

// A module error tagged with the pipeline step it came from.
class StepError : public Error {
 public:
  StepError(std::string step, const Error& cause);
  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

struct SelectionStage {
  PartSplit split;
  ShapeClass shape;
};

// Splits the mesh, bridges two disjoint statics with a pillar and classifies
// the transformable part.
SelectionStage run_selection(const Mesh& mesh, const SweepSelection& selection);

// Rebuilds the task and rejects it when validate() reports a violation.
// Throws InvalidDesign.
TaskSpec build_task(const std::vector<MotionPoint>& points, const std::optional<AttachSurface>& surface,
                    std::vector<ReferenceObject> references = {});

struct GenerationStage {
  SegmentationResult segmentation;
  ArmTemplate arm;
  ConfigChoice choice;
  // Motion points outside the chosen workspace hull.
  std::vector<std::size_t> exterior;
};

// Segments the transformable part and builds the three-configuration arm.
std::pair<SegmentationResult, ArmTemplate> build_arm(const SelectionStage& selection, BaseMode mode);

GenerationStage run_generation(const SelectionStage& selection, BaseMode mode, const TaskSpec& spec, int resolution,
                               bool require_reachable = false);

struct SnapRecord {
  std::size_t index = 0;
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  double distance = 0.0;
};

// Moves point `index` onto the workspace; interior points stay put.
TaskSpec snap_motion_point(const TaskSpec& spec, const Workspace& ws, std::size_t index, SnapRecord* record = nullptr);

struct FabricationInputs {
  std::string name;
  bool motorized = true;
  double speed_deg_s = kDefaultSpeed;
  std::vector<std::size_t> snapped;
};

FabricationBundle run_fabrication(const SelectionStage& selection, const GenerationStage& generation,
                                  const TaskSpec& spec, const FabricationInputs& inputs);

struct PipelineOptions {
  std::optional<int> resolution;  // overrides the design file
  bool snap = true;
};

struct PipelineReport {
  std::string name;
  int config_index = 0;
  ArmCase arm_case = ArmCase::UNFOLDED;
  int steering_joint = 0;
  double rmse = 0.0;
  std::array<std::optional<double>, kConfigCount> scores;
  std::vector<SnapRecord> snapped;
  std::vector<std::string> files;

  nlohmann::json to_json() const;
};

struct PipelineResult {
  FabricationBundle bundle;
  PipelineReport report;
};

// Every step in order; failures surface as StepError.
PipelineResult generate(const DesignFile& design, const PipelineOptions& options = {});
// generate() followed by export into `out_dir`.
PipelineReport run_pipeline(const DesignFile& design, const std::filesystem::path& out_dir,
                            const PipelineOptions& options = {});

}  // namespace forge
