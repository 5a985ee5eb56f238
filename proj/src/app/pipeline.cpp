#include "forge/app/pipeline.hpp"

#include "forge/mesh/mesh_io.hpp"

namespace forge {

namespace {

// Room left beside the pillar for the motor wall.
constexpr double kPillarClearance = 1.0;

template <typename Fn>
auto in_step(const char* step, Fn&& fn) {
  try {
    return fn();
  } catch (const StepError&) {
    throw;
  } catch (const Error& e) {
    throw StepError(step, e);
  }
}

nlohmann::json vec(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

}  // namespace

StepError::StepError(std::string step, const Error& cause)
    : Error(Verbatim{}, cause.code(), step + ": " + cause.what()), step_(std::move(step)) {}

SelectionStage run_selection(const Mesh& mesh, const SweepSelection& selection) {
  SelectionStage s;
  s.split = select_part(mesh, selection);
  if (s.split.statics.size() == 2) s.split = bridge_disjoint(s.split, kPillarClearance);
  s.shape = classify_shape(s.split.transformable);
  return s;
}

TaskSpec build_task(const std::vector<MotionPoint>& points, const std::optional<AttachSurface>& surface,
                    std::vector<ReferenceObject> references) {
  TaskSpec spec = TaskSpec::from_parts(points, surface, std::move(references));
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "invalid task:";
    for (const Violation& v : violations) {
      msg += " " + v.code;
      if (v.point_index) msg += "@" + std::to_string(*v.point_index);
      msg += " (" + v.message + ");";
    }
    fail(ErrorCode::InvalidDesign, msg);
  }
  return spec;
}

std::pair<SegmentationResult, ArmTemplate> build_arm(const SelectionStage& selection, BaseMode mode) {
  const PartSplit& split = selection.split;
  SegmentationOptions seg;
  if (!split.statics.empty()) seg.static_box = bounding_box(concatenate(split.statics));
  SegmentationResult links = selection.shape.kind == ShapeKind::SLENDER
                                 ? segment_slender(split.transformable, selection.shape.longest_axis, seg)
                                 : segment_nonslender(split.transformable, selection.shape.principal_axis, seg);
  ArmTemplate arm = build_template(split, selection.shape, mode, links);
  return {std::move(links), std::move(arm)};
}

GenerationStage run_generation(const SelectionStage& selection, BaseMode mode, const TaskSpec& spec, int resolution,
                               bool require_reachable) {
  GenerationStage g;
  const PartSplit& split = selection.split;
  std::tie(g.segmentation, g.arm) = build_arm(selection, mode);

  SearchOptions search;
  search.resolution = resolution;
  search.require_reachable = require_reachable;
  const auto obstacles = obstacles_for(split, mode);
  g.choice = select_configuration(g.arm, spec, obstacles, search);
  for (std::size_t i = 0; i < spec.points().size(); ++i) {
    if (!inside_workspace(g.choice.workspace, spec.points()[i].position)) g.exterior.push_back(i);
  }
  return g;
}

TaskSpec snap_motion_point(const TaskSpec& spec, const Workspace& ws, std::size_t index, SnapRecord* record) {
  if (index >= spec.points().size()) fail(ErrorCode::InvalidDesign, "no motion point " + std::to_string(index));
  std::vector<MotionPoint> points = spec.points();
  const Vec3 from = points[index].position;
  points[index].position = snap_point(ws, from);
  if (record) *record = {index, from, points[index].position, (points[index].position - from).norm()};
  return TaskSpec::from_parts(std::move(points), spec.attach_surface(), spec.references());
}

FabricationBundle run_fabrication(const SelectionStage& selection, const GenerationStage& generation,
                                  const TaskSpec& spec, const FabricationInputs& inputs) {
  BundleOptions opt;
  opt.object_name = inputs.name;
  opt.motorized = inputs.motorized;
  opt.motor = motor_spec_from_env();
  opt.speed_deg_s = inputs.speed_deg_s;
  opt.snapped = inputs.snapped;
  return build_bundle(selection.split, generation.segmentation, generation.choice.configuration,
                      generation.choice.workspace, spec, opt);
}

nlohmann::json PipelineReport::to_json() const {
  nlohmann::json scores_json = nlohmann::json::array();
  for (const auto& s : scores) scores_json.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
  nlohmann::json snaps = nlohmann::json::array();
  for (const SnapRecord& s : snapped) {
    snaps.push_back({{"index", s.index}, {"from", vec(s.from)}, {"to", vec(s.to)}, {"distance_mm", s.distance}});
  }
  return {{"name", name},
          {"config_index", config_index},
          {"case", to_string(arm_case)},
          {"steering_joint", steering_joint + 1},
          {"rmse_mm", rmse},
          {"config_rmse_mm", scores_json},
          {"snapped", snaps},
          {"files", files}};
}

PipelineResult generate(const DesignFile& design, const PipelineOptions& options) {
  const SelectionStage selection = in_step(kStepSelection, [&] {
    return run_selection(load_mesh_file(design.mesh_path), design.selection);
  });

  TaskSpec spec = in_step(kStepTask, [&] {
    std::vector<ReferenceObject> refs;
    for (const ReferenceEntry& r : design.references) refs.push_back({load_mesh_file(r.mesh_path), r.transform});
    return build_task(design.motion_points, design.attach_surface, std::move(refs));
  });

  const int resolution = options.resolution.value_or(design.resolution.value_or(kDefaultResolution));
  const GenerationStage generation = in_step(kStepGeneration, [&] {
    return run_generation(selection, design.base_mode, spec, resolution, !options.snap);
  });

  PipelineReport report;
  report.name = design.name;
  for (std::size_t i : generation.exterior) {
    SnapRecord r;
    spec = in_step(kStepGeneration, [&] { return snap_motion_point(spec, generation.choice.workspace, i, &r); });
    report.snapped.push_back(r);
  }

  FabricationInputs inputs;
  inputs.name = design.name;
  inputs.motorized = design.motorized;
  inputs.speed_deg_s = design.speed_deg_s.value_or(kDefaultSpeed);
  inputs.snapped = generation.exterior;
  FabricationBundle bundle = in_step(kStepFabrication, [&] { return run_fabrication(selection, generation, spec, inputs); });

  const ArmConfiguration& config = generation.choice.configuration;
  report.config_index = config.index;
  report.arm_case = config.arm_case;
  report.steering_joint = config.steering_joint;
  report.rmse = generation.choice.score.rmse;
  for (int c = 0; c < kConfigCount; ++c) {
    if (generation.choice.scores[c]) report.scores[c] = generation.choice.scores[c]->rmse;
  }
  for (const auto& [file, bytes] : render_bundle(bundle)) report.files.push_back(file);
  return {std::move(bundle), std::move(report)};
}

PipelineReport run_pipeline(const DesignFile& design, const std::filesystem::path& out_dir,
                            const PipelineOptions& options) {
  PipelineResult result = generate(design, options);
  in_step(kStepFabrication, [&] { return export_bundle(result.bundle, out_dir); });
  return std::move(result.report);
}

}  // namespace forge
